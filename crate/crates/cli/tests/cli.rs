use std::process::{Command, Output};

fn soapfilm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soapfilm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_prints_length() {
    let o = soapfilm(&["construct", "--name", "fig2b"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "5.196152422707");
}

#[test]
fn unknown_name_is_a_usage_error() {
    let o = soapfilm(&["construct", "--name", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn formula_values_and_domain() {
    let o = soapfilm(&["formula", "--n", "1", "--q", "2"]);
    assert_eq!(stdout(&o).trim(), "5.358898943541");
    let o = soapfilm(&["formula", "--p", "6", "--q", "3"]);
    assert_eq!(stdout(&o).trim(), "5.000000000000");
    assert_eq!(soapfilm(&["formula", "--n", "7", "--q", "1"]).status.code(), Some(2));
    assert_eq!(soapfilm(&["formula", "--q", "1"]).status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(soapfilm(&["relax", "--n", "2"]).status.code(), Some(2));
    assert_eq!(soapfilm(&["catalog", "--max-length", "-1"]).status.code(), Some(2));
    assert_eq!(soapfilm(&["--threads", "0", "catalog", "--max-length", "6"]).status.code(), Some(2));
    assert_eq!(soapfilm(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_to_svg_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("tree.json");
    let direct = dir.path().join("direct.svg");
    let rendered = dir.path().join("rendered.svg");
    let o = soapfilm(&[
        "construct",
        "--name",
        "cfg_a",
        "--json",
        json.to_str().unwrap(),
        "--svg",
        direct.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = soapfilm(&["render", "--input", json.to_str().unwrap(), "--output", rendered.to_str().unwrap()]);
    assert!(o.status.success());
    let a = std::fs::read_to_string(&direct).unwrap();
    let b = std::fs::read_to_string(&rendered).unwrap();
    assert!(a.contains("<svg"));
    assert_eq!(a, b);
}

#[test]
fn render_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("bad.json");
    std::fs::write(&json, "{\"name\": 1}").unwrap();
    let out = dir.path().join("x.svg");
    let o = soapfilm(&["render", "--input", json.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn relax_json_to_stdout() {
    let o = soapfilm(&["relax", "--n", "4", "--json", "-"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.trim_start().starts_with('['));
    assert!(text.contains("\"length\""));
}

#[test]
fn spanning_table() {
    let o = soapfilm(&["spanning", "--n", "6", "--max-length", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("5.000000000000"));
}
