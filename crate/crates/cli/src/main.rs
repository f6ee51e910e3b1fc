use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use soapfilm_core::catalog::{empirical_length, empirical_length_p, generate_catalog};
use soapfilm_core::geom::regular_polygon;
use soapfilm_core::relax::{find_local_minima_in, Equilibrium, RelaxOptions};
use soapfilm_core::render::{
    catalog_json, catalog_table, documents_json, emit_svg, spanning_documents, RenderStyle, TreeDocument,
};
use soapfilm_core::spanning::spanning_catalog;
use soapfilm_core::topology::MAX_TERMINALS;
use soapfilm_core::triangulation::{build_configuration, CONFIGURATION_NAMES};

#[derive(Parser)]
#[command(name = "soapfilm", version, about = "Steiner and spanning trees on regular polygons")]
struct Cli {
    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named configuration and print its length.
    Construct {
        #[arg(long)]
        name: String,
        /// Write the tree document here ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an SVG drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Relax every topology on the regular n-gon and list the equilibria.
    Relax {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steiner_min: Option<usize>,
        #[arg(long)]
        steiner_max: Option<usize>,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_length: f64,
        /// Also require open angles (at least 120°) at every terminal.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Spanning trees of the regular n-gon up to a length, grouped by congruence.
    Spanning {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_length: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Predicted hexagon lengths joined with the computed trees.
    Catalog {
        #[arg(long)]
        max_length: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate the empirical length formula.
    #[command(group(ArgGroup::new("index").required(true).args(["n", "p"])))]
    Formula {
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
    },
    /// Draw a tree document as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

enum Failure {
    Usage(String),
    Compute(String),
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
    }
}

fn polygon_size(n: usize, max: usize) -> Result<(), Failure> {
    if (3..=max).contains(&n) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--n must lie in 3..={max}, got {n}")))
    }
}

fn finite_positive(x: f64) -> Result<(), Failure> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--max-length must be positive, got {x}")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { name, json, svg } => {
            if !CONFIGURATION_NAMES.contains(&name.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown configuration {name:?}; expected one of {}",
                    CONFIGURATION_NAMES.join(", ")
                )));
            }
            let tree = build_configuration(&name).map_err(compute)?;
            let doc = TreeDocument::from_tree(&name, &tree);
            if let Some(path) = svg {
                write_out(&path, &emit_svg(&doc, &RenderStyle::default()))?;
            }
            match json {
                Some(path) if path.as_os_str() == "-" => write_out(&path, &doc.to_json())?,
                Some(path) => {
                    write_out(&path, &doc.to_json())?;
                    println!("{:.12}", tree.total_length());
                }
                None => println!("{:.12}", tree.total_length()),
            }
        }
        Command::Relax {
            n,
            steiner_min,
            steiner_max,
            max_length,
            strict,
            json,
        } => {
            polygon_size(n, MAX_TERMINALS)?;
            finite_positive(max_length)?;
            let lo = steiner_min.unwrap_or(0);
            let hi = steiner_max.unwrap_or(n - 2);
            if lo > hi || hi > n - 2 {
                return Err(Failure::Usage(format!("Steiner range {lo}..={hi} not inside 0..={}", n - 2)));
            }
            let poly = regular_polygon(n, 1.0).map_err(compute)?;
            let rule = if strict { Equilibrium::Strict } else { Equilibrium::Pinned };
            let found = find_local_minima_in(&poly, lo..=hi, max_length, rule, &RelaxOptions::default())
                .map_err(compute)?;
            let docs: Vec<TreeDocument> = found
                .trees
                .iter()
                .enumerate()
                .map(|(i, t)| TreeDocument::from_tree(&format!("relax_{n}_{i}"), t))
                .collect();
            let to_stdout = json.as_ref().is_some_and(|p| p.as_os_str() == "-");
            if let Some(path) = &json {
                write_out(path, &documents_json(&docs))?;
            }
            if !to_stdout {
                println!("{:>16} {:>3} {:>3}  edges", "length", "p", "q");
                for t in &found.trees {
                    println!("{:>16.12} {:>3} {:>3}  {:?}", t.total_length(), t.p(), t.q(), t.edges());
                }
            }
            let d = &found.diagnostics;
            eprintln!(
                "{} topologies: {} kept, {} duplicates, {} rejected, {} over length, {} degenerate, {} not converged",
                d.topologies,
                found.trees.len(),
                d.duplicates,
                d.rejected,
                d.over_length,
                d.degenerate,
                d.not_converged
            );
        }
        Command::Spanning { n, max_length, json } => {
            polygon_size(n, soapfilm_core::spanning::MAX_SPANNING_TERMINALS)?;
            finite_positive(max_length)?;
            let poly = regular_polygon(n, 1.0).map_err(compute)?;
            let classes = spanning_catalog(&poly, max_length).map_err(compute)?;
            let to_stdout = json.as_ref().is_some_and(|p| p.as_os_str() == "-");
            if let Some(path) = &json {
                write_out(path, &documents_json(&spanning_documents(&poly, &classes)))?;
            }
            if !to_stdout {
                println!("{:>16} {:>5} {:>3}  edges", "length", "count", "q");
                for c in &classes {
                    println!(
                        "{:>16.12} {:>5} {:>3}  {:?}",
                        c.length,
                        c.multiplicity,
                        c.q,
                        c.representative.edges()
                    );
                }
            }
        }
        Command::Catalog { max_length, format } => {
            finite_positive(max_length)?;
            let entries = generate_catalog(max_length).map_err(compute)?;
            match format {
                Format::Table => print!("{}", catalog_table(&entries)),
                Format::Json => print!("{}", catalog_json(&entries)),
            }
        }
        Command::Formula { n, p, q } => {
            let value = match (n, p) {
                (Some(n), None) => empirical_length(n, q),
                (None, Some(p)) => empirical_length_p(p, q),
                _ => unreachable!("clap enforces exactly one of --n and --p"),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{value:.12}");
        }
        Command::Render { input, output } => {
            let text = fs::read_to_string(&input).map_err(|e| Failure::Compute(format!("{}: {e}", input.display())))?;
            let doc = TreeDocument::from_json(&text).map_err(compute)?;
            write_out(&output, &emit_svg(&doc, &RenderStyle::default()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
