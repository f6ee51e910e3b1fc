//! Tree documents (JSON exchange format), SVG drawings and catalog output.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::catalog::CatalogEntry;
use crate::geom::{Point2, TerminalSet};
use crate::relax::GeometricTree;
use crate::spanning::{SpanningClass, SpanningTree};
use crate::topology::is_connected;

/// Significant digits of serialized reals.
pub const JSON_DIGITS: usize = 15;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("malformed tree document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("edges do not form a tree on {0} vertices")]
    NotATree(usize),
    #[error("stored length {stored} differs from the edge sum {computed}")]
    LengthMismatch { stored: f64, computed: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
}

/// Formats `x` with [`JSON_DIGITS`] significant digits, trailing zeros
/// removed, in plain notation unless the exponent is extreme.
pub fn fmt_sig(x: f64) -> String {
    fmt_digits(x, JSON_DIGITS)
}

fn fmt_digits(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if (-6..21).contains(&exp) {
        let mut s = String::new();
        if exp < 0 {
            s.push_str("0.");
            s.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            s.push_str(&digits_only);
        } else {
            let int_len = exp as usize + 1;
            if int_len >= digits_only.len() {
                s.push_str(&digits_only);
                s.extend(std::iter::repeat_n('0', int_len - digits_only.len()));
            } else {
                s.push_str(&digits_only[..int_len]);
                s.push('.');
                s.push_str(&digits_only[int_len..]);
            }
        }
        trim_fraction(s)
    } else {
        let m = trim_fraction(format!("{}.{}", &digits_only[..1], &digits_only[1..]));
        format!("{m}e{exp}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// The exchange format for embedded trees. Vertex indices run over the
/// terminals first, then the Steiner points.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub name: String,
    pub terminals: Vec<[f64; 2]>,
    pub steiner_points: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    pub length: f64,
    pub p: usize,
    pub q: usize,
    pub stable: bool,
}

fn pair(p: Point2) -> [f64; 2] {
    [p.x(), p.y()]
}

impl TreeDocument {
    pub fn from_tree(name: &str, tree: &GeometricTree) -> Self {
        Self {
            name: name.to_string(),
            terminals: tree.terminals().points().iter().map(|&p| pair(p)).collect(),
            steiner_points: tree.steiner_points().iter().map(|&p| pair(p)).collect(),
            edges: tree.edges().iter().map(|&(u, v)| [u, v]).collect(),
            length: tree.total_length(),
            p: tree.p(),
            q: tree.q(),
            stable: tree.stable(),
        }
    }

    /// A spanning tree has no Steiner points; `stable` is left false since
    /// no equilibrium claim is made for it.
    pub fn from_spanning(name: &str, terminals: &TerminalSet, tree: &SpanningTree, q: usize) -> Self {
        Self {
            name: name.to_string(),
            terminals: terminals.points().iter().map(|&p| pair(p)).collect(),
            steiner_points: Vec::new(),
            edges: tree.edges().iter().map(|&(u, v)| [u, v]).collect(),
            length: tree.total_length(),
            p: 0,
            q,
            stable: false,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.terminals.len() + self.steiner_points.len()
    }

    fn vertex(&self, i: usize) -> [f64; 2] {
        let t = self.terminals.len();
        if i < t {
            self.terminals[i]
        } else {
            self.steiner_points[i - t]
        }
    }

    /// Sum of the edge lengths recomputed from the coordinates.
    pub fn edge_sum(&self) -> f64 {
        self.edges
            .iter()
            .map(|&[u, v]| {
                let (a, b) = (self.vertex(u), self.vertex(v));
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .sum()
    }

    /// Checks indices, tree shape and the stored length (within 1e-9).
    pub fn validate(&self) -> Result<(), RenderError> {
        let n = self.vertex_count();
        if self.terminals.iter().chain(&self.steiner_points).flatten().any(|c| !c.is_finite()) {
            return Err(RenderError::NonFinite);
        }
        for &[u, v] in &self.edges {
            if u >= n || v >= n {
                return Err(RenderError::EdgeOutOfRange(u, v, n));
            }
        }
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        if pairs.len() + 1 != n || pairs.iter().any(|&(u, v)| u == v) || !is_connected(n, &pairs) {
            return Err(RenderError::NotATree(n));
        }
        let computed = self.edge_sum();
        if (computed - self.length).abs() > 1e-9 {
            return Err(RenderError::LengthMismatch {
                stored: self.length,
                computed,
            });
        }
        Ok(())
    }

    /// Parses and validates a document.
    pub fn from_json(text: &str) -> Result<Self, RenderError> {
        let doc: TreeDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    /// Canonical serialization: fixed field order, two-space indent,
    /// reals at 15 significant digits, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        self.write_json(&mut s, "");
        s.push('\n');
        s
    }

    fn write_json(&self, s: &mut String, indent: &str) {
        let points = |pts: &[[f64; 2]]| {
            let items: Vec<String> = pts
                .iter()
                .map(|p| format!("[{}, {}]", fmt_sig(p[0]), fmt_sig(p[1])))
                .collect();
            format!("[{}]", items.join(", "))
        };
        let edges: Vec<String> = self.edges.iter().map(|e| format!("[{}, {}]", e[0], e[1])).collect();
        let name = serde_json::to_string(&self.name).expect("string serializes");
        let inner = format!("{indent}  ");
        let _ = write!(
            s,
            "{{\n{inner}\"name\": {name},\n{inner}\"terminals\": {},\n{inner}\"steiner_points\": {},\n\
             {inner}\"edges\": [{}],\n{inner}\"length\": {},\n{inner}\"p\": {},\n{inner}\"q\": {},\n\
             {inner}\"stable\": {}\n{indent}}}",
            points(&self.terminals),
            points(&self.steiner_points),
            edges.join(", "),
            fmt_sig(self.length),
            self.p,
            self.q,
            self.stable,
        );
    }
}

/// A JSON array of documents in the canonical layout.
pub fn documents_json(docs: &[TreeDocument]) -> String {
    if docs.is_empty() {
        return "[]\n".to_string();
    }
    let mut s = String::from("[\n");
    for (i, doc) in docs.iter().enumerate() {
        s.push_str("  ");
        doc.write_json(&mut s, "  ");
        s.push_str(if i + 1 < docs.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n");
    s
}

/// Spanning classes as documents, with the class size in the name.
pub fn spanning_documents(terminals: &TerminalSet, classes: &[SpanningClass]) -> Vec<TreeDocument> {
    classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            TreeDocument::from_spanning(
                &format!("spanning_{i}_x{}", c.multiplicity),
                terminals,
                &c.representative,
                c.q,
            )
        })
        .collect()
}

/// Drawing parameters, in polygon-side units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    pub stroke_width: f64,
    pub terminal_radius: f64,
    pub steiner_radius: f64,
    /// Padding as a fraction of the larger bounding-box dimension.
    pub margin: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            stroke_width: 0.01,
            terminal_radius: 0.03,
            steiner_radius: 0.015,
            margin: 0.05,
        }
    }
}

fn svg_num(x: f64) -> String {
    let s = trim_fraction(format!("{x:.9}"));
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Standalone SVG drawing. The y axis is flipped so the picture has the
/// usual mathematical orientation. Edges come first in sorted order, then
/// terminals (filled) and Steiner points (hollow) by index.
pub fn emit_svg(doc: &TreeDocument, style: &RenderStyle) -> String {
    let pts: Vec<[f64; 2]> = (0..doc.vertex_count())
        .map(|i| {
            let v = doc.vertex(i);
            [v[0], -v[1]]
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    if pts.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = style.margin * (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let (vx, vy, vw, vh) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        svg_num(vx),
        svg_num(vy),
        svg_num(vw),
        svg_num(vh)
    );
    let _ = writeln!(s, "  <title>{}</title>", xml_escape(&doc.name));
    let _ = writeln!(
        s,
        "  <g stroke=\"black\" stroke-width=\"{}\" stroke-linecap=\"round\">",
        svg_num(style.stroke_width)
    );
    let mut edges: Vec<(usize, usize)> = doc.edges.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    for (u, v) in edges {
        let _ = writeln!(
            s,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            svg_num(pts[u][0]),
            svg_num(pts[u][1]),
            svg_num(pts[v][0]),
            svg_num(pts[v][1])
        );
    }
    s.push_str("  </g>\n");
    let t = doc.terminals.len();
    for (i, p) in pts.iter().enumerate() {
        if i < t {
            let _ = writeln!(
                s,
                "  <circle class=\"terminal\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
                svg_num(p[0]),
                svg_num(p[1]),
                svg_num(style.terminal_radius)
            );
        } else {
            let _ = writeln!(
                s,
                "  <circle class=\"steiner\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"{}\"/>",
                svg_num(p[0]),
                svg_num(p[1]),
                svg_num(style.steiner_radius),
                svg_num(style.stroke_width)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn json_opt_q(q: Option<i64>) -> String {
    q.map_or("null".to_string(), |v| v.to_string())
}

/// Catalog as a JSON array, one object per entry, fields in fixed order.
pub fn catalog_json(entries: &[CatalogEntry]) -> String {
    let mut s = String::from("[\n");
    for (i, e) in entries.iter().enumerate() {
        let matched = match &e.matched {
            Some(c) => format!(
                "{{\"length\": {}, \"p\": {}, \"q\": {}}}",
                fmt_sig(c.length),
                c.p,
                c.q
            ),
            None => "null".to_string(),
        };
        let note = e
            .note
            .map_or("null".to_string(), |n| serde_json::to_string(n).expect("string serializes"));
        let _ = write!(
            s,
            "  {{\"p\": {}, \"n\": {}, \"q\": {}, \"q_alt\": {}, \"predicted_length\": {}, \"status\": \"{}\", \"matched\": {}, \"note\": {}}}",
            e.p,
            e.n,
            e.q,
            json_opt_q(e.q_alt),
            fmt_sig(e.predicted_length),
            e.status.as_str(),
            matched,
            note
        );
        s.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n");
    s
}

/// Catalog as an aligned text table.
pub fn catalog_table(entries: &[CatalogEntry]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>5} {:>16} {:<21} {:>16} {:>3} {:>3}",
        "p", "n", "q", "predicted", "status", "matched", "p'", "q'"
    );
    for e in entries {
        let q = match e.q_alt {
            Some(alt) => format!("{}|{}", e.q, alt),
            None => e.q.to_string(),
        };
        let (ml, mp, mq) = match &e.matched {
            Some(c) => (format!("{:.12}", c.length), c.p.to_string(), c.q.to_string()),
            None => ("-".to_string(), "-".to_string(), "-".to_string()),
        };
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>5} {:>16.12} {:<21} {:>16} {:>3} {:>3}",
            e.p,
            e.n,
            q,
            e.predicted_length,
            e.status.as_str(),
            ml,
            mp,
            mq
        );
    }
    let notes: Vec<&CatalogEntry> = entries.iter().filter(|e| e.note.is_some()).collect();
    if !notes.is_empty() {
        s.push('\n');
        for e in notes {
            let _ = writeln!(s, "{:.12}: {}", e.predicted_length, e.note.unwrap_or_default());
        }
    }
    s
}
