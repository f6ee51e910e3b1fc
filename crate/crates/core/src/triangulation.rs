//! Trees assembled from chains of triangles.
//!
//! Each triangle contributes its three-terminal Steiner tree. Triangles meet
//! at link points placed on diagonals of the polygon: a point shared by two
//! triangles is passed straight through by the film, a point shared by three
//! becomes a junction. The total length is the sum over triangles plus any
//! direct terminal-to-terminal stems.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::geom::{
    angle_between, fermat_point, regular_polygon, similar_same_chirality, stem_elevation,
    steiner_3_length, Angle, GeomError, Point2, TerminalSet, Triangle, TriangleVertex,
};
use crate::relax::{GeometricTree, RelaxError};
use crate::topology::{SteinerTopology, TopologyError};

/// Elevation agreement required of a solved partition.
pub const ELEVATION_TOL: f64 = 1e-12;
/// Bisection stops once the bracket is narrower than this.
pub const BRACKET_WIDTH: f64 = 1e-13;
/// Angular tolerance for collinearity and 120° checks at link points.
pub const LINK_ANGLE_TOL: f64 = 1e-9;
/// Angular tolerance for declared similarities.
pub const SIMILARITY_TOL: f64 = 1e-9;
/// Area slack of the triangle overlap test.
pub const OVERLAP_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("unknown configuration {0:?}")]
    UnknownName(String),
    #[error("no link point named {0:?}")]
    UnknownLink(String),
    #[error("link {0:?} is not placed by equal elevation")]
    NotSolvable(String),
    #[error("elevation difference at link {link:?} has no sign change on [{lo}, {hi}]")]
    NoSignChange { link: String, lo: f64, hi: f64 },
    #[error("link {link:?}: {reason}")]
    BadLink { link: String, reason: String },
    #[error("chain references terminal {0}, outside the terminal set")]
    TerminalOutOfRange(usize),
    #[error("link {0} referenced before it is placed")]
    LinkOrder(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Relax(#[from] RelaxError),
}

/// A triangle corner: a terminal or one of the chain's link points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainVertex {
    Terminal(usize),
    Link(usize),
}

/// How a link point is placed on its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkRule {
    /// Intersection of the diagonal with the line through two vertices.
    Crossing(ChainVertex, ChainVertex),
    /// The point whose stems in the two adjacent triangles have the same
    /// elevation, found by bisection on the distance from the first
    /// diagonal endpoint inside `bracket`.
    EqualElevation { bracket: (f64, f64) },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkPoint {
    /// Name of the partition parameter.
    pub name: String,
    pub diagonal: (usize, usize),
    pub rule: LinkRule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleChainSpec {
    pub terminals: TerminalSet,
    /// Corners listed in correspondence order for declared similarities.
    pub triangles: Vec<[ChainVertex; 3]>,
    pub link_points: Vec<LinkPoint>,
    pub trivial_extensions: Vec<(usize, usize)>,
    /// Pairs of triangle indices declared similar with matching handedness.
    pub similar: Vec<(usize, usize)>,
}

/// Where each link point landed.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedChain {
    pub points: Vec<Point2>,
    /// Distance of each link from the first endpoint of its diagonal.
    pub parameters: Vec<f64>,
}

impl TriangleChainSpec {
    fn link_index(&self, name: &str) -> Result<usize, ChainError> {
        self.link_points
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| ChainError::UnknownLink(name.to_string()))
    }

    fn check_indices(&self) -> Result<(), ChainError> {
        let n = self.terminals.len();
        let term = |i: usize| if i < n { Ok(()) } else { Err(ChainError::TerminalOutOfRange(i)) };
        let vert = |v: ChainVertex| match v {
            ChainVertex::Terminal(i) => term(i),
            ChainVertex::Link(j) if j < self.link_points.len() => Ok(()),
            ChainVertex::Link(j) => Err(ChainError::LinkOrder(j)),
        };
        for link in &self.link_points {
            term(link.diagonal.0)?;
            term(link.diagonal.1)?;
            if let LinkRule::Crossing(a, b) = link.rule {
                vert(a)?;
                vert(b)?;
            }
        }
        for tri in &self.triangles {
            tri.iter().try_for_each(|&v| vert(v))?;
        }
        for &(a, b) in &self.trivial_extensions {
            term(a)?;
            term(b)?;
        }
        Ok(())
    }

    /// Triangles that use link `j`.
    fn triangles_at(&self, j: usize) -> Vec<usize> {
        self.triangles
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&ChainVertex::Link(j)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Places every link given one parameter per link (crossing links ignore
/// theirs). Crossing links may use any link already placed, and any
/// equal-elevation link regardless of order.
fn place(spec: &TriangleChainSpec, params: &[f64]) -> Result<Vec<Point2>, ChainError> {
    let m = spec.link_points.len();
    let mut pos: Vec<Option<Point2>> = vec![None; m];
    for (j, link) in spec.link_points.iter().enumerate() {
        if matches!(link.rule, LinkRule::EqualElevation { .. }) {
            let (p, q) = (spec.terminals.get(link.diagonal.0), spec.terminals.get(link.diagonal.1));
            pos[j] = Some(p + (q - p).unit() * params[j]);
        }
    }
    for (j, link) in spec.link_points.iter().enumerate() {
        if let LinkRule::Crossing(a, b) = link.rule {
            let get = |v: ChainVertex| match v {
                ChainVertex::Terminal(i) => Ok(spec.terminals.get(i)),
                ChainVertex::Link(k) => pos[k].ok_or(ChainError::LinkOrder(k)),
            };
            let (p, q) = (spec.terminals.get(link.diagonal.0), spec.terminals.get(link.diagonal.1));
            let (r, s) = (get(a)?, get(b)?);
            let d1 = q - p;
            let d2 = s - r;
            let den = d1.cross(d2);
            if den.abs() < 1e-14 * d1.norm() * d2.norm() {
                return Err(ChainError::BadLink {
                    link: link.name.clone(),
                    reason: "crossing lines are parallel".into(),
                });
            }
            let t = (r - p).cross(d2) / den;
            pos[j] = Some(p + d1 * t);
        }
    }
    Ok(pos.into_iter().map(|p| p.expect("every link placed")).collect())
}

fn vertex_at(spec: &TriangleChainSpec, links: &[Point2], v: ChainVertex) -> Point2 {
    match v {
        ChainVertex::Terminal(i) => spec.terminals.get(i),
        ChainVertex::Link(j) => links[j],
    }
}

/// Stem elevation at link `j` in triangle `tri`, measured from the corner
/// on the link's diagonal line towards the remaining corner.
fn elevation_in(spec: &TriangleChainSpec, links: &[Point2], j: usize, tri: usize) -> Result<f64, ChainError> {
    let link = &spec.link_points[j];
    let here = links[j];
    let (p, q) = (spec.terminals.get(link.diagonal.0), spec.terminals.get(link.diagonal.1));
    let dir = (q - p).unit();
    let others: Vec<Point2> = spec.triangles[tri]
        .iter()
        .filter(|&&v| v != ChainVertex::Link(j))
        .map(|&v| vertex_at(spec, links, v))
        .collect();
    let on_line = |x: Point2| dir.cross(x - here).abs() <= 1e-9 * (x - here).norm().max(1.0);
    let (side, other) = match (on_line(others[0]), on_line(others[1])) {
        (true, false) => (others[0], others[1]),
        (false, true) => (others[1], others[0]),
        _ => {
            return Err(ChainError::BadLink {
                link: link.name.clone(),
                reason: format!("triangle {tri} needs exactly one corner on the diagonal"),
            })
        }
    };
    let angle = Angle::from_radians(angle_between(here, side, other));
    let alpha = stem_elevation(here.distance(side), here.distance(other), angle)?;
    Ok(alpha.radians())
}

fn elevation_gap(spec: &TriangleChainSpec, params: &[f64], j: usize) -> Result<f64, ChainError> {
    let links = place(spec, params)?;
    let tris = spec.triangles_at(j);
    if tris.len() != 2 {
        return Err(ChainError::BadLink {
            link: spec.link_points[j].name.clone(),
            reason: format!("equal elevation needs two triangles, found {}", tris.len()),
        });
    }
    Ok(elevation_in(spec, &links, j, tris[0])? - elevation_in(spec, &links, j, tris[1])?)
}

fn bisect(spec: &TriangleChainSpec, params: &mut [f64], j: usize, bracket: (f64, f64)) -> Result<f64, ChainError> {
    let name = &spec.link_points[j].name;
    let no_change = || ChainError::NoSignChange {
        link: name.clone(),
        lo: bracket.0,
        hi: bracket.1,
    };
    let (mut lo, mut hi) = bracket;
    let eval = |x: f64, params: &mut [f64]| {
        params[j] = x;
        elevation_gap(spec, params, j)
    };
    let f_lo = eval(lo, params).map_err(|_| no_change())?;
    let f_hi = eval(hi, params).map_err(|_| no_change())?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(no_change());
    }
    while hi - lo >= BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = eval(mid, params)?;
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    params[j] = x;
    let gap = elevation_gap(spec, params, j)?;
    if gap.abs() > ELEVATION_TOL {
        return Err(ChainError::BadLink {
            link: name.clone(),
            reason: format!("elevations differ by {gap:e} after bisection"),
        });
    }
    Ok(x)
}

/// Solves every equal-elevation link, sweeping repeatedly when links
/// depend on each other.
fn solve_all(spec: &TriangleChainSpec, overrides: &[(usize, (f64, f64))]) -> Result<ResolvedChain, ChainError> {
    spec.check_indices()?;
    let m = spec.link_points.len();
    let bracket_of = |j: usize| -> Option<(f64, f64)> {
        match spec.link_points[j].rule {
            LinkRule::EqualElevation { bracket } => Some(
                overrides
                    .iter()
                    .find(|(k, _)| *k == j)
                    .map(|&(_, b)| b)
                    .unwrap_or(bracket),
            ),
            LinkRule::Crossing(..) => None,
        }
    };
    let mut params: Vec<f64> = (0..m)
        .map(|j| bracket_of(j).map(|(a, b)| 0.5 * (a + b)).unwrap_or(0.0))
        .collect();
    let solvable: Vec<usize> = (0..m).filter(|&j| bracket_of(j).is_some()).collect();
    let rounds = if solvable.len() > 1 { 100 } else { 1 };
    for _ in 0..rounds {
        let before = params.clone();
        for &j in &solvable {
            let b = bracket_of(j).expect("solvable link has a bracket");
            bisect(spec, &mut params, j, b)?;
        }
        let moved = before.iter().zip(&params).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if moved < BRACKET_WIDTH {
            break;
        }
    }
    let points = place(spec, &params)?;
    let parameters = spec
        .link_points
        .iter()
        .zip(&points)
        .map(|(l, &p)| spec.terminals.get(l.diagonal.0).distance(p))
        .collect();
    Ok(ResolvedChain { points, parameters })
}

/// Places every link of `spec` and returns their positions.
pub fn resolve_chain(spec: &TriangleChainSpec) -> Result<ResolvedChain, ChainError> {
    solve_all(spec, &[])
}

/// Distance along the diagonal from its first endpoint to the named
/// equal-elevation link, solved by bisection on `bracket`.
pub fn solve_partition(spec: &TriangleChainSpec, link: &str, bracket: (f64, f64)) -> Result<f64, ChainError> {
    let j = spec.link_index(link)?;
    if !matches!(spec.link_points[j].rule, LinkRule::EqualElevation { .. }) {
        return Err(ChainError::NotSolvable(link.to_string()));
    }
    Ok(solve_all(spec, &[(j, bracket)])?.parameters[j])
}

/// Sum of the three-terminal tree lengths of the triangles plus the
/// direct stems.
pub fn chain_length(spec: &TriangleChainSpec) -> Result<f64, ChainError> {
    let resolved = resolve_chain(spec)?;
    let mut total = 0.0;
    for tri in &spec.triangles {
        let [a, b, c] = tri.map(|v| vertex_at(spec, &resolved.points, v));
        let angle = Angle::from_radians(angle_between(b, c, a));
        total += steiner_3_length(b.distance(c), b.distance(a), angle)?;
    }
    for &(u, v) in &spec.trivial_extensions {
        total += spec.terminals.get(u).distance(spec.terminals.get(v));
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Vertex(ChainVertex),
    Fermat(usize),
}

type Glued = (BTreeMap<Node, Vec<Node>>, Vec<Point2>);

/// Edges of the glued tree before pass-through links are removed.
fn glue(spec: &TriangleChainSpec, links: &[Point2]) -> Result<Glued, ChainError> {
    let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    let mut connect = |a: Node, b: Node| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    let mut fermat_points = Vec::with_capacity(spec.triangles.len());
    for (k, tri) in spec.triangles.iter().enumerate() {
        let pts = tri.map(|v| vertex_at(spec, links, v));
        let fp = fermat_point(&Triangle::new(pts[0], pts[1], pts[2])?);
        fermat_points.push(fp.point);
        match fp.degenerate_at {
            None => tri.iter().for_each(|&v| connect(Node::Fermat(k), Node::Vertex(v))),
            Some(corner) => {
                let hub = match corner {
                    TriangleVertex::A => 0,
                    TriangleVertex::B => 1,
                    TriangleVertex::C => 2,
                };
                for (i, &v) in tri.iter().enumerate() {
                    if i != hub {
                        connect(Node::Vertex(tri[hub]), Node::Vertex(v));
                    }
                }
            }
        }
    }
    for &(u, v) in &spec.trivial_extensions {
        connect(Node::Vertex(ChainVertex::Terminal(u)), Node::Vertex(ChainVertex::Terminal(v)));
    }
    Ok((adj, fermat_points))
}

/// Builds the embedded tree described by `spec`.
pub fn build_chain(spec: &TriangleChainSpec) -> Result<GeometricTree, ChainError> {
    let resolved = resolve_chain(spec)?;
    let links = &resolved.points;
    let (mut adj, fermat_points) = glue(spec, links)?;

    // Links crossed by the film vanish; their two neighbours join directly.
    for j in 0..spec.link_points.len() {
        let node = Node::Vertex(ChainVertex::Link(j));
        let nb = adj.get(&node).cloned().unwrap_or_default();
        match nb.len() {
            2 => {
                adj.remove(&node);
                let (a, b) = (nb[0], nb[1]);
                for (x, y) in [(a, b), (b, a)] {
                    let list = adj.get_mut(&x).expect("neighbour present");
                    let slot = list.iter().position(|&w| w == node).expect("back edge");
                    list[slot] = y;
                }
            }
            3 => {}
            d => {
                return Err(ChainError::BadLink {
                    link: spec.link_points[j].name.clone(),
                    reason: format!("link ends with {d} edges"),
                })
            }
        }
    }

    let t = spec.terminals.len();
    let mut index: BTreeMap<Node, usize> = BTreeMap::new();
    let mut steiner = Vec::new();
    for i in 0..t {
        index.insert(Node::Vertex(ChainVertex::Terminal(i)), i);
    }
    for (k, &p) in fermat_points.iter().enumerate() {
        if adj.contains_key(&Node::Fermat(k)) {
            index.insert(Node::Fermat(k), t + steiner.len());
            steiner.push(p);
        }
    }
    for (j, &p) in links.iter().enumerate() {
        let node = Node::Vertex(ChainVertex::Link(j));
        if adj.contains_key(&node) {
            index.insert(node, t + steiner.len());
            steiner.push(p);
        }
    }
    let mut edges = Vec::new();
    for (a, list) in &adj {
        for b in list {
            let (u, v) = (index[a], index[b]);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    let topology = SteinerTopology::new(t, steiner.len(), edges)?;
    Ok(GeometricTree::new(spec.terminals.clone(), steiner, topology)?)
}

/// A failed check from [`validate_chain`].
#[derive(Debug, Clone, PartialEq)]
pub enum ChainViolation {
    /// Declared similar triangles fail the labelled, same-handedness test.
    NotSimilar { first: usize, second: usize },
    /// Stems through a two-triangle link bend by `deviation` radians.
    NotCollinear { link: String, deviation: f64 },
    /// Stems at a three-triangle link miss 120° by `deviation` radians.
    NotBalanced { link: String, deviation: f64 },
    /// Link shared by a number of triangles other than two or three.
    BadIncidence { link: String, triangles: usize },
    /// Link outside its diagonal segment.
    OffDiagonal { link: String },
    /// Open interiors of two triangles intersect.
    Overlap { first: usize, second: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    PassThrough,
    Junction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub name: String,
    pub kind: Option<LinkKind>,
    /// Largest angular error of the link condition, in radians.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub links: Vec<LinkReport>,
    pub violations: Vec<ChainViolation>,
}

impl ChainReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Neighbour of `v` in the three-terminal tree of triangle `pts`.
fn stem_end(pts: [Point2; 3], v: usize) -> Option<Point2> {
    let tri = Triangle::new(pts[0], pts[1], pts[2]).ok()?;
    let fp = fermat_point(&tri);
    match fp.degenerate_at {
        None => Some(fp.point),
        Some(c) => {
            let hub = match c {
                TriangleVertex::A => 0,
                TriangleVertex::B => 1,
                TriangleVertex::C => 2,
            };
            // At the hub itself there are two stems; no single direction.
            (hub != v).then_some(pts[hub])
        }
    }
}

fn interiors_overlap(t: [Point2; 3], u: [Point2; 3], slack: f64) -> bool {
    let project = |poly: &[Point2; 3], axis: Point2| {
        poly.iter()
            .map(|p| p.dot(axis))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
    };
    for poly in [&t, &u] {
        for i in 0..3 {
            let e = poly[(i + 1) % 3] - poly[i];
            let axis = Point2::new(-e.y(), e.x()).unit();
            let (a0, a1) = project(&t, axis);
            let (b0, b1) = project(&u, axis);
            if a1 <= b0 + slack || b1 <= a0 + slack {
                return false;
            }
        }
    }
    true
}

/// Checks declared similarities, the pass-through and junction conditions
/// at every link, link placement on the diagonals and triangle overlap.
pub fn validate_chain(spec: &TriangleChainSpec) -> Result<ChainReport, ChainError> {
    let resolved = resolve_chain(spec)?;
    let links = &resolved.points;
    let corners: Vec<[Point2; 3]> = spec
        .triangles
        .iter()
        .map(|tri| tri.map(|v| vertex_at(spec, links, v)))
        .collect();
    let mut violations = Vec::new();

    for &(i, j) in &spec.similar {
        let t1 = Triangle::new(corners[i][0], corners[i][1], corners[i][2])?;
        let t2 = Triangle::new(corners[j][0], corners[j][1], corners[j][2])?;
        if similar_same_chirality(&t1, &t2, SIMILARITY_TOL).is_none() {
            violations.push(ChainViolation::NotSimilar { first: i, second: j });
        }
    }

    let mut reports = Vec::new();
    for (j, link) in spec.link_points.iter().enumerate() {
        let here = links[j];
        let (p, q) = (spec.terminals.get(link.diagonal.0), spec.terminals.get(link.diagonal.1));
        let len = p.distance(q);
        let along = resolved.parameters[j];
        if (q - p).unit().cross(here - p).abs() > 1e-9 || (here - p).dot(q - p) < -1e-9 || along > len + 1e-9 {
            violations.push(ChainViolation::OffDiagonal { link: link.name.clone() });
        }
        let tris = spec.triangles_at(j);
        let stems: Vec<Point2> = tris
            .iter()
            .filter_map(|&k| {
                let pos = spec.triangles[k].iter().position(|&v| v == ChainVertex::Link(j))?;
                stem_end(corners[k], pos)
            })
            .collect();
        let (kind, deviation) = match (tris.len(), stems.len()) {
            (2, 2) => {
                let dev = PI - angle_between(here, stems[0], stems[1]);
                if dev > LINK_ANGLE_TOL {
                    violations.push(ChainViolation::NotCollinear {
                        link: link.name.clone(),
                        deviation: dev,
                    });
                }
                (Some(LinkKind::PassThrough), dev)
            }
            (3, 3) => {
                let dev = [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .map(|&(a, b)| (angle_between(here, stems[a], stems[b]) - 2.0 * PI / 3.0).abs())
                    .fold(0.0, f64::max);
                if dev > LINK_ANGLE_TOL {
                    violations.push(ChainViolation::NotBalanced {
                        link: link.name.clone(),
                        deviation: dev,
                    });
                }
                (Some(LinkKind::Junction), dev)
            }
            (n, _) => {
                violations.push(ChainViolation::BadIncidence {
                    link: link.name.clone(),
                    triangles: n,
                });
                (None, f64::NAN)
            }
        };
        reports.push(LinkReport {
            name: link.name.clone(),
            kind,
            deviation,
        });
    }

    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            if interiors_overlap(corners[i], corners[j], OVERLAP_SLACK) {
                violations.push(ChainViolation::Overlap { first: i, second: j });
            }
        }
    }
    Ok(ChainReport {
        links: reports,
        violations,
    })
}

/// Where a registered length comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthSource {
    /// A closed form.
    Exact,
    /// Computed by the chain construction itself.
    Derived,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedConfiguration {
    pub name: &'static str,
    pub exact_length: f64,
    pub source: LengthSource,
    pub p: usize,
    pub q: usize,
}

/// Names accepted by [`build_configuration`].
pub const CONFIGURATION_NAMES: [&str; 14] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "cfg_a", "cfg_b", "cfg_c", "penta", "octa_a",
    "octa_b", "octa_c",
];

/// Registered length and counts of a named configuration.
pub fn named_configuration(name: &str) -> Result<NamedConfiguration, ChainError> {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let exact = |name, len, p, q| NamedConfiguration {
        name,
        exact_length: len,
        source: LengthSource::Exact,
        p,
        q,
    };
    let octa_short = 4.0 + 0.5 * (2.0 + r2) * (1.0 + r3);
    Ok(match name {
        "fig1a" => exact("fig1a", 1.0 + r3, 2, 2),
        "fig1b" => exact("fig1b", 1.0 + (1.0 + r3) / r2, 1, 1),
        "fig1c" => exact("fig1c", 3.0, 0, 1),
        "fig1d" => exact("fig1d", 2.0 + r2, 0, 2),
        "fig2a" => exact("fig2a", 5.0, 0, 1),
        "fig2b" => exact("fig2b", 27f64.sqrt(), 4, 3),
        "fig2c" => exact("fig2c", 28f64.sqrt(), 4, 2),
        "cfg_a" => exact("cfg_a", 1.0 + 21f64.sqrt(), 3, 1),
        "cfg_b" => exact("cfg_b", 1.0 + 19f64.sqrt(), 3, 1),
        "cfg_c" => exact("cfg_c", 2.0 + 13f64.sqrt(), 2, 1),
        "penta" => NamedConfiguration {
            name: "penta",
            exact_length: chain_length(&configuration_chain("penta")?)?,
            source: LengthSource::Derived,
            p: 3,
            q: 1,
        },
        "octa_a" => exact("octa_a", (2.0 + r2) * (4.0 + 6f64.sqrt()).sqrt(), 6, 2),
        "octa_b" => exact("octa_b", octa_short, 2, 1),
        "octa_c" => exact("octa_c", octa_short, 2, 1),
        other => return Err(ChainError::UnknownName(other.to_string())),
    })
}

/// All registered configurations in [`CONFIGURATION_NAMES`] order.
pub fn named_configurations() -> Vec<NamedConfiguration> {
    CONFIGURATION_NAMES
        .iter()
        .map(|n| named_configuration(n).expect("registered name"))
        .collect()
}

use ChainVertex::{Link as L, Terminal as T};

fn crossing(name: &str, diagonal: (usize, usize), a: ChainVertex, b: ChainVertex) -> LinkPoint {
    LinkPoint {
        name: name.to_string(),
        diagonal,
        rule: LinkRule::Crossing(a, b),
    }
}

fn elevation(name: &str, diagonal: (usize, usize), bracket: (f64, f64)) -> LinkPoint {
    LinkPoint {
        name: name.to_string(),
        diagonal,
        rule: LinkRule::EqualElevation { bracket },
    }
}

fn chain(
    n: usize,
    triangles: Vec<[ChainVertex; 3]>,
    link_points: Vec<LinkPoint>,
    trivial_extensions: Vec<(usize, usize)>,
    similar: Vec<(usize, usize)>,
) -> TriangleChainSpec {
    TriangleChainSpec {
        terminals: regular_polygon(n, 1.0).expect("regular polygon"),
        triangles,
        link_points,
        trivial_extensions,
        similar,
    }
}

// Hexagon and square labels.
const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;
const F: usize = 5;

/// The curated chain behind a registered configuration.
pub fn configuration_chain(name: &str) -> Result<TriangleChainSpec, ChainError> {
    Ok(match name {
        "fig1a" => chain(
            4,
            vec![[T(A), T(B), L(0)], [T(C), T(D), L(0)]],
            vec![crossing("O", (A, C), T(B), T(D))],
            vec![],
            vec![(0, 1)],
        ),
        "fig1b" => chain(4, vec![[T(A), T(B), T(C)]], vec![], vec![(C, D)], vec![]),
        "fig1c" => chain(4, vec![], vec![], vec![(A, B), (B, C), (C, D)], vec![]),
        "fig1d" => chain(4, vec![], vec![], vec![(A, B), (A, C), (C, D)], vec![]),
        "fig2a" => chain(6, vec![], vec![], vec![(A, B), (B, C), (C, D), (D, E), (E, F)], vec![]),
        "fig2b" => chain(
            6,
            vec![[T(A), T(B), L(0)], [T(C), T(D), L(0)], [T(E), T(F), L(0)]],
            vec![crossing("O", (A, D), T(B), T(E))],
            vec![],
            vec![(0, 1), (1, 2)],
        ),
        "fig2c" => chain(
            6,
            vec![
                [T(A), T(B), L(0)],
                [L(1), T(F), L(0)],
                [L(1), T(C), L(2)],
                [T(D), T(E), L(2)],
            ],
            vec![
                crossing("L1", (A, D), T(B), T(F)),
                crossing("O", (A, D), T(C), T(F)),
                crossing("L3", (A, D), T(C), T(E)),
            ],
            vec![],
            vec![(0, 1), (1, 2), (2, 3)],
        ),
        "cfg_a" => chain(
            6,
            vec![[T(B), T(C), L(1)], [T(D), L(0), L(1)], [T(A), L(0), T(E)]],
            vec![elevation("H", (D, A), (0.2, 0.9)), crossing("G", (B, D), T(C), L(0))],
            vec![(E, F)],
            vec![(0, 1), (1, 2)],
        ),
        "cfg_b" => chain(
            6,
            vec![[T(B), T(C), L(1)], [L(0), T(A), L(1)], [L(0), T(D), T(E)]],
            vec![elevation("H", (D, A), (0.4, 0.9)), crossing("G", (C, A), T(B), L(0))],
            vec![(E, F)],
            vec![(0, 1)],
        ),
        "cfg_c" => chain(
            6,
            vec![[T(C), L(0), T(A)], [T(D), L(0), T(E)]],
            vec![elevation("G", (D, A), (0.1, 0.6))],
            vec![(B, C), (E, F)],
            vec![],
        ),
        "penta" => chain(
            5,
            vec![[T(1), T(2), L(0)], [T(3), L(1), L(0)], [T(0), L(1), T(4)]],
            vec![crossing("G", (1, 3), T(2), T(4)), crossing("H", (0, 3), T(2), T(4))],
            vec![],
            vec![(0, 1), (1, 2)],
        ),
        "octa_a" => chain(
            8,
            vec![
                [T(0), T(1), L(0)],
                [L(1), T(7), L(0)],
                [L(1), T(2), L(2)],
                [L(3), T(6), L(2)],
                [L(3), T(3), L(4)],
                [T(4), T(5), L(4)],
            ],
            vec![
                crossing("L1", (0, 4), T(1), T(7)),
                crossing("L2", (0, 4), T(1), T(6)),
                crossing("L3", (0, 4), T(2), T(6)),
                crossing("L4", (0, 4), T(3), T(6)),
                crossing("L5", (0, 4), T(3), T(5)),
            ],
            vec![],
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
        ),
        "octa_b" => chain(
            8,
            vec![[T(1), T(4), L(0)], [T(6), T(7), L(0)]],
            vec![crossing("X", (1, 6), T(4), T(7))],
            vec![(0, 7), (2, 3), (3, 4), (4, 5)],
            vec![(0, 1)],
        ),
        "octa_c" => chain(
            8,
            vec![[T(2), T(4), L(0)], [T(5), T(7), L(0)]],
            vec![elevation("Y", (2, 5), (1.5, 2.3))],
            vec![(0, 7), (1, 2), (3, 4), (5, 6)],
            vec![],
        ),
        other => return Err(ChainError::UnknownName(other.to_string())),
    })
}

/// Builds a registered configuration.
pub fn build_configuration(name: &str) -> Result<GeometricTree, ChainError> {
    build_chain(&configuration_chain(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::{is_stable, relax, RelaxOptions};

    #[test]
    fn registered_lengths() {
        for nc in named_configurations() {
            let tree = build_configuration(nc.name).unwrap();
            assert!(
                (tree.total_length() - nc.exact_length).abs() < 1e-9,
                "{}: {} vs {}",
                nc.name,
                tree.total_length(),
                nc.exact_length
            );
            let summed = chain_length(&configuration_chain(nc.name).unwrap()).unwrap();
            assert!((summed - nc.exact_length).abs() < 1e-9, "{}", nc.name);
            assert_eq!(tree.p(), nc.p, "{}", nc.name);
            assert_eq!(tree.q(), nc.q, "{}", nc.name);
        }
    }

    #[test]
    fn hexagon_partitions() {
        for (name, link, bracket, expected) in [
            ("cfg_a", "H", (0.2, 0.9), 0.5),
            ("cfg_b", "H", (0.4, 0.9), 2.0 / 3.0),
            ("cfg_c", "G", (0.1, 0.6), 1.0 / 3.0),
        ] {
            let spec = configuration_chain(name).unwrap();
            let x = solve_partition(&spec, link, bracket).unwrap();
            assert!((x - expected).abs() < 1e-10, "{name}: {x}");
        }
    }

    #[test]
    fn partition_errors() {
        let spec = configuration_chain("cfg_a").unwrap();
        assert!(matches!(
            solve_partition(&spec, "H", (0.6, 0.9)),
            Err(ChainError::NoSignChange { .. })
        ));
        assert_eq!(solve_partition(&spec, "Z", (0.2, 0.9)), Err(ChainError::UnknownLink("Z".into())));
        assert_eq!(solve_partition(&spec, "G", (0.2, 0.9)), Err(ChainError::NotSolvable("G".into())));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(build_configuration("fig9"), Err(ChainError::UnknownName(_))));
        assert!(named_configuration("").is_err());
    }

    #[test]
    fn configuration_a_links_pass_through() {
        let report = validate_chain(&configuration_chain("cfg_a").unwrap()).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.links.len(), 2);
        for link in &report.links {
            assert_eq!(link.kind, Some(LinkKind::PassThrough));
            assert!(link.deviation < 1e-9);
        }
    }

    #[test]
    fn three_triangle_link_is_junction() {
        let report = validate_chain(&configuration_chain("fig2b").unwrap()).unwrap();
        assert!(report.is_valid());
        assert_eq!(report.links[0].kind, Some(LinkKind::Junction));
    }

    #[test]
    fn every_chain_validates() {
        for name in CONFIGURATION_NAMES {
            let report = validate_chain(&configuration_chain(name).unwrap()).unwrap();
            assert!(report.is_valid(), "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn mirrored_triangle_breaks_similarity() {
        let mut spec = configuration_chain("cfg_a").unwrap();
        let [a, b, c] = spec.triangles[1];
        spec.triangles[1] = [a, c, b];
        let report = validate_chain(&spec).unwrap();
        assert!(report.violations.contains(&ChainViolation::NotSimilar { first: 0, second: 1 }));
    }

    #[test]
    fn overlapping_triangles_reported() {
        let spec = chain(
            6,
            vec![[T(A), T(B), T(D)], [T(B), T(C), T(E)]],
            vec![],
            vec![(E, F)],
            vec![],
        );
        let report = validate_chain(&spec).unwrap();
        assert!(report.violations.contains(&ChainViolation::Overlap { first: 0, second: 1 }));
    }

    #[test]
    fn shared_edge_is_not_overlap() {
        let hex = regular_polygon(6, 1.0).unwrap();
        let t1 = [hex.get(A), hex.get(B), hex.get(C)];
        let t2 = [hex.get(A), hex.get(C), hex.get(D)];
        assert!(!interiors_overlap(t1, t2, OVERLAP_SLACK));
        let t3 = [hex.get(A), hex.get(B), hex.get(D)];
        assert!(interiors_overlap(t1, t3, OVERLAP_SLACK));
    }

    #[test]
    fn constructions_match_relaxation() {
        for name in CONFIGURATION_NAMES {
            let built = build_configuration(name).unwrap();
            let relaxed = relax(built.topology(), built.terminals(), &RelaxOptions::default()).unwrap();
            assert_eq!(relaxed.topology(), built.topology(), "{name}");
            for (a, b) in built.steiner_points().iter().zip(relaxed.steiner_points()) {
                assert!(a.distance(*b) < 1e-7, "{name}: {a} vs {b}");
            }
            assert!((built.total_length() - relaxed.total_length()).abs() < 1e-9, "{name}");
        }
    }

    #[test]
    fn junctions_balanced_everywhere() {
        for name in CONFIGURATION_NAMES {
            assert!(build_configuration(name).unwrap().stable(), "{name}");
        }
        for name in ["fig1a", "fig2a", "fig2b", "fig2c", "penta", "octa_a"] {
            assert!(is_stable(&build_configuration(name).unwrap(), 1e-6), "{name}");
        }
    }

    #[test]
    fn octagon_short_pair_are_distinct_classes() {
        let b = build_configuration("octa_b").unwrap();
        let c = build_configuration("octa_c").unwrap();
        assert!((b.total_length() - c.total_length()).abs() < 1e-12);
        assert_ne!(crate::relax::dihedral_key(&b), crate::relax::dihedral_key(&c));
    }
}
