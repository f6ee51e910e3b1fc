//! Relaxation of Steiner topologies to length-minimising embeddings, plus
//! stability tests, symmetry classification and the exhaustive search for
//! local minima on a terminal set.
//!
//! The relaxation is a cyclic fixed-point iteration: every junction is moved
//! to the Fermat point of its three neighbours in turn. Each move minimises
//! the total length over that one junction, so the length never increases.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{angle_between, fermat_point_of, Point2, TerminalSet};
use crate::symmetry::{self, canonical_segment_key, dihedral_group, SegmentKey};
use crate::topology::{enumerate_topologies, SteinerTopology, TopologyError};

/// Angular tolerance used for the `stable` flag of relaxed trees.
pub const JUNCTION_TOL: f64 = 1e-6;

/// Tolerance used when matching rotated segments during classification.
pub const SYMMETRY_TOL: f64 = 1e-7;

const TWO_THIRDS_PI: f64 = 2.0 * PI / 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelaxError {
    #[error("topology has {topology} terminals but the terminal set has {terminals}")]
    TerminalMismatch { topology: usize, terminals: usize },
    #[error("relax options must be positive")]
    BadOptions,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOptions {
    pub position_tolerance: f64,
    pub max_iterations: usize,
    pub collapse_distance: f64,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            position_tolerance: 1e-12,
            max_iterations: 100_000,
            collapse_distance: 1e-9,
        }
    }
}

impl RelaxOptions {
    fn validate(&self) -> Result<(), RelaxError> {
        if self.position_tolerance > 0.0 && self.max_iterations > 0 && self.collapse_distance > 0.0 {
            Ok(())
        } else {
            Err(RelaxError::BadOptions)
        }
    }
}

/// How a relaxation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelaxStatus {
    Converged,
    /// `max_iterations` sweeps without reaching the position tolerance.
    NotConverged,
    /// Two junctions met, or a terminal would have absorbed a fourth edge.
    /// The embedding is kept but the topology is left uncollapsed.
    Degenerate,
}

/// An embedded tree on a terminal set.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricTree {
    terminals: TerminalSet,
    steiner_points: Vec<Point2>,
    topology: SteinerTopology,
    total_length: f64,
    p: usize,
    q: usize,
    stable: bool,
    status: RelaxStatus,
}

impl GeometricTree {
    /// Builds an embedded tree and derives length, `p`, `q` and the
    /// `stable` flag (every junction at 120° within [`JUNCTION_TOL`]).
    pub fn new(
        terminals: TerminalSet,
        steiner_points: Vec<Point2>,
        topology: SteinerTopology,
    ) -> Result<Self, RelaxError> {
        if topology.terminal_count() != terminals.len() {
            return Err(RelaxError::TerminalMismatch {
                topology: topology.terminal_count(),
                terminals: terminals.len(),
            });
        }
        assert_eq!(
            steiner_points.len(),
            topology.steiner_count(),
            "one position per Steiner vertex"
        );
        Ok(Self::assemble(terminals, steiner_points, topology, RelaxStatus::Converged))
    }

    fn assemble(
        terminals: TerminalSet,
        steiner_points: Vec<Point2>,
        topology: SteinerTopology,
        status: RelaxStatus,
    ) -> Self {
        let mut tree = Self {
            p: topology.steiner_count(),
            terminals,
            steiner_points,
            topology,
            total_length: 0.0,
            q: 1,
            stable: false,
            status,
        };
        tree.total_length = tree.edge_lengths().iter().sum();
        tree.q = classify_symmetry(&tree, SYMMETRY_TOL);
        tree.stable = status == RelaxStatus::Converged && junctions_balanced(&tree, JUNCTION_TOL);
        tree
    }

    pub fn terminals(&self) -> &TerminalSet {
        &self.terminals
    }

    pub fn steiner_points(&self) -> &[Point2] {
        &self.steiner_points
    }

    pub fn topology(&self) -> &SteinerTopology {
        &self.topology
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Number of Steiner points.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Rotational symmetry order.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Converged with every junction balanced at 120°.
    pub fn stable(&self) -> bool {
        self.stable
    }

    pub fn status(&self) -> RelaxStatus {
        self.status
    }

    /// Terminals followed by Steiner points, indexed like the topology.
    pub fn vertices(&self) -> Vec<Point2> {
        let mut v = self.terminals.points().to_vec();
        v.extend_from_slice(&self.steiner_points);
        v
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        let t = self.terminals.len();
        if i < t {
            self.terminals.get(i)
        } else {
            self.steiner_points[i - t]
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.topology.edges()
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges()
            .iter()
            .map(|&(u, v)| self.vertex(u).distance(self.vertex(v)))
            .collect()
    }

    /// Pairwise angles between the edges at vertex `v`.
    pub fn incident_angles(&self, v: usize) -> Vec<f64> {
        let adj = self.topology.adjacency();
        let here = self.vertex(v);
        let nb = &adj[v];
        let mut out = Vec::new();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                out.push(angle_between(here, self.vertex(nb[i]), self.vertex(nb[j])));
            }
        }
        out
    }

    /// True when no two edges cross or overlap.
    pub fn is_planar(&self) -> bool {
        let pts = self.vertices();
        edges_non_crossing(&pts, self.edges())
    }
}

fn junctions_balanced(tree: &GeometricTree, tol: f64) -> bool {
    let t = tree.terminals.len();
    (t..tree.topology.vertex_count()).all(|s| {
        tree.incident_angles(s)
            .iter()
            .all(|a| (a - TWO_THIRDS_PI).abs() <= tol)
    })
}

/// Proper-crossing and overlap test for straight-line edges.
pub(crate) fn edges_non_crossing(pts: &[Point2], edges: &[(usize, usize)]) -> bool {
    const EPS: f64 = 1e-10;
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            let shared = [a, b].iter().filter(|v| **v == c || **v == d).count();
            let (p1, p2, p3, p4) = (pts[a], pts[b], pts[c], pts[d]);
            if shared == 1 {
                // Edges meeting at a vertex overlap when they leave it in the same direction.
                let (o, x, y) = if a == c {
                    (p1, p2, p4)
                } else if a == d {
                    (p1, p2, p3)
                } else if b == c {
                    (p2, p1, p4)
                } else {
                    (p2, p1, p3)
                };
                if angle_between(o, x, y) < 1e-9 {
                    return false;
                }
                continue;
            }
            let d1 = (p2 - p1).cross(p3 - p1);
            let d2 = (p2 - p1).cross(p4 - p1);
            let d3 = (p4 - p3).cross(p1 - p3);
            let d4 = (p4 - p3).cross(p2 - p3);
            if ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS))
                && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS))
            {
                return false;
            }
            // An endpoint lying on the other segment also counts as contact.
            let touches = |p: Point2, s: Point2, e: Point2| {
                let len = s.distance(e);
                (e - s).cross(p - s).abs() <= EPS * len.max(1.0)
                    && (p - s).dot(e - s) > EPS
                    && (p - e).dot(s - e) > EPS
            };
            if touches(p3, p1, p2) || touches(p4, p1, p2) || touches(p1, p3, p4) || touches(p2, p3, p4) {
                return false;
            }
        }
    }
    true
}

/// Initial junction positions: centroid of adjacent terminals first, then
/// junctions without terminal neighbours take the centroid of already
/// seeded neighbours, then neighbour averaging settles the whole set.
fn seed_positions(adj: &[Vec<usize>], terminals: &TerminalSet) -> Vec<Point2> {
    let t = terminals.len();
    let n = adj.len();
    let mut pos: Vec<Option<Point2>> = (0..n)
        .map(|v| if v < t { Some(terminals.get(v)) } else { None })
        .collect();
    for s in t..n {
        let near: Vec<Point2> = adj[s].iter().filter(|&&u| u < t).map(|&u| terminals.get(u)).collect();
        if !near.is_empty() {
            pos[s] = Some(centroid(&near));
        }
    }
    while pos.iter().any(Option::is_none) {
        let mut progressed = false;
        for s in t..n {
            if pos[s].is_some() {
                continue;
            }
            let known: Vec<Point2> = adj[s].iter().filter_map(|&u| pos[u]).collect();
            if !known.is_empty() {
                pos[s] = Some(centroid(&known));
                progressed = true;
            }
        }
        if !progressed {
            for p in pos.iter_mut().filter(|p| p.is_none()) {
                *p = Some(terminals.center());
            }
        }
    }
    let mut pos: Vec<Point2> = pos.into_iter().map(Option::unwrap).collect();
    for _ in 0..1000 {
        let mut change: f64 = 0.0;
        for s in t..n {
            let nb: Vec<Point2> = adj[s].iter().map(|&u| pos[u]).collect();
            let next = centroid(&nb);
            change = change.max(next.distance(pos[s]));
            pos[s] = next;
        }
        if change < 1e-13 {
            break;
        }
    }
    pos
}

fn centroid(pts: &[Point2]) -> Point2 {
    let sum = pts.iter().fold(Point2::ORIGIN, |a, &p| a + p);
    sum * (1.0 / pts.len() as f64)
}

fn total_length(pos: &[Point2], adj: &[Vec<usize>]) -> f64 {
    let mut sum = 0.0;
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            if u < v {
                sum += pos[u].distance(pos[v]);
            }
        }
    }
    sum
}

/// Relaxes `topology` on `terminals`. See [`relax_traced`].
pub fn relax(
    topology: &SteinerTopology,
    terminals: &TerminalSet,
    options: &RelaxOptions,
) -> Result<GeometricTree, RelaxError> {
    relax_traced(topology, terminals, options).map(|(tree, _)| tree)
}

/// Relaxes `topology` on `terminals`, returning the tree and the total
/// length after every sweep.
///
/// Junctions that end within `collapse_distance` of a terminal neighbour
/// are merged into it and the topology is rebuilt with one junction fewer.
/// Junction-junction contact or a terminal pushed past degree 3 ends the
/// run as [`RelaxStatus::Degenerate`].
pub fn relax_traced(
    topology: &SteinerTopology,
    terminals: &TerminalSet,
    options: &RelaxOptions,
) -> Result<(GeometricTree, Vec<f64>), RelaxError> {
    options.validate()?;
    let t = topology.terminal_count();
    if t != terminals.len() {
        return Err(RelaxError::TerminalMismatch {
            topology: t,
            terminals: terminals.len(),
        });
    }
    let n = topology.vertex_count();
    let adj = topology.adjacency();
    let mut pos = seed_positions(&adj, terminals);
    let mut trace = Vec::new();
    let mut status = RelaxStatus::NotConverged;

    'sweeps: for _ in 0..options.max_iterations {
        let mut max_move: f64 = 0.0;
        for s in t..n {
            let nb = &adj[s];
            let next = fermat_point_of(pos[nb[0]], pos[nb[1]], pos[nb[2]]);
            max_move = max_move.max(next.distance(pos[s]));
            pos[s] = next;
        }
        trace.push(total_length(&pos, &adj));
        for s in t..n {
            for &u in &adj[s] {
                if u >= t && pos[s].distance(pos[u]) < options.collapse_distance {
                    status = RelaxStatus::Degenerate;
                    break 'sweeps;
                }
            }
        }
        if max_move < options.position_tolerance {
            status = RelaxStatus::Converged;
            break;
        }
    }

    let (topo, steiner) = if status == RelaxStatus::Converged {
        match collapse(topology, &pos, options.collapse_distance) {
            Some(done) => done,
            None => {
                status = RelaxStatus::Degenerate;
                (topology.clone(), pos[t..].to_vec())
            }
        }
    } else {
        (topology.clone(), pos[t..].to_vec())
    };
    let tree = GeometricTree::assemble(terminals.clone(), steiner, topo, status);
    Ok((tree, trace))
}

/// Merges junctions lying on a terminal neighbour. `None` if a merge would
/// give a terminal more than three edges.
fn collapse(
    topology: &SteinerTopology,
    pos: &[Point2],
    distance: f64,
) -> Option<(SteinerTopology, Vec<Point2>)> {
    let t = topology.terminal_count();
    let n = topology.vertex_count();
    let mut adj = topology.adjacency();
    let mut alive = vec![true; n];
    loop {
        let mut merged = false;
        for s in t..n {
            if !alive[s] {
                continue;
            }
            let target = adj[s]
                .iter()
                .copied()
                .filter(|&u| u < t && pos[s].distance(pos[u]) < distance)
                .min_by(|&a, &b| pos[s].distance(pos[a]).total_cmp(&pos[s].distance(pos[b])));
            let Some(u) = target else { continue };
            let others: Vec<usize> = adj[s].iter().copied().filter(|&v| v != u).collect();
            if adj[u].len() - 1 + others.len() > 3 {
                return None;
            }
            adj[u].retain(|&v| v != s);
            for &v in &others {
                adj[v].retain(|&w| w != s);
                adj[v].push(u);
                adj[u].push(v);
            }
            adj[s].clear();
            alive[s] = false;
            merged = true;
        }
        if !merged {
            break;
        }
    }
    let mut relabel = vec![usize::MAX; n];
    let mut next = t;
    let mut steiner = Vec::new();
    for v in 0..n {
        if v < t {
            relabel[v] = v;
        } else if alive[v] {
            relabel[v] = next;
            next += 1;
            steiner.push(pos[v]);
        }
    }
    let mut edges = Vec::new();
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            if u < v {
                edges.push((relabel[u], relabel[v]));
            }
        }
    }
    let topo = SteinerTopology::new(t, steiner.len(), edges).ok()?;
    Some((topo, steiner))
}

/// Strict first-order stability: junction edges pairwise at 120° within
/// `angle_tol`, and at every terminal each pair of incident edges at least
/// `120° - angle_tol` apart.
pub fn is_stable(tree: &GeometricTree, angle_tol: f64) -> bool {
    junctions_balanced(tree, angle_tol) && terminals_open(tree, angle_tol)
}

/// The terminal half of [`is_stable`].
pub fn terminals_open(tree: &GeometricTree, angle_tol: f64) -> bool {
    (0..tree.terminals.len()).all(|v| {
        tree.incident_angles(v)
            .iter()
            .all(|&a| a >= TWO_THIRDS_PI - angle_tol)
    })
}

/// Smallest angle between two edges meeting at a terminal, or `None` when
/// every terminal is a leaf.
pub fn min_terminal_angle(tree: &GeometricTree) -> Option<f64> {
    (0..tree.terminals.len())
        .flat_map(|v| tree.incident_angles(v))
        .min_by(f64::total_cmp)
}

/// Rotational symmetry order: the largest divisor of the polygon order
/// whose rotation maps the tree's edges onto themselves.
pub fn classify_symmetry(tree: &GeometricTree, tol: f64) -> usize {
    symmetry::rotational_order(&tree.vertices(), tree.edges(), &tree.terminals, tol)
}

/// Sum over terminals of `degree - 1`.
pub fn effective_nodal_total(tree: &GeometricTree) -> usize {
    tree.topology
        .degrees()
        .iter()
        .take(tree.terminals.len())
        .map(|d| d.saturating_sub(1))
        .sum()
}

/// Which trees count as observable equilibria in the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Equilibrium {
    /// Balanced junctions, no crossing edges; terminals are pinned and may
    /// hold any angle.
    #[default]
    Pinned,
    /// [`is_stable`] with the given tolerance in addition.
    Strict,
}

/// Counters for the exhaustive search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchDiagnostics {
    pub topologies: usize,
    pub not_converged: usize,
    pub degenerate: usize,
    pub rejected: usize,
    pub over_length: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone)]
pub struct LocalMinima {
    pub trees: Vec<GeometricTree>,
    pub diagnostics: SearchDiagnostics,
}

/// Length tolerance used when filtering by `max_length`.
const LENGTH_SLACK: f64 = 1e-9;

/// Relaxes every topology on `terminals`, keeps equilibria no longer than
/// `max_length`, removes copies equivalent under the polygon's dihedral
/// group and sorts by length.
pub fn find_all_local_minima(terminals: &TerminalSet, max_length: f64) -> Result<LocalMinima, RelaxError> {
    find_local_minima_with(terminals, max_length, Equilibrium::default(), &RelaxOptions::default())
}

pub fn find_local_minima_with(
    terminals: &TerminalSet,
    max_length: f64,
    rule: Equilibrium,
    options: &RelaxOptions,
) -> Result<LocalMinima, RelaxError> {
    let n = terminals.len();
    find_local_minima_in(terminals, 0..=n.saturating_sub(2), max_length, rule, options)
}

/// As [`find_local_minima_with`], restricted to topologies whose number of
/// Steiner points lies in `steiner`.
pub fn find_local_minima_in(
    terminals: &TerminalSet,
    steiner: RangeInclusive<usize>,
    max_length: f64,
    rule: Equilibrium,
    options: &RelaxOptions,
) -> Result<LocalMinima, RelaxError> {
    let topologies = enumerate_topologies(terminals.len(), steiner)?;
    let relaxed: Vec<GeometricTree> = topologies
        .par_iter()
        .map(|topo| relax(topo, terminals, options))
        .collect::<Result<_, _>>()?;

    let mut diagnostics = SearchDiagnostics {
        topologies: topologies.len(),
        ..Default::default()
    };
    let mut kept = Vec::new();
    for tree in relaxed {
        match tree.status() {
            RelaxStatus::NotConverged => {
                diagnostics.not_converged += 1;
                continue;
            }
            RelaxStatus::Degenerate => {
                diagnostics.degenerate += 1;
                continue;
            }
            RelaxStatus::Converged => {}
        }
        let accepted = tree.stable()
            && tree.is_planar()
            && match rule {
                Equilibrium::Pinned => true,
                Equilibrium::Strict => is_stable(&tree, JUNCTION_TOL),
            };
        if !accepted {
            diagnostics.rejected += 1;
            continue;
        }
        if tree.total_length() > max_length + LENGTH_SLACK {
            diagnostics.over_length += 1;
            continue;
        }
        kept.push(tree);
    }
    let before = kept.len();
    let trees = dedupe_dihedral(kept);
    diagnostics.duplicates = before - trees.len();
    Ok(LocalMinima { trees, diagnostics })
}

/// Canonical dihedral key of a tree: the smallest rounded segment multiset
/// over all rotations and reflections of the polygon.
pub fn dihedral_key(tree: &GeometricTree) -> Vec<SegmentKey> {
    let group = dihedral_group(&tree.terminals);
    canonical_segment_key(&tree.vertices(), tree.edges(), &group)
}

/// Keeps one tree per dihedral class (the one whose own segment key is
/// smallest) and orders the survivors by length, then by key.
pub fn dedupe_dihedral(trees: Vec<GeometricTree>) -> Vec<GeometricTree> {
    let mut classes: BTreeMap<Vec<SegmentKey>, (Vec<SegmentKey>, GeometricTree)> = BTreeMap::new();
    for tree in trees {
        let key = dihedral_key(&tree);
        let own = symmetry::segment_key(&tree.vertices(), tree.edges(), None);
        match classes.get(&key) {
            Some((best, _)) if *best <= own => {}
            _ => {
                classes.insert(key, (own, tree));
            }
        }
    }
    let mut out: Vec<(Vec<SegmentKey>, GeometricTree)> =
        classes.into_iter().map(|(k, (_, t))| (k, t)).collect();
    out.sort_by(|a, b| {
        a.1.total_length()
            .total_cmp(&b.1.total_length())
            .then_with(|| a.0.cmp(&b.0))
    });
    out.into_iter().map(|(_, t)| t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::regular_polygon;

    fn topo(t: usize, k: usize, edges: &[(usize, usize)]) -> SteinerTopology {
        SteinerTopology::new(t, k, edges.to_vec()).unwrap()
    }

    #[test]
    fn equilateral_triangle() {
        let tri = regular_polygon(3, 1.0).unwrap();
        let tree = relax(&topo(3, 1, &[(0, 3), (1, 3), (2, 3)]), &tri, &RelaxOptions::default()).unwrap();
        assert_eq!(tree.status(), RelaxStatus::Converged);
        assert!((tree.total_length() - 3f64.sqrt()).abs() < 1e-12);
        assert!(tree.steiner_points()[0].norm() < 1e-12);
        assert!(tree.stable());
        assert!(is_stable(&tree, 1e-9));
        assert_eq!(tree.q(), 3);
    }

    #[test]
    fn wide_angle_collapses_onto_terminal() {
        let pts = vec![Point2::new(-1.0, 0.0), Point2::new(0.0, 0.1), Point2::new(1.0, 0.0)];
        let set = TerminalSet::new(pts, 1).unwrap();
        let tree = relax(&topo(3, 1, &[(0, 3), (1, 3), (2, 3)]), &set, &RelaxOptions::default()).unwrap();
        assert_eq!(tree.status(), RelaxStatus::Converged);
        assert_eq!(tree.p(), 0);
        assert_eq!(tree.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(effective_nodal_total(&tree), 1);
    }

    #[test]
    fn crossed_pairing_degenerates() {
        let sq = regular_polygon(4, 1.0).unwrap();
        let crossed = topo(4, 2, &[(0, 4), (2, 4), (4, 5), (1, 5), (3, 5)]);
        let tree = relax(&crossed, &sq, &RelaxOptions::default()).unwrap();
        assert_eq!(tree.status(), RelaxStatus::Degenerate);
        assert!(!tree.stable());
    }

    #[test]
    fn square_full_tree() {
        let sq = regular_polygon(4, 1.0).unwrap();
        let t = topo(4, 2, &[(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)]);
        let (tree, trace) = relax_traced(&t, &sq, &RelaxOptions::default()).unwrap();
        assert!((tree.total_length() - (1.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(is_stable(&tree, 1e-9));
        assert_eq!(tree.q(), 2);
        assert_eq!(effective_nodal_total(&tree), 0);
        for s in 4..6 {
            for a in tree.incident_angles(s) {
                assert!((a - TWO_THIRDS_PI).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn perimeter_path_classification() {
        let hex = regular_polygon(6, 1.0).unwrap();
        let path = topo(6, 0, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        let tree = GeometricTree::new(hex, vec![], path).unwrap();
        assert!((tree.total_length() - 5.0).abs() < 1e-12);
        assert_eq!(classify_symmetry(&tree, SYMMETRY_TOL), 1);
        assert_eq!(effective_nodal_total(&tree), 4);
        assert!(is_stable(&tree, 1e-9));
        assert!((min_terminal_angle(&tree).unwrap() - TWO_THIRDS_PI).abs() < 1e-12);
    }

    #[test]
    fn closed_terminal_angle_is_not_strict() {
        let sq = regular_polygon(4, 1.0).unwrap();
        let path = topo(4, 0, &[(0, 1), (1, 2), (2, 3)]);
        let tree = GeometricTree::new(sq, vec![], path).unwrap();
        assert!(tree.stable());
        assert!(!is_stable(&tree, 1e-6));
        assert!(!terminals_open(&tree, 1e-6));
    }

    #[test]
    fn terminal_mismatch_and_options() {
        let sq = regular_polygon(4, 1.0).unwrap();
        let t3 = topo(3, 1, &[(0, 3), (1, 3), (2, 3)]);
        assert_eq!(
            relax(&t3, &sq, &RelaxOptions::default()).unwrap_err(),
            RelaxError::TerminalMismatch {
                topology: 3,
                terminals: 4
            }
        );
        let tri = regular_polygon(3, 1.0).unwrap();
        let bad = RelaxOptions {
            max_iterations: 0,
            ..RelaxOptions::default()
        };
        assert_eq!(relax(&t3, &tri, &bad).unwrap_err(), RelaxError::BadOptions);
    }

    #[test]
    fn iteration_cap_reports_not_converged() {
        let hex = regular_polygon(6, 1.0).unwrap();
        let t = topo(6, 4, &[(0, 6), (1, 6), (6, 7), (2, 7), (7, 8), (3, 8), (8, 9), (4, 9), (5, 9)]);
        let opts = RelaxOptions {
            max_iterations: 1,
            ..RelaxOptions::default()
        };
        let tree = relax(&t, &hex, &opts).unwrap();
        assert_eq!(tree.status(), RelaxStatus::NotConverged);
        assert!(!tree.stable());
    }

    #[test]
    fn dedupe_is_idempotent() {
        let hex = regular_polygon(6, 1.0).unwrap();
        let found = find_all_local_minima(&hex, 5.3).unwrap();
        let again = dedupe_dihedral(found.trees.clone());
        assert_eq!(again, found.trees);
        let lengths: Vec<f64> = found.trees.iter().map(|t| t.total_length()).collect();
        assert!(lengths.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rotated_copies_share_key() {
        let hex = regular_polygon(6, 1.0).unwrap();
        let a = GeometricTree::new(hex.clone(), vec![], topo(6, 0, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])).unwrap();
        let b = GeometricTree::new(hex, vec![], topo(6, 0, &[(1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])).unwrap();
        assert_eq!(dihedral_key(&a), dihedral_key(&b));
        assert_eq!(dedupe_dihedral(vec![a, b]).len(), 1);
    }
}
