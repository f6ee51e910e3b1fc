//! Spanning trees of the complete graph on a terminal set.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geom::TerminalSet;
use crate::relax::SYMMETRY_TOL;
use crate::symmetry::{canonical_segment_key, dihedral_group, rotational_order, SegmentKey};
use crate::topology::{is_connected, prufer_decode};

/// Largest terminal set accepted by [`enumerate_spanning_trees`].
pub const MAX_SPANNING_TERMINALS: usize = 9;

const LENGTH_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanningError {
    #[error("{0} terminals exceed the enumeration limit of {MAX_SPANNING_TERMINALS}")]
    TooManyTerminals(usize),
}

/// A tree whose vertices are exactly the terminals.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    edges: Vec<(usize, usize)>,
    total_length: f64,
}

impl SpanningTree {
    /// Normalises and sorts `edges`; `None` unless they form a tree on all
    /// terminals.
    pub fn new(terminals: &TerminalSet, edges: Vec<(usize, usize)>) -> Option<Self> {
        let n = terminals.len();
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() + 1 != n || edges.iter().any(|&(u, v)| u == v || v >= n) || !is_connected(n, &edges) {
            return None;
        }
        let total_length = edges
            .iter()
            .map(|&(u, v)| terminals.get(u).distance(terminals.get(v)))
            .sum();
        Some(Self { edges, total_length })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Degree of each terminal.
    pub fn degrees(&self, terminal_count: usize) -> Vec<usize> {
        let mut d = vec![0; terminal_count];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }
}

/// Calls `visit` with every labelled spanning tree, in lexicographic order
/// of the label sequences that encode them.
pub fn for_each_spanning_tree(
    terminals: &TerminalSet,
    mut visit: impl FnMut(SpanningTree),
) -> Result<(), SpanningError> {
    let n = terminals.len();
    if n > MAX_SPANNING_TERMINALS {
        return Err(SpanningError::TooManyTerminals(n));
    }
    let mut seq = vec![0usize; n - 2];
    loop {
        let edges = prufer_decode(&seq, n);
        visit(SpanningTree::new(terminals, edges).expect("label sequences decode to trees"));
        // odometer increment
        let mut i = seq.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
        }
    }
}

/// All `n^(n-2)` labelled spanning trees.
pub fn enumerate_spanning_trees(terminals: &TerminalSet) -> Result<Vec<SpanningTree>, SpanningError> {
    let mut out = Vec::new();
    for_each_spanning_tree(terminals, |t| out.push(t))?;
    Ok(out)
}

/// Kruskal's algorithm. Edge lengths are compared on a 1e-9 grid so that
/// equal sides of a regular polygon tie exactly; ties go to the
/// lexicographically smaller edge.
pub fn minimum_spanning_tree(terminals: &TerminalSet) -> SpanningTree {
    let n = terminals.len();
    let mut candidates: Vec<(i64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let len = terminals.get(i).distance(terminals.get(j));
            candidates.push(((len * 1e9).round() as i64, i, j));
        }
    }
    candidates.sort_unstable();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut edges = Vec::with_capacity(n - 1);
    for (_, i, j) in candidates {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            edges.push((i, j));
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    SpanningTree::new(terminals, edges).expect("Kruskal yields a spanning tree")
}

/// One congruence class of spanning trees under the polygon's dihedral group.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningClass {
    pub length: f64,
    /// Member with the lexicographically smallest edge list.
    pub representative: SpanningTree,
    pub multiplicity: usize,
    /// Rotational symmetry order of the class.
    pub q: usize,
}

/// Spanning trees no longer than `max_length`, grouped by congruence and
/// sorted by length.
pub fn spanning_catalog(terminals: &TerminalSet, max_length: f64) -> Result<Vec<SpanningClass>, SpanningError> {
    let group = dihedral_group(terminals);
    let mut classes: BTreeMap<Vec<SegmentKey>, SpanningClass> = BTreeMap::new();
    for_each_spanning_tree(terminals, |tree| {
        if tree.total_length() > max_length + LENGTH_SLACK {
            return;
        }
        let key = canonical_segment_key(terminals.points(), tree.edges(), &group);
        match classes.get_mut(&key) {
            Some(class) => {
                class.multiplicity += 1;
                if tree.edges() < class.representative.edges() {
                    class.representative = tree;
                }
            }
            None => {
                let q = rotational_order(terminals.points(), tree.edges(), terminals, SYMMETRY_TOL);
                classes.insert(
                    key,
                    SpanningClass {
                        length: tree.total_length(),
                        representative: tree,
                        multiplicity: 1,
                        q,
                    },
                );
            }
        }
    })?;
    let mut out: Vec<(Vec<SegmentKey>, SpanningClass)> = classes.into_iter().collect();
    out.sort_by(|a, b| a.1.length.total_cmp(&b.1.length).then_with(|| a.0.cmp(&b.0)));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}
