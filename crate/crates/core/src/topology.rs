//! Combinatorial Steiner topologies and their enumeration.

use std::collections::{BTreeSet, HashSet};
use std::ops::RangeInclusive;

use thiserror::Error;

pub const MAX_TERMINALS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("Steiner vertex {0} has degree {1}, expected 3")]
    SteinerDegree(usize, usize),
    #[error("terminal {0} has degree {1}, expected 1..=3")]
    TerminalDegree(usize, usize),
    #[error("{steiner} Steiner vertices exceed the bound n - 2 = {bound}")]
    TooManySteiner { steiner: usize, bound: usize },
    #[error("terminal count {0} outside 3..={MAX_TERMINALS}")]
    TerminalCount(usize),
    #[error("Steiner range {0:?} is not inside 0..={1}")]
    SteinerRange(RangeInclusive<usize>, usize),
}

/// A tree over `terminal_count` labelled terminals (vertices
/// `0..terminal_count`) and `steiner_count` degree-3 junctions (the vertices
/// after them). Edges are stored as sorted `(low, high)` pairs in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteinerTopology {
    terminal_count: usize,
    steiner_count: usize,
    edges: Vec<(usize, usize)>,
}

impl SteinerTopology {
    pub fn new(
        terminal_count: usize,
        steiner_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, TopologyError> {
        let total = terminal_count + steiner_count;
        if terminal_count >= 2 && steiner_count > terminal_count - 2 {
            return Err(TopologyError::TooManySteiner {
                steiner: steiner_count,
                bound: terminal_count - 2,
            });
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= total || v >= total {
                return Err(TopologyError::VertexOutOfRange(u, v, total));
            }
            if u == v {
                return Err(TopologyError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(TopologyError::DuplicateEdge(w[0].0, w[0].1));
        }
        if normalized.len() + 1 != total {
            return Err(TopologyError::EdgeCount {
                expected: total.saturating_sub(1),
                found: normalized.len(),
            });
        }
        if !is_connected(total, &normalized) {
            return Err(TopologyError::Disconnected);
        }
        let degrees = degrees_of(total, &normalized);
        for (v, &d) in degrees.iter().enumerate() {
            if v < terminal_count {
                if !(1..=3).contains(&d) {
                    return Err(TopologyError::TerminalDegree(v, d));
                }
            } else if d != 3 {
                return Err(TopologyError::SteinerDegree(v, d));
            }
        }
        Ok(Self {
            terminal_count,
            steiner_count,
            edges: normalized,
        })
    }

    pub fn terminal_count(&self) -> usize {
        self.terminal_count
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner_count
    }

    pub fn vertex_count(&self) -> usize {
        self.terminal_count + self.steiner_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        v < self.terminal_count
    }

    pub fn degrees(&self) -> Vec<usize> {
        degrees_of(self.vertex_count(), &self.edges)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency_of(self.vertex_count(), &self.edges)
    }

    /// True when every terminal is a leaf and there are `n - 2` junctions.
    pub fn is_full(&self) -> bool {
        self.steiner_count + 2 == self.terminal_count
    }

    /// Relabels the Steiner vertices into canonical order.
    ///
    /// Rooting the tree at terminal 0, each Steiner vertex is identified by
    /// the set of terminals below it. These sets are pairwise distinct
    /// because every leaf is a terminal, so sorting by them gives a labelling
    /// that depends only on the unlabelled-junction tree.
    pub fn canonical(&self) -> SteinerTopology {
        let masks = subtree_terminal_masks(self);
        let mut order: Vec<usize> = (self.terminal_count..self.vertex_count()).collect();
        order.sort_by_key(|&s| masks[s]);
        let mut relabel: Vec<usize> = (0..self.vertex_count()).collect();
        for (rank, &s) in order.iter().enumerate() {
            relabel[s] = self.terminal_count + rank;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (relabel[u], relabel[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        SteinerTopology {
            terminal_count: self.terminal_count,
            steiner_count: self.steiner_count,
            edges,
        }
    }
}

pub(crate) fn degrees_of(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, v) in edges {
        d[u] += 1;
        d[v] += 1;
    }
    d
}

pub(crate) fn adjacency_of(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

pub(crate) fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let adj = adjacency_of(n, edges);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn subtree_terminal_masks(t: &SteinerTopology) -> Vec<u64> {
    let n = t.vertex_count();
    let adj = t.adjacency();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in &adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    let mut masks = vec![0u64; n];
    for &u in order.iter().rev() {
        if u < t.terminal_count {
            masks[u] |= 1 << u;
        }
        if u != 0 {
            let p = parent[u];
            masks[p] |= masks[u];
        }
    }
    masks
}

/// Decodes a label sequence of length `n - 2` into the edges of a labelled
/// tree on `n` vertices.
pub(crate) fn prufer_decode(sequence: &[usize], n: usize) -> Vec<(usize, usize)> {
    debug_assert_eq!(sequence.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &s in sequence {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in sequence {
        let leaf = *leaves.iter().next().expect("a tree always has a leaf");
        leaves.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges.sort_unstable();
    edges
}

/// Calls `visit` for every sequence of the given length in which label `v`
/// occurs between `min[v]` and `max[v]` times.
fn for_each_sequence(
    len: usize,
    min: &[usize],
    max: &[usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    fn go(
        pos: usize,
        seq: &mut Vec<usize>,
        counts: &mut [usize],
        min: &[usize],
        max: &[usize],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let len = seq.len();
        let still_needed: usize = min
            .iter()
            .zip(counts.iter())
            .map(|(&lo, &c)| lo.saturating_sub(c))
            .sum();
        if still_needed > len - pos {
            return;
        }
        if pos == len {
            visit(seq);
            return;
        }
        for label in 0..counts.len() {
            if counts[label] < max[label] {
                counts[label] += 1;
                seq[pos] = label;
                go(pos + 1, seq, counts, min, max, visit);
                counts[label] -= 1;
            }
        }
    }
    let mut seq = vec![0; len];
    let mut counts = vec![0; min.len()];
    go(0, &mut seq, &mut counts, min, max, visit);
}

/// All Steiner topologies over `terminal_count` terminals whose junction
/// count lies in `steiner_range`, one per class under relabelling of the
/// junctions. Output is sorted by junction count, then by edge list.
pub fn enumerate_topologies(
    terminal_count: usize,
    steiner_range: RangeInclusive<usize>,
) -> Result<Vec<SteinerTopology>, TopologyError> {
    if !(3..=MAX_TERMINALS).contains(&terminal_count) {
        return Err(TopologyError::TerminalCount(terminal_count));
    }
    let bound = terminal_count - 2;
    if steiner_range.is_empty() || *steiner_range.end() > bound {
        return Err(TopologyError::SteinerRange(steiner_range, bound));
    }
    let mut out = Vec::new();
    for k in steiner_range {
        out.extend(topologies_with(terminal_count, k));
    }
    Ok(out)
}

fn topologies_with(terminal_count: usize, steiner_count: usize) -> Vec<SteinerTopology> {
    let n = terminal_count + steiner_count;
    // A label occurs (degree - 1) times in the sequence.
    let mut min = vec![0; n];
    let mut max = vec![2; n];
    for v in terminal_count..n {
        min[v] = 2;
        max[v] = 2;
    }
    let mut seen: HashSet<SteinerTopology> = HashSet::new();
    for_each_sequence(n - 2, &min, &max, &mut |seq| {
        let edges = prufer_decode(seq, n);
        let t = SteinerTopology {
            terminal_count,
            steiner_count,
            edges,
        };
        seen.insert(t.canonical());
    });
    let mut out: Vec<SteinerTopology> = seen.into_iter().collect();
    out.sort();
    out
}

/// Number of full topologies on `n` terminals, `(2n-4)! / (2^(n-2) (n-2)!)`.
pub fn full_topology_count(n: usize) -> u64 {
    assert!(n >= 2);
    let num: u64 = (1..=(2 * n as u64 - 4)).product();
    let den: u64 = (1u64 << (n - 2)) * (1..=(n as u64 - 2)).product::<u64>();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_topologies() {
        assert_eq!(
            SteinerTopology::new(3, 1, vec![(0, 3), (1, 3)]),
            Err(TopologyError::EdgeCount {
                expected: 3,
                found: 2
            })
        );
        assert_eq!(
            SteinerTopology::new(3, 1, vec![(0, 3), (1, 3), (1, 2)]),
            Err(TopologyError::SteinerDegree(3, 2))
        );
        assert_eq!(
            SteinerTopology::new(3, 2, vec![(0, 3), (1, 3), (2, 4), (3, 4)]),
            Err(TopologyError::TooManySteiner {
                steiner: 2,
                bound: 1
            })
        );
        assert_eq!(
            SteinerTopology::new(3, 0, vec![(0, 1), (0, 1)]),
            Err(TopologyError::DuplicateEdge(0, 1))
        );
        // star with a degree-4 centre terminal
        assert_eq!(
            SteinerTopology::new(5, 0, vec![(0, 1), (0, 2), (0, 3), (0, 4)]),
            Err(TopologyError::TerminalDegree(0, 4))
        );
    }

    #[test]
    fn prufer_roundtrip_small() {
        assert_eq!(prufer_decode(&[3, 3], 4), vec![(0, 3), (1, 3), (2, 3)]);
        assert_eq!(prufer_decode(&[], 2), vec![(0, 1)]);
    }

    #[test]
    fn three_terminals_one_steiner() {
        let t = enumerate_topologies(3, 1..=1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].edges(), &[(0, 3), (1, 3), (2, 3)]);
    }

    #[test]
    fn full_counts_match_double_factorial() {
        for n in 3..=6 {
            let t = enumerate_topologies(n, n - 2..=n - 2).unwrap();
            assert_eq!(t.len() as u64, full_topology_count(n), "n = {n}");
        }
        assert_eq!(full_topology_count(6), 105);
    }

    #[test]
    fn canonical_is_label_invariant() {
        let a = SteinerTopology::new(4, 2, vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)]).unwrap();
        let b = SteinerTopology::new(4, 2, vec![(0, 5), (1, 5), (4, 5), (2, 4), (3, 4)]).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn range_checks() {
        assert!(enumerate_topologies(2, 0..=0).is_err());
        assert!(enumerate_topologies(9, 0..=1).is_err());
        assert!(enumerate_topologies(5, 0..=4).is_err());
    }
}
