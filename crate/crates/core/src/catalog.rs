//! The empirical length formula for hexagon trees and the table that
//! compares its predictions with the trees actually found.
//!
//! With `p` Steiner points, `n = 4 - p` and rotational symmetry order `q`,
//! the predicted length is `L(n, q) = n + sqrt((6 - n)^2 - q (6 - n - q))`.

use thiserror::Error;

use crate::geom::regular_polygon;
use crate::relax::{find_all_local_minima, GeometricTree, RelaxError};
use crate::spanning::{spanning_catalog, SpanningClass, SpanningError, SpanningTree};

/// Length tolerance used when joining predictions with computed trees.
pub const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("(n = {n}, q = {q}) is outside the formula's domain n < 6, 1 <= q <= 6 - n")]
    OutOfDomain { n: i64, q: i64 },
    #[error("negative radicand {radicand} at (n = {n}, q = {q})")]
    NegativeRadicand { n: i64, q: i64, radicand: f64 },
    #[error("max_length must be positive and finite, got {0}")]
    BadMaxLength(f64),
    #[error(transparent)]
    Relax(#[from] RelaxError),
    #[error(transparent)]
    Spanning(#[from] SpanningError),
}

/// `n + sqrt((6 - n)^2 - q (6 - n - q))` for `n < 6` and `1 <= q <= 6 - n`.
pub fn empirical_length(n: i64, q: i64) -> Result<f64, CatalogError> {
    if n >= 6 || q < 1 || q > 6 - n {
        return Err(CatalogError::OutOfDomain { n, q });
    }
    let m = (6 - n) as f64;
    let qf = q as f64;
    let radicand = m * m - qf * (m - qf);
    if radicand < 0.0 {
        return Err(CatalogError::NegativeRadicand { n, q, radicand });
    }
    Ok(n as f64 + radicand.sqrt())
}

/// The same formula indexed by the number of Steiner points `p = 4 - n`.
pub fn empirical_length_p(p: i64, q: i64) -> Result<f64, CatalogError> {
    empirical_length(4 - p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogStatus {
    /// A computed tree has the predicted length, `p` and `q`.
    Observed,
    /// No computed tree has the predicted length.
    PredictedUnobserved,
    /// Trees of the predicted length exist but none with the predicted
    /// `p` and `q`.
    Exception,
}

impl CatalogStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CatalogStatus::Observed => "observed",
            CatalogStatus::PredictedUnobserved => "predicted-unobserved",
            CatalogStatus::Exception => "exception",
        }
    }
}

/// A computed tree joined to a catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchedTree {
    Steiner(GeometricTree),
    Spanning(SpanningTree),
}

impl MatchedTree {
    pub fn length(&self) -> f64 {
        match self {
            MatchedTree::Steiner(t) => t.total_length(),
            MatchedTree::Spanning(t) => t.total_length(),
        }
    }
}

/// A computed tree reduced to what the join looks at.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub length: f64,
    pub p: usize,
    pub q: usize,
    pub tree: MatchedTree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub p: i64,
    pub n: i64,
    /// The smaller of the two symmetry parameters sharing this length.
    pub q: i64,
    /// The partner `6 - n - q`, when it is a valid parameter.
    pub q_alt: Option<i64>,
    pub predicted_length: f64,
    pub matched: Option<Candidate>,
    pub status: CatalogStatus,
    pub note: Option<&'static str>,
}

/// The entry standing for the minimal tree: the formula reaches its length
/// only at `p = 6`.
const MINIMAL_TREE: (i64, i64, i64) = (6, 3, 5);

const MINIMAL_TREE_NOTE: &str =
    "minimal tree: the formula gives length 5 only at p = 6 (q = 3 or 5); the tree itself has no Steiner point";
const UNOBSERVED_NOTE: &str =
    "the formula places this length at n = 0 (p = 4), q = 1 or 5; n = 4 gives 4+sqrt(3) and 6 instead";
const SYMMETRY_NOTE: &str = "trees of this length exist but none has the formula's rotational symmetry";

/// Predicted entries before the join: `n` in `0..=4`, `q` in `1..=3`,
/// keeping one of each pair `q`, `6 - n - q`, plus the minimal-tree entry.
pub fn predicted_entries() -> Vec<(i64, i64, Option<i64>, f64)> {
    let mut out = Vec::new();
    for n in 0..=4i64 {
        for q in 1..=3i64.min(6 - n) {
            let partner = 6 - n - q;
            if partner >= 1 && partner < q {
                continue;
            }
            let len = empirical_length(n, q).expect("inside the domain");
            out.push((n, q, (partner >= 1 && partner != q).then_some(partner), len));
        }
    }
    let (p, q, q_alt) = MINIMAL_TREE;
    let len = empirical_length_p(p, q).expect("inside the domain");
    out.push((4 - p, q, Some(q_alt), len));
    out
}

fn candidates_from(steiner: &[GeometricTree], spanning: &[SpanningClass]) -> Vec<Candidate> {
    let mut all: Vec<Candidate> = steiner
        .iter()
        .map(|t| Candidate {
            length: t.total_length(),
            p: t.p(),
            q: t.q(),
            tree: MatchedTree::Steiner(t.clone()),
        })
        .chain(spanning.iter().map(|c| Candidate {
            length: c.length,
            p: 0,
            q: c.q,
            tree: MatchedTree::Spanning(c.representative.clone()),
        }))
        .collect();
    all.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.p.cmp(&b.p))
            .then(a.q.cmp(&b.q))
    });
    all
}

/// Joins the predictions with the given computed trees.
pub fn generate_catalog_from(
    max_length: f64,
    steiner: &[GeometricTree],
    spanning: &[SpanningClass],
) -> Result<Vec<CatalogEntry>, CatalogError> {
    if !(max_length.is_finite() && max_length > 0.0) {
        return Err(CatalogError::BadMaxLength(max_length));
    }
    let candidates = candidates_from(steiner, spanning);
    let mut entries = Vec::new();
    for (n, q, q_alt, predicted) in predicted_entries() {
        if predicted > max_length + MATCH_TOL {
            continue;
        }
        let p = 4 - n;
        let same_length: Vec<&Candidate> = candidates
            .iter()
            .filter(|c| (c.length - predicted).abs() <= MATCH_TOL)
            .collect();
        let exact = same_length.iter().find(|c| {
            c.p as i64 == p && (c.q as i64 == q || Some(c.q as i64) == q_alt)
        });
        let (status, matched) = match (exact, same_length.first()) {
            (Some(c), _) => (CatalogStatus::Observed, Some((*c).clone())),
            (None, Some(c)) => (CatalogStatus::Exception, Some((*c).clone())),
            (None, None) => (CatalogStatus::PredictedUnobserved, None),
        };
        let note = match status {
            CatalogStatus::Exception if (p, q) == (MINIMAL_TREE.0, MINIMAL_TREE.1) => Some(MINIMAL_TREE_NOTE),
            CatalogStatus::Exception => Some(SYMMETRY_NOTE),
            CatalogStatus::PredictedUnobserved if n == 0 => Some(UNOBSERVED_NOTE),
            _ => None,
        };
        entries.push(CatalogEntry {
            p,
            n,
            q,
            q_alt,
            predicted_length: predicted,
            matched,
            status,
            note,
        });
    }
    entries.sort_by(|a, b| {
        a.predicted_length
            .total_cmp(&b.predicted_length)
            .then(b.p.cmp(&a.p))
            .then(a.q.cmp(&b.q))
    });
    Ok(entries)
}

/// Runs the hexagon searches and joins their results with the predictions.
pub fn generate_catalog(max_length: f64) -> Result<Vec<CatalogEntry>, CatalogError> {
    if !(max_length.is_finite() && max_length > 0.0) {
        return Err(CatalogError::BadMaxLength(max_length));
    }
    let hex = regular_polygon(6, 1.0).expect("hexagon");
    let steiner = find_all_local_minima(&hex, max_length)?.trees;
    let spanning = spanning_catalog(&hex, max_length)?;
    generate_catalog_from(max_length, &steiner, &spanning)
}

/// One comparison of `L(n, q)` with `L(n, 6 - n - q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCase {
    pub n: i64,
    pub q: i64,
    pub partner: i64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub cases: Vec<IdentityCase>,
    pub max_difference: f64,
}

impl IdentityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_difference <= tol
    }
}

/// Compares `L(n, q)` with `L(n, 6 - n - q)` for `n` in `0..=4` and every
/// `q` whose partner is also at least 1.
pub fn symmetry_identity_check() -> IdentityReport {
    let mut cases = Vec::new();
    for n in 0..=4i64 {
        for q in 1..6 - n {
            let partner = 6 - n - q;
            let a = empirical_length(n, q).expect("inside the domain");
            let b = empirical_length(n, partner).expect("inside the domain");
            cases.push(IdentityCase {
                n,
                q,
                partner,
                difference: (a - b).abs(),
            });
        }
    }
    let max_difference = cases.iter().map(|c| c.difference).fold(0.0, f64::max);
    IdentityReport { cases, max_difference }
}

/// Distinct predicted lengths per `n` row, in increasing `n`.
pub fn row_lengths(entries: &[CatalogEntry]) -> Vec<(i64, Vec<f64>)> {
    let mut rows: Vec<(i64, Vec<f64>)> = Vec::new();
    let mut sorted: Vec<&CatalogEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.n.cmp(&b.n).then(a.predicted_length.total_cmp(&b.predicted_length)));
    for e in sorted {
        match rows.last_mut() {
            Some((n, lens)) if *n == e.n => {
                if lens.iter().all(|l| (l - e.predicted_length).abs() > MATCH_TOL) {
                    lens.push(e.predicted_length);
                }
            }
            _ => rows.push((e.n, vec![e.predicted_length])),
        }
    }
    rows
}

/// Rows holding more than two distinct lengths.
pub fn row_anomalies(entries: &[CatalogEntry]) -> Vec<(i64, Vec<f64>)> {
    row_lengths(entries).into_iter().filter(|(_, l)| l.len() > 2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn formula_values() {
        let s = f64::sqrt;
        assert!(close(empirical_length(0, 3).unwrap(), s(27.0)));
        assert!(close(empirical_length(0, 2).unwrap(), s(28.0)));
        assert!(close(empirical_length(0, 1).unwrap(), s(31.0)));
        assert!(close(empirical_length(1, 2).unwrap(), 1.0 + s(19.0)));
        assert!(close(empirical_length(1, 1).unwrap(), 1.0 + s(21.0)));
        assert!(close(empirical_length(2, 1).unwrap(), 2.0 + s(13.0)));
        assert!(close(empirical_length(4, 2).unwrap(), 6.0));
        assert!(close(empirical_length(4, 1).unwrap(), 4.0 + s(3.0)));
    }

    #[test]
    fn formula_in_p() {
        assert!(close(empirical_length_p(4, 3).unwrap(), 27f64.sqrt()));
        assert!(close(empirical_length_p(6, 3).unwrap(), 5.0));
        assert!(close(empirical_length_p(6, 5).unwrap(), 5.0));
        assert!(close(empirical_length_p(2, 1).unwrap(), 2.0 + 13f64.sqrt()));
        for p in 0..=4 {
            for q in 1..=2 + p {
                assert_eq!(empirical_length_p(p, q), empirical_length(4 - p, q));
            }
        }
    }

    #[test]
    fn formula_domain() {
        assert_eq!(empirical_length(6, 1), Err(CatalogError::OutOfDomain { n: 6, q: 1 }));
        assert!(empirical_length(2, 0).is_err());
        assert!(empirical_length(4, 3).is_err());
        assert!(empirical_length(-3, 9).is_ok());
    }

    #[test]
    fn identity_holds() {
        let report = symmetry_identity_check();
        assert!(report.holds(1e-12));
        let find = |n, q| report.cases.iter().find(|c| c.n == n && c.q == q).unwrap().partner;
        assert_eq!(find(2, 1), 3);
        assert_eq!(find(1, 2), 3);
        assert_eq!(find(0, 1), 5);
    }

    #[test]
    fn predicted_lengths() {
        let lens: Vec<f64> = predicted_entries().iter().map(|e| e.3).collect();
        let s = f64::sqrt;
        for want in [
            s(27.0),
            s(28.0),
            s(31.0),
            1.0 + s(19.0),
            1.0 + s(21.0),
            2.0 + s(12.0),
            2.0 + s(13.0),
            3.0 + s(7.0),
            6.0,
            4.0 + s(3.0),
            5.0,
        ] {
            assert!(lens.iter().any(|&l| close(l, want)), "missing {want}");
        }
        assert_eq!(lens.len(), 12);
    }

    #[test]
    fn empty_join_is_all_unobserved() {
        let entries = generate_catalog_from(6.0, &[], &[]).unwrap();
        assert!(entries.iter().all(|e| e.status == CatalogStatus::PredictedUnobserved));
        assert!(generate_catalog_from(0.0, &[], &[]).is_err());
        let short = generate_catalog_from(5.2, &[], &[]).unwrap();
        assert_eq!(short.len(), 2);
    }
}
