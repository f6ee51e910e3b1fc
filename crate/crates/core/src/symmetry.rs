//! Dihedral symmetry of embedded trees on a polygon's terminal set.

use std::f64::consts::PI;

use crate::geom::{Point2, TerminalSet};

/// Grid used to round coordinates before comparing point multisets.
pub const ROUNDING: f64 = 1e-8;

/// An element of the polygon's dihedral group: optional reflection across
/// the axis through the centre and terminal 0, followed by a rotation of
/// `steps * 2π / order` about the centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    center: Point2,
    axis: f64,
    rotation: f64,
    reflect: bool,
}

impl Isometry {
    pub fn apply(&self, p: Point2) -> Point2 {
        let mut v = p - self.center;
        if self.reflect {
            let local = v.rotated(-self.axis);
            v = Point2::new(local.x(), -local.y()).rotated(self.axis);
        }
        v.rotated(self.rotation) + self.center
    }

    pub fn is_reflection(&self) -> bool {
        self.reflect
    }
}

/// All `2m` rotations and reflections of a terminal set with symmetry order `m`.
pub fn dihedral_group(terminals: &TerminalSet) -> Vec<Isometry> {
    let center = terminals.center();
    let axis = (terminals.get(0) - center).heading();
    let m = terminals.symmetry_order();
    let mut group = Vec::with_capacity(2 * m);
    for reflect in [false, true] {
        for k in 0..m {
            group.push(Isometry {
                center,
                axis,
                rotation: 2.0 * PI * k as f64 / m as f64,
                reflect,
            });
        }
    }
    group
}

pub(crate) type GridPoint = (i64, i64);
pub(crate) type SegmentKey = (GridPoint, GridPoint);

fn snap(p: Point2) -> GridPoint {
    let r = |v: f64| {
        let q = (v / ROUNDING).round() as i64;
        // avoid distinguishing -0 from 0 via the sign of tiny values
        if q == 0 {
            0
        } else {
            q
        }
    };
    (r(p.x()), r(p.y()))
}

/// Sorted multiset of rounded segments after applying `iso`.
pub(crate) fn segment_key(
    points: &[Point2],
    edges: &[(usize, usize)],
    iso: Option<&Isometry>,
) -> Vec<SegmentKey> {
    let mut key: Vec<SegmentKey> = edges
        .iter()
        .map(|&(u, v)| {
            let (mut p, mut q) = (points[u], points[v]);
            if let Some(iso) = iso {
                p = iso.apply(p);
                q = iso.apply(q);
            }
            let (a, b) = (snap(p), snap(q));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    key.sort_unstable();
    key
}

/// Lexicographically smallest segment multiset over the dihedral group;
/// two embedded trees are congruent under the group iff their keys match.
pub(crate) fn canonical_segment_key(
    points: &[Point2],
    edges: &[(usize, usize)],
    group: &[Isometry],
) -> Vec<SegmentKey> {
    group
        .iter()
        .map(|iso| segment_key(points, edges, Some(iso)))
        .min()
        .unwrap_or_else(|| segment_key(points, edges, None))
}

fn divisors_descending(m: usize) -> Vec<usize> {
    let mut d: Vec<usize> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    d.reverse();
    d
}

/// True when rotating every segment by `theta` about `center` lands on some
/// segment of the same set, endpoints matched within `tol`.
pub fn segments_invariant(
    points: &[Point2],
    edges: &[(usize, usize)],
    center: Point2,
    theta: f64,
    tol: f64,
) -> bool {
    let segs: Vec<(Point2, Point2)> = edges.iter().map(|&(u, v)| (points[u], points[v])).collect();
    segs.iter().all(|&(p, q)| {
        let p2 = p.rotated_about(center, theta);
        let q2 = q.rotated_about(center, theta);
        segs.iter().any(|&(a, b)| {
            (p2.distance(a) <= tol && q2.distance(b) <= tol)
                || (p2.distance(b) <= tol && q2.distance(a) <= tol)
        })
    })
}

/// Largest divisor `d` of the terminal set's symmetry order such that a
/// rotation by `2π/d` about the centre maps the segment set onto itself.
pub fn rotational_order(
    points: &[Point2],
    edges: &[(usize, usize)],
    terminals: &TerminalSet,
    tol: f64,
) -> usize {
    let center = terminals.center();
    divisors_descending(terminals.symmetry_order())
        .into_iter()
        .find(|&d| d == 1 || segments_invariant(points, edges, center, 2.0 * PI / d as f64, tol))
        .unwrap_or(1)
}
