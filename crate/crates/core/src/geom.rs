//! Planar primitives: points, angles, labelled triangles, terminal sets and
//! the three-terminal Fermat construction.
//!
//! Lengths are in polygon-side units. All types are plain immutable values.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Signed-area magnitude below which three points count as collinear.
pub const COLLINEAR_EPS: f64 = 1e-12;

/// Minimum separation between two distinct terminals.
pub const DISTINCT_EPS: f64 = 1e-12;

const TWO_PI: f64 = 2.0 * PI;
const THIRD_PI: f64 = PI / 3.0;
const TWO_THIRDS_PI: f64 = 2.0 * PI / 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("triangle vertices are collinear (signed area {0:e})")]
    Collinear(f64),
    #[error("length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("angle {0} rad is outside the admissible range")]
    AngleOutOfRange(f64),
    #[error("angle {0} rad exceeds 120 degrees; the three-terminal tree has no interior Steiner point")]
    DegenerateAngle(f64),
    #[error("the Fermat point sits on a vertex other than the reference vertex")]
    DegenerateElsewhere,
    #[error("a regular polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("terminal set needs at least 3 points, got {0}")]
    TooFewTerminals(usize),
    #[error("terminals {0} and {1} coincide")]
    CoincidentTerminals(usize, usize),
    #[error("symmetry order must be positive")]
    ZeroSymmetryOrder,
}

/// A point in the plane. Coordinates are always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    x: f64,
    y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    /// Panics on NaN or infinite input; use [`Point2::try_new`] for
    /// untrusted data.
    pub fn new(x: f64, y: f64) -> Self {
        Self::try_new(x, y).expect("point coordinates must be finite")
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeomError::NonFinite(x, y))
        }
    }

    pub fn from_polar(radius: f64, theta: f64) -> Self {
        Self::new(radius * theta.cos(), radius * theta.sin())
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2-D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Direction angle of the vector, in `(-π, π]`.
    pub fn heading(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotated(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn rotated_about(self, center: Point2, theta: f64) -> Self {
        (self - center).rotated(theta) + center
    }

    pub fn lerp(self, other: Point2, t: f64) -> Self {
        self + (other - self) * t
    }

    pub fn unit(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Signed area of the triangle `(a, b, c)`; positive when counter-clockwise.
pub fn signed_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

/// Interior angle at `vertex` between the rays towards `p` and `q`, in `[0, π]`.
pub fn angle_between(vertex: Point2, p: Point2, q: Point2) -> f64 {
    let u = p - vertex;
    let v = q - vertex;
    u.cross(v).abs().atan2(u.dot(v))
}

/// An angle normalised to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn from_radians(value: f64) -> Self {
        assert!(value.is_finite(), "angle must be finite");
        let mut v = value.rem_euclid(TWO_PI);
        if v >= TWO_PI {
            v = 0.0;
        }
        Angle(v)
    }

    pub fn from_degrees(value: f64) -> Self {
        Self::from_radians(value.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::CounterClockwise => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleVertex {
    A,
    B,
    C,
}

/// A labelled, non-degenerate triangle. `b` is the vertex from which the
/// stem elevation is measured, with `l = |BC|` and `l' = |AB|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    a: Point2,
    b: Point2,
    c: Point2,
    orientation: Orientation,
}

impl Triangle {
    pub fn new(a: Point2, b: Point2, c: Point2) -> Result<Self, GeomError> {
        let area = signed_area(a, b, c);
        if area.abs() <= COLLINEAR_EPS {
            return Err(GeomError::Collinear(area));
        }
        let orientation = if area > 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        };
        Ok(Self {
            a,
            b,
            c,
            orientation,
        })
    }

    /// Rebuilds a triangle from `l = |BC|`, `l' = |AB|` and the angle at B.
    /// B sits at the origin and C on the positive x-axis; A is placed
    /// counter-clockwise of BC.
    pub fn from_sides_and_angle(l: f64, l_prime: f64, angle_b: Angle) -> Result<Self, GeomError> {
        check_length(l)?;
        check_length(l_prime)?;
        let b = Point2::ORIGIN;
        let c = Point2::new(l, 0.0);
        let a = Point2::from_polar(l_prime, angle_b.radians());
        Self::new(a, b, c)
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    pub fn c(&self) -> Point2 {
        self.c
    }

    pub fn vertex(&self, v: TriangleVertex) -> Point2 {
        match v {
            TriangleVertex::A => self.a,
            TriangleVertex::B => self.b,
            TriangleVertex::C => self.c,
        }
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.a, self.b, self.c]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(self.a, self.b, self.c)
    }

    /// Interior angle at the given vertex.
    pub fn angle_at(&self, v: TriangleVertex) -> f64 {
        match v {
            TriangleVertex::A => angle_between(self.a, self.b, self.c),
            TriangleVertex::B => angle_between(self.b, self.c, self.a),
            TriangleVertex::C => angle_between(self.c, self.a, self.b),
        }
    }

    /// Side lengths opposite A, B and C.
    pub fn side_lengths(&self) -> [f64; 3] {
        [
            self.b.distance(self.c),
            self.c.distance(self.a),
            self.a.distance(self.b),
        ]
    }

    /// Mirror image across the x-axis, keeping labels.
    pub fn mirrored(&self) -> Triangle {
        let m = |p: Point2| Point2::new(p.x(), -p.y());
        Triangle::new(m(self.a), m(self.b), m(self.c)).expect("mirror keeps the area")
    }
}

fn check_length(l: f64) -> Result<(), GeomError> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(GeomError::NonPositiveLength(l))
    }
}

/// Angle `α = ∠DBC` between side BC and the stem BD towards the Steiner
/// point D of the triangle with `|BC| = l`, `|AB| = l'` and angle B.
///
/// Fails for `B > 120°`, where the tree degenerates onto B, and when the
/// formula places D on A or C (that vertex's angle reaches 120°).
pub fn stem_elevation(l: f64, l_prime: f64, angle_b: Angle) -> Result<Angle, GeomError> {
    check_length(l)?;
    check_length(l_prime)?;
    let b = angle_b.radians();
    if b <= 0.0 || b >= PI {
        return Err(GeomError::AngleOutOfRange(b));
    }
    if b > TWO_THIRDS_PI {
        return Err(GeomError::DegenerateAngle(b));
    }
    let alpha = raw_elevation(l, l_prime, b);
    if alpha <= 0.0 || alpha >= b {
        return Err(GeomError::DegenerateElsewhere);
    }
    Ok(Angle::from_radians(alpha))
}

/// The elevation quotient itself. The denominator is positive for every
/// `B` in `(0, 2π/3]`, so `atan` of the quotient is continuous there.
fn raw_elevation(l: f64, l_prime: f64, b: f64) -> f64 {
    let num = l * THIRD_PI.sin() - l_prime * (THIRD_PI - b).sin();
    let den = l * THIRD_PI.cos() + l_prime * (THIRD_PI - b).cos();
    (num / den).atan()
}

/// Length of the shortest tree joining the three vertices of the triangle
/// with `|BC| = l`, `|AB| = l'` and angle B.
///
/// At or beyond 120° at B the tree is the two sides `l + l'`; a vertex of
/// at least 120° at A or C is handled the same way.
pub fn steiner_3_length(l: f64, l_prime: f64, angle_b: Angle) -> Result<f64, GeomError> {
    check_length(l)?;
    check_length(l_prime)?;
    let b = angle_b.radians();
    if b <= 0.0 || b >= PI {
        return Err(GeomError::AngleOutOfRange(b));
    }
    if b >= TWO_THIRDS_PI {
        return Ok(l + l_prime);
    }
    // Third side and the two remaining angles.
    let ac = (l * l + l_prime * l_prime - 2.0 * l * l_prime * b.cos())
        .max(0.0)
        .sqrt();
    let cos_a = (l_prime * l_prime + ac * ac - l * l) / (2.0 * l_prime * ac);
    let cos_c = (l * l + ac * ac - l_prime * l_prime) / (2.0 * l * ac);
    if cos_a <= -0.5 {
        return Ok(l_prime + ac);
    }
    if cos_c <= -0.5 {
        return Ok(l + ac);
    }
    let alpha = raw_elevation(l, l_prime, b);
    let (sin_a, cos_al) = alpha.sin_cos();
    let sqrt3 = 3f64.sqrt();
    Ok(((l - 2.0 * l_prime * b.cos()) * sin_a + (l * sqrt3 + 2.0 * l_prime * b.sin()) * cos_al) / sqrt3)
}

/// Result of the three-terminal construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatPoint {
    pub point: Point2,
    /// Set when some angle is at least 120°; the point is then that vertex.
    pub degenerate_at: Option<TriangleVertex>,
}

impl FermatPoint {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate_at.is_some()
    }
}

/// The point minimising the summed distance to the three vertices.
pub fn fermat_point(t: &Triangle) -> FermatPoint {
    for v in [TriangleVertex::A, TriangleVertex::B, TriangleVertex::C] {
        if reaches_120(t, v) {
            return FermatPoint {
                point: t.vertex(v),
                degenerate_at: Some(v),
            };
        }
    }
    FermatPoint {
        point: interior_fermat(t.a, t.b, t.c),
        degenerate_at: None,
    }
}

fn reaches_120(t: &Triangle, v: TriangleVertex) -> bool {
    let (p, q, r) = match v {
        TriangleVertex::A => (t.a, t.b, t.c),
        TriangleVertex::B => (t.b, t.c, t.a),
        TriangleVertex::C => (t.c, t.a, t.b),
    };
    wide_corner(p, q, r)
}

/// True when the angle at `p` in `(p, q, r)` is at least 120°, up to rounding.
fn wide_corner(p: Point2, q: Point2, r: Point2) -> bool {
    let u = q - p;
    let v = r - p;
    u.dot(v) <= (-0.5 + 1e-12) * u.norm() * v.norm()
}

/// Steiner point for a triangle whose angles are all below 120°.
///
/// Elevation at B from the closed form, then `|BD|` from the sine rule in
/// triangle BDC (angles α, 120° and 60° − α).
fn interior_fermat(a: Point2, b: Point2, c: Point2) -> Point2 {
    let bc = c - b;
    let ba = a - b;
    let l = bc.norm();
    let l_prime = ba.norm();
    let angle_b = angle_between(b, c, a);
    let alpha = raw_elevation(l, l_prime, angle_b);
    let bd = l * (THIRD_PI - alpha).sin() / TWO_THIRDS_PI.sin();
    let turn = if bc.cross(ba) >= 0.0 { alpha } else { -alpha };
    b + bc.unit().rotated(turn) * bd
}

/// Fermat point of three arbitrary points, including coincident and
/// collinear ones. Used as the relaxation kernel.
pub fn fermat_point_of(p: Point2, q: Point2, r: Point2) -> Point2 {
    if p == q || p == r {
        return p;
    }
    if q == r {
        return q;
    }
    if wide_corner(p, q, r) {
        return p;
    }
    if wide_corner(q, r, p) {
        return q;
    }
    if wide_corner(r, p, q) {
        return r;
    }
    interior_fermat(p, q, r)
}

/// Ordered terminals together with the rotational order of the polygon
/// that generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalSet {
    points: Vec<Point2>,
    symmetry_order: usize,
    center: Point2,
}

impl TerminalSet {
    pub fn new(points: Vec<Point2>, symmetry_order: usize) -> Result<Self, GeomError> {
        if points.len() < 3 {
            return Err(GeomError::TooFewTerminals(points.len()));
        }
        if symmetry_order == 0 {
            return Err(GeomError::ZeroSymmetryOrder);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].distance(points[j]) <= DISTINCT_EPS {
                    return Err(GeomError::CoincidentTerminals(i, j));
                }
            }
        }
        let n = points.len() as f64;
        let sum = points.iter().fold(Point2::ORIGIN, |acc, &p| acc + p);
        let center = sum * (1.0 / n);
        Ok(Self {
            points,
            symmetry_order,
            center,
        })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn symmetry_order(&self) -> usize {
        self.symmetry_order
    }

    /// Centroid of the terminals; the rotation centre for symmetry tests.
    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn get(&self, i: usize) -> Point2 {
        self.points[i]
    }
}

/// Regular `n`-gon with the given side, centred at the origin, vertex 0 on
/// the positive x-axis and labels running counter-clockwise.
pub fn regular_polygon(n: usize, side: f64) -> Result<TerminalSet, GeomError> {
    if n < 3 {
        return Err(GeomError::TooFewVertices(n));
    }
    check_length(side)?;
    let radius = side / (2.0 * (PI / n as f64).sin());
    let points = (0..n)
        .map(|k| Point2::from_polar(radius, TWO_PI * k as f64 / n as f64))
        .collect();
    let mut set = TerminalSet::new(points, n)?;
    set.center = Point2::ORIGIN;
    Ok(set)
}

/// Ratio `|t2| / |t1|` when the labelled correspondence `a↔a, b↔b, c↔c`
/// matches angles within `tol` and both triangles have the same handedness.
pub fn similar_same_chirality(t1: &Triangle, t2: &Triangle, tol: f64) -> Option<f64> {
    if t1.orientation() != t2.orientation() {
        return None;
    }
    for v in [TriangleVertex::A, TriangleVertex::B, TriangleVertex::C] {
        if (t1.angle_at(v) - t2.angle_at(v)).abs() > tol {
            return None;
        }
    }
    let s1 = t1.side_lengths();
    let s2 = t2.side_lengths();
    let perimeter1: f64 = s1.iter().sum();
    let perimeter2: f64 = s2.iter().sum();
    Some(perimeter2 / perimeter1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hexagon_side_equals_circumradius() {
        let hex = regular_polygon(6, 1.0).unwrap();
        assert_eq!(hex.len(), 6);
        assert_eq!(hex.symmetry_order(), 6);
        for i in 0..6 {
            assert!(close(hex.get(i).norm(), 1.0, 1e-12));
            assert!(close(hex.get(i).distance(hex.get((i + 1) % 6)), 1.0, 1e-12));
        }
        assert!(close(hex.get(0).x(), 1.0, 1e-15));
        assert!(close(hex.get(0).y(), 0.0, 1e-15));
        // counter-clockwise labels
        assert!(hex.get(1).y() > 0.0);
    }

    #[test]
    fn square_and_triangle_polygons() {
        let sq = regular_polygon(4, 1.0).unwrap();
        assert!(close(sq.get(0).distance(sq.get(2)), 2f64.sqrt(), 1e-12));
        let tri = regular_polygon(3, 1.0).unwrap();
        assert!(close(tri.get(0).norm(), 1.0 / 3f64.sqrt(), 1e-12));
        assert!(close(tri.get(1).distance(tri.get(2)), 1.0, 1e-12));
    }

    #[test]
    fn polygon_rejects_bad_input() {
        assert_eq!(regular_polygon(2, 1.0), Err(GeomError::TooFewVertices(2)));
        assert!(matches!(regular_polygon(5, 0.0), Err(GeomError::NonPositiveLength(_))));
        assert!(matches!(regular_polygon(5, -1.0), Err(GeomError::NonPositiveLength(_))));
    }

    #[test]
    fn terminal_set_rejects_duplicates() {
        let p = Point2::new(0.0, 0.0);
        let q = Point2::new(1.0, 0.0);
        assert_eq!(
            TerminalSet::new(vec![p, q, p], 1),
            Err(GeomError::CoincidentTerminals(0, 2))
        );
        assert_eq!(
            TerminalSet::new(vec![p, q], 1),
            Err(GeomError::TooFewTerminals(2))
        );
    }

    #[test]
    fn point_rejects_nan() {
        assert!(Point2::try_new(f64::NAN, 0.0).is_err());
        assert!(Point2::try_new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn angle_normalisation() {
        assert!(close(Angle::from_degrees(-90.0).degrees(), 270.0, 1e-12));
        assert!(close(Angle::from_degrees(720.0).radians(), 0.0, 1e-12));
        let a = Angle::from_radians(-1e-18);
        assert!(a.radians() >= 0.0 && a.radians() < TWO_PI);
    }

    #[test]
    fn elevation_examples() {
        let a = stem_elevation(1.0, 1.0, Angle::from_degrees(60.0)).unwrap();
        assert!(close(a.degrees(), 30.0, 1e-12));
        let a = stem_elevation(1.0, 1.0, Angle::from_degrees(90.0)).unwrap();
        assert!(close(a.degrees(), 45.0, 1e-12));
        let a = stem_elevation(1.0, 2.0, Angle::from_degrees(60.0)).unwrap();
        assert!(close(a.radians(), (3f64.sqrt() / 5.0).atan(), 1e-14));
        assert!(close(a.degrees(), 19.1066, 1e-4));
    }

    #[test]
    fn elevation_rejects_wide_angle_and_bad_lengths() {
        assert!(matches!(
            stem_elevation(1.0, 1.0, Angle::from_degrees(130.0)),
            Err(GeomError::DegenerateAngle(_))
        ));
        assert!(matches!(
            stem_elevation(0.0, 1.0, Angle::from_degrees(60.0)),
            Err(GeomError::NonPositiveLength(_))
        ));
        assert!(matches!(
            stem_elevation(1.0, -2.0, Angle::from_degrees(60.0)),
            Err(GeomError::NonPositiveLength(_))
        ));
        // 120 degrees exactly is still admissible
        assert!(stem_elevation(1.0, 1.0, Angle::from_degrees(120.0)).is_ok());
    }

    #[test]
    fn three_terminal_lengths() {
        let sqrt3 = 3f64.sqrt();
        let l = steiner_3_length(1.0, 1.0, Angle::from_degrees(60.0)).unwrap();
        assert!(close(l, sqrt3, 1e-12));
        let l = steiner_3_length(1.0, 1.0, Angle::from_degrees(130.0)).unwrap();
        assert_eq!(l, 2.0);
        let l = steiner_3_length(1.0, 1.0, Angle::from_degrees(90.0)).unwrap();
        assert!(close(l, (1.0 + sqrt3) / 2f64.sqrt(), 1e-12));
        assert!(close(l, 1.931852, 1e-6));
    }

    #[test]
    fn exactly_120_is_degenerate() {
        let l = steiner_3_length(1.0, 2.0, Angle::from_degrees(120.0)).unwrap();
        assert_eq!(l, 3.0);
        let t = Triangle::new(
            Point2::from_polar(1.0, TWO_THIRDS_PI),
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
        )
        .unwrap();
        assert_eq!(fermat_point(&t).degenerate_at, Some(TriangleVertex::B));
    }

    #[test]
    fn fermat_equilateral_is_centroid() {
        let t = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        )
        .unwrap();
        let f = fermat_point(&t);
        assert!(f.degenerate_at.is_none());
        assert!(close(f.point.x(), 0.5, 1e-12));
        assert!(close(f.point.y(), 3f64.sqrt() / 6.0, 1e-12));
    }

    #[test]
    fn fermat_right_isoceles() {
        let t = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        )
        .unwrap();
        let f = fermat_point(&t);
        let expect = (3.0 - 3f64.sqrt()) / 6.0;
        assert!(close(f.point.x(), expect, 1e-12));
        assert!(close(f.point.y(), expect, 1e-12));
    }

    #[test]
    fn fermat_wide_vertex() {
        let t = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(-1.0, 0.2),
        )
        .unwrap();
        let f = fermat_point(&t);
        assert_eq!(f.degenerate_at, Some(TriangleVertex::A));
        assert_eq!(f.point, Point2::new(0.0, 0.0));
    }

    #[test]
    fn fermat_of_degenerate_inputs() {
        let p = Point2::new(0.0, 0.0);
        let q = Point2::new(2.0, 0.0);
        let mid = Point2::new(0.7, 0.0);
        assert_eq!(fermat_point_of(p, q, mid), mid);
        assert_eq!(fermat_point_of(p, p, q), p);
        assert_eq!(fermat_point_of(q, p, p), p);
    }

    #[test]
    fn fermat_orientation_independent() {
        let a = Point2::new(0.3, 1.7);
        let b = Point2::new(-0.4, 0.1);
        let c = Point2::new(2.2, 0.4);
        let f1 = fermat_point(&Triangle::new(a, b, c).unwrap()).point;
        let f2 = fermat_point(&Triangle::new(c, b, a).unwrap()).point;
        let f3 = fermat_point_of(b, a, c);
        assert!(f1.distance(f2) < 1e-12);
        assert!(f1.distance(f3) < 1e-12);
    }

    #[test]
    fn collinear_triangle_rejected() {
        let r = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(2.0, 2.0),
        );
        assert!(matches!(r, Err(GeomError::Collinear(_))));
    }

    #[test]
    fn similarity_and_chirality() {
        let t = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.3, 1.1),
        )
        .unwrap();
        assert!(close(similar_same_chirality(&t, &t, 1e-12).unwrap(), 1.0, 1e-15));
        assert_eq!(similar_same_chirality(&t, &t.mirrored(), 1e-9), None);
        let scaled = Triangle::new(t.a() * 3.0, t.b() * 3.0, t.c() * 3.0).unwrap();
        assert!(close(similar_same_chirality(&t, &scaled, 1e-12).unwrap(), 3.0, 1e-12));
        // point reflection keeps handedness
        let flipped = Triangle::new(-t.a(), -t.b(), -t.c()).unwrap();
        assert!(similar_same_chirality(&t, &flipped, 1e-12).is_some());
    }
}
