//! Hyperbolic plane primitives in the hyperboloid model.
//!
//! Points live on the upper sheet `{x : ⟨x,x⟩ = -1, x0 > 0}` of the
//! Minkowski form `⟨x,y⟩ = -x0 y0 + x1 y1 + x2 y2`. Distances satisfy
//! `cosh d(p,q) = -⟨p,q⟩`, perpendicular bisectors are the planes
//! `⟨x, p - q⟩ = 0`, and orientation-preserving isometries are the 3×3
//! matrices `M` with `MᵀJM = J`, `det M = 1` and `M00 > 0`. Every operation
//! here is linear algebra on these vectors; the Poincaré disk appears only in
//! [`HPoint::to_poincare`], which the SVG renderer uses.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance for points produced by our own constructions.
pub const ON_SHEET_TOL: f64 = 1e-9;
/// Tolerance for externally supplied points.
pub const VALIDATION_TOL: f64 = 1e-6;
/// Tolerance for equidistance checks.
pub const EQUIDISTANCE_TOL: f64 = 1e-8;

type V3 = [f64; 3];

/// Minkowski inner product `-a0 b0 + a1 b1 + a2 b2`.
#[inline]
pub fn mink(a: &V3, b: &V3) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A point of the hyperbolic plane, stored as hyperboloid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct HPoint {
    c: V3,
}

impl TryFrom<[f64; 3]> for HPoint {
    type Error = Error;
    fn try_from(c: [f64; 3]) -> Result<Self> {
        HPoint::new(c[0], c[1], c[2])
    }
}

impl From<HPoint> for [f64; 3] {
    fn from(p: HPoint) -> Self {
        p.c
    }
}

impl HPoint {
    /// Validates coordinates (Minkowski norm `-1` within `1e-6`, `x0 ≥ 1`
    /// up to that tolerance) and re-projects them exactly onto the sheet.
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        let c = [x0, x1, x2];
        if !c.iter().all(|v| v.is_finite()) {
            return Err(Error::OffHyperboloid(c, f64::INFINITY));
        }
        let n = mink(&c, &c);
        let err = (n + 1.0).abs();
        if err > VALIDATION_TOL * x0.abs().max(1.0).powi(2) || x0 < 1.0 - VALIDATION_TOL {
            return Err(Error::OffHyperboloid(c, err));
        }
        Ok(Self::normalized(c))
    }

    /// Projects a future-timelike vector onto the sheet by scaling.
    ///
    /// Callers must pass a vector with `⟨v,v⟩ < 0`; the sign is fixed so the
    /// result has `x0 > 0`.
    pub(crate) fn normalized(v: V3) -> Self {
        let n = (-mink(&v, &v)).sqrt();
        let s = if v[0] < 0.0 { -1.0 / n } else { 1.0 / n };
        let mut c = [v[0] * s, v[1] * s, v[2] * s];
        // x0 is determined by the spatial part; recomputing it keeps the
        // norm at -1 to rounding even after long chains of operations.
        c[0] = (1.0 + c[1] * c[1] + c[2] * c[2]).sqrt();
        HPoint { c }
    }

    /// The base point `(1, 0, 0)`.
    pub fn origin() -> Self {
        HPoint { c: [1.0, 0.0, 0.0] }
    }

    /// The point at distance `r` from the origin in direction `angle`.
    pub fn from_polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        HPoint::normalized([r.cosh(), r.sinh() * c, r.sinh() * s])
    }

    /// Hyperboloid coordinates `(x0, x1, x2)`.
    pub fn coords(&self) -> V3 {
        self.c
    }

    /// Image in the unit Poincaré disk.
    pub fn to_poincare(&self) -> (f64, f64) {
        let d = 1.0 + self.c[0];
        (self.c[1] / d, self.c[2] / d)
    }

    /// Inverse of [`HPoint::to_poincare`]; `None` outside the open disk.
    pub fn from_poincare(u: f64, v: f64) -> Option<Self> {
        let r2 = u * u + v * v;
        if r2 >= 1.0 {
            return None;
        }
        let k = 1.0 / (1.0 - r2);
        Some(HPoint::normalized([(1.0 + r2) * k, 2.0 * u * k, 2.0 * v * k]))
    }
}

/// Hyperbolic distance.
///
/// Uses `d = 2·asinh(|p - q|_M / 2)` for nearby points, where the Minkowski
/// length of the chord is computed from the coordinate difference; this is
/// accurate down to zero, unlike `acosh(-⟨p,q⟩)`.
pub fn dist(p: &HPoint, q: &HPoint) -> f64 {
    let c = -mink(&p.c, &q.c);
    if c > 2.0 {
        return c.acosh();
    }
    let w = sub(&p.c, &q.c);
    let s = mink(&w, &w).max(0.0);
    2.0 * (0.5 * s.sqrt()).asinh()
}

/// The point at distance `s` from `p` along the geodesic towards `q`.
pub fn along(p: &HPoint, q: &HPoint, s: f64) -> HPoint {
    let l = dist(p, q);
    if l == 0.0 {
        return *p;
    }
    let a = (l - s).sinh() / l.sinh();
    let b = s.sinh() / l.sinh();
    HPoint::normalized([
        a * p.c[0] + b * q.c[0],
        a * p.c[1] + b * q.c[1],
        a * p.c[2] + b * q.c[2],
    ])
}

/// Geodesic midpoint.
pub fn midpoint(p: &HPoint, q: &HPoint) -> HPoint {
    HPoint::normalized([p.c[0] + q.c[0], p.c[1] + q.c[1], p.c[2] + q.c[2]])
}

/// Side test: positive when `x` lies to the left of the directed geodesic
/// `p → q`, negative to the right, zero on it.
///
/// The geodesic through `p` and `q` is the plane spanned by them, so the sign
/// is that of the Euclidean triple product `det(p, q, x)`.
pub fn orientation(p: &HPoint, q: &HPoint, x: &HPoint) -> f64 {
    dot(&cross(&p.c, &q.c), &x.c)
}

/// Direction of `q` seen from `v`, as an angle in `(-π, π]` measured in the
/// frame obtained by translating `v` to the origin along a geodesic.
pub fn bearing(v: &HPoint, q: &HPoint) -> f64 {
    let w = HIsometry::translation(v).inverse().apply(q);
    w.c[2].atan2(w.c[1])
}

/// Interior angle at `v` between the geodesics to `p` and `q`, in `[0, π]`.
pub fn angle_at(v: &HPoint, p: &HPoint, q: &HPoint) -> f64 {
    let mut a = (bearing(v, q) - bearing(v, p)).abs();
    if a > PI {
        a = 2.0 * PI - a;
    }
    a
}

/// Distance from `x` to the geodesic segment `[p, q]`.
pub fn dist_to_segment(x: &HPoint, p: &HPoint, q: &HPoint) -> f64 {
    let l = dist(p, q);
    let g = HIsometry::frame(p, q);
    let y = g.apply(x);
    // y = (cosh h cosh s, cosh h sinh s, sinh h) with s the foot parameter.
    let s = (y.c[1] / y.c[0]).atanh();
    if (0.0..=l).contains(&s) {
        y.c[2].asinh().abs()
    } else {
        dist(x, p).min(dist(x, q))
    }
}

/// Angle opposite side `a` in a triangle with sides `a`, `b`, `c`
/// (hyperbolic law of cosines).
pub fn triangle_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::InvalidSides(format!("non-positive side in ({a}, {b}, {c})")));
    }
    if a >= b + c || b >= a + c || c >= a + b {
        return Err(Error::InvalidSides(format!(
            "({a}, {b}, {c}) violates the triangle inequality"
        )));
    }
    let cos = (b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh());
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// Circumcenter of three points, or `None` when they lie on no circle.
///
/// The center is the intersection of the bisector planes `⟨x, p - q⟩ = 0` and
/// `⟨x, p - r⟩ = 0`; that line meets the hyperboloid exactly when the triple
/// is inscribed in a circle (as opposed to a horocycle or hypercycle).
pub fn circumcenter(p: &HPoint, q: &HPoint, r: &HPoint) -> Result<Option<HPoint>> {
    let tol = 1e-12;
    if dist(p, q) < tol || dist(p, r) < tol || dist(q, r) < tol {
        return Err(Error::Degenerate("coincident points in circumcenter".into()));
    }
    let j = |v: V3| [-v[0], v[1], v[2]];
    let x = cross(&j(sub(&p.c, &q.c)), &j(sub(&p.c, &r.c)));
    let n = mink(&x, &x);
    let scale = dot(&x, &x);
    if !(n < -1e-14 * scale) {
        return Ok(None);
    }
    Ok(Some(HPoint::normalized(x)))
}

/// Area of a hyperbolic polygon from its interior angles (Gauss–Bonnet).
pub fn polygon_area(vertex_angles: &[f64]) -> Result<f64> {
    let n = vertex_angles.len();
    if n < 3 {
        return Err(Error::InvalidSides(format!("polygon needs 3 vertices, got {n}")));
    }
    Ok((n as f64 - 2.0) * PI - vertex_angles.iter().sum::<f64>())
}

/// A geodesic segment with cached length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSegment {
    pub a: HPoint,
    pub b: HPoint,
    pub length: f64,
}

impl GeodesicSegment {
    pub fn new(a: HPoint, b: HPoint) -> Self {
        GeodesicSegment { a, b, length: dist(&a, &b) }
    }
}

/// An orientation-preserving isometry, acting linearly on hyperboloid
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HIsometry {
    pub m: [[f64; 3]; 3],
}

impl HIsometry {
    pub fn identity() -> Self {
        HIsometry { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Checks the Minkowski-form invariant to `1e-9` (scaled by the matrix
    /// size), unit determinant and preservation of the upper sheet.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Result<Self> {
        let g = HIsometry { m };
        let scale = g.norm().powi(2).max(1.0);
        let e = g.form_defect();
        if e > 1e-9 * scale || m[0][0] < 1.0 - 1e-9 || (g.det() - 1.0).abs() > 1e-9 * scale {
            return Err(Error::NotIsometry(e));
        }
        Ok(g)
    }

    /// Rotation by `angle` about the origin.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        HIsometry { m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]] }
    }

    /// The transvection along the geodesic from the origin to `p`, which maps
    /// the origin to `p`.
    pub fn translation(p: &HPoint) -> Self {
        let [x0, x1, x2] = p.c;
        let k = 1.0 / (1.0 + x0);
        HIsometry {
            m: [
                [x0, x1, x2],
                [x1, 1.0 + x1 * x1 * k, x1 * x2 * k],
                [x2, x1 * x2 * k, 1.0 + x2 * x2 * k],
            ],
        }
    }

    /// The isometry taking `a` to the origin and `b` to the positive
    /// `x1`-axis.
    pub fn frame(a: &HPoint, b: &HPoint) -> Self {
        let g = HIsometry::translation(a).inverse();
        let bb = g.apply(b);
        let phi = bb.c[2].atan2(bb.c[1]);
        HIsometry::rotation(-phi).compose(&g)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &HIsometry) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        HIsometry { m }
    }

    /// Inverse, computed exactly as `J Mᵀ J`.
    pub fn inverse(&self) -> Self {
        let s = [-1.0, 1.0, 1.0];
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = s[i] * self.m[j][i] * s[j];
            }
        }
        HIsometry { m }
    }

    /// Applies the isometry and re-projects the image onto the sheet.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        let mut v = [0.0; 3];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = dot(&self.m[i], &p.c);
        }
        HPoint::normalized(v)
    }

    /// Largest entry of `MᵀJM - J`.
    pub fn form_defect(&self) -> f64 {
        let s = [-1.0, 1.0, 1.0];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| self.m[k][i] * s[k] * self.m[k][j]).sum();
                let target = if i == j { s[i] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest absolute matrix entry.
    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// The unique orientation-preserving isometry carrying `src` onto `dst`.
///
/// With `flip = false` it maps `src.a → dst.a` and `src.b → dst.b`; with
/// `flip = true` it maps `src.a → dst.b` and `src.b → dst.a`.
pub fn segment_pairing_isometry(
    src: &GeodesicSegment,
    dst: &GeodesicSegment,
    flip: bool,
) -> Result<HIsometry> {
    if (src.length - dst.length).abs() >= 1e-9 {
        return Err(Error::LengthMismatch(src.length, dst.length));
    }
    let from = HIsometry::frame(&src.a, &src.b);
    let to = if flip {
        HIsometry::frame(&dst.b, &dst.a)
    } else {
        HIsometry::frame(&dst.a, &dst.b)
    };
    Ok(to.inverse().compose(&from))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn distance_basics() {
        let o = HPoint::origin();
        assert_eq!(dist(&o, &o), 0.0);
        let q = HPoint::new(2f64.cosh(), 2f64.sinh(), 0.0).unwrap();
        assert!(close(dist(&o, &q), 2.0, 1e-14));
        let tiny = HPoint::from_polar(1e-12, 0.3);
        assert!(close(dist(&o, &tiny), 1e-12, 1e-20));
    }

    #[test]
    fn rejects_points_off_sheet() {
        assert!(HPoint::new(1.0, 1.0, 0.0).is_err());
        assert!(HPoint::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn equilateral_angle_is_pi_over_nine() {
        let d = (1.0 / (1.0 - (PI / 9.0).cos()) - 1.0).acosh();
        assert!(close(triangle_angle(d, d, d).unwrap(), PI / 9.0, 1e-13));
    }

    #[test]
    fn equilateral_angle_from_doubled_radius() {
        for r in [0.3f64, 1.0, 1.7] {
            let c2 = (2.0 * r).cosh();
            let a = triangle_angle(2.0 * r, 2.0 * r, 2.0 * r).unwrap();
            assert!(close(a.cos(), 1.0 - 1.0 / (c2 + 1.0), 1e-13));
        }
    }

    #[test]
    fn triangle_inequality_enforced() {
        assert!(triangle_angle(3.0, 1.0, 1.0).is_err());
        assert!(triangle_angle(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn circumcenter_of_equilateral_triangle() {
        let d = 1.3f64;
        let j = ((d / 2.0).sinh() / (PI / 3.0).sin()).asinh();
        let pts: Vec<_> = (0..3).map(|k| HPoint::from_polar(j, 0.4 + 2.0 * PI * k as f64 / 3.0)).collect();
        assert!(close(dist(&pts[0], &pts[1]), d, 1e-12));
        let v = circumcenter(&pts[0], &pts[1], &pts[2]).unwrap().unwrap();
        for p in &pts {
            assert!(close(dist(&v, p), j, 1e-12));
        }
    }

    #[test]
    fn collinear_points_have_no_circumcenter() {
        let a = HPoint::from_polar(1.0, 0.0);
        let b = HPoint::origin();
        let c = HPoint::from_polar(0.5, PI);
        assert!(circumcenter(&a, &b, &c).unwrap().is_none());
    }

    #[test]
    fn non_cyclic_triple_has_no_circumcenter() {
        // Nearly collinear: sinh(d(b,c)/2) exceeds sinh(d(a,b)/2) + sinh(d(a,c)/2).
        let a = HPoint::origin();
        let b = HPoint::from_polar(1.0, 0.0);
        let c = HPoint::from_polar(1.0, PI - 0.05);
        let s = |x: f64| (x / 2.0).sinh();
        assert!(s(dist(&b, &c)) > s(dist(&a, &b)) + s(dist(&a, &c)));
        assert!(circumcenter(&a, &b, &c).unwrap().is_none());
        let c2 = HPoint::from_polar(1.0, 2.0);
        assert!(circumcenter(&a, &b, &c2).unwrap().is_some());
    }

    #[test]
    fn polygon_area_examples() {
        let eps = 1e-3;
        let a = polygon_area(&[PI / 3.0 - eps; 3]).unwrap();
        assert!(close(a, 3.0 * eps, 1e-14));
        assert!(polygon_area(&[0.1, 0.1]).is_err());
        assert!(close(polygon_area(&[PI / 9.0; 3]).unwrap() * 6.0, 4.0 * PI, 1e-12));
    }

    #[test]
    fn pairing_identity_and_flip() {
        let a = HPoint::from_polar(0.7, 0.2);
        let b = HPoint::from_polar(1.1, 2.0);
        let s = GeodesicSegment::new(a, b);
        let g = segment_pairing_isometry(&s, &s, false).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let t = if i == j { 1.0 } else { 0.0 };
                assert!(close(g.m[i][j], t, 1e-12));
            }
        }
        let f = segment_pairing_isometry(&s, &s, true).unwrap();
        assert!(dist(&f.apply(&a), &b) < 1e-12);
        assert!(dist(&f.apply(&b), &a) < 1e-12);
        assert!(dist(&f.apply(&midpoint(&a, &b)), &midpoint(&a, &b)) < 1e-12);
    }

    #[test]
    fn pairing_rejects_length_mismatch() {
        let s = GeodesicSegment::new(HPoint::origin(), HPoint::from_polar(1.0, 0.0));
        let t = GeodesicSegment::new(HPoint::origin(), HPoint::from_polar(1.1, 0.0));
        assert!(segment_pairing_isometry(&s, &t, false).is_err());
    }

    #[test]
    fn orientation_sign_convention() {
        let o = HPoint::origin();
        let e = HPoint::from_polar(1.0, 0.0);
        assert!(orientation(&o, &e, &HPoint::from_polar(1.0, 1.0)) > 0.0);
        assert!(orientation(&o, &e, &HPoint::from_polar(1.0, -1.0)) < 0.0);
    }

    #[test]
    fn segment_distance() {
        let p = HPoint::from_polar(1.0, PI);
        let q = HPoint::from_polar(1.0, 0.0);
        let x = HPoint::from_polar(0.5, PI / 2.0);
        assert!(close(dist_to_segment(&x, &p, &q), 0.5, 1e-12));
        let y = HPoint::from_polar(2.0, 0.0);
        assert!(close(dist_to_segment(&y, &p, &q), 1.0, 1e-12));
    }

    #[test]
    fn poincare_round_trip() {
        let p = HPoint::from_polar(2.3, -0.8);
        let (u, v) = p.to_poincare();
        let q = HPoint::from_poincare(u, v).unwrap();
        assert!(dist(&p, &q) < 1e-12);
    }

    #[test]
    fn angle_at_vertex() {
        let o = HPoint::origin();
        let a = HPoint::from_polar(1.0, 0.1);
        let b = HPoint::from_polar(2.0, 0.1 + 2.5);
        assert!(close(angle_at(&o, &a, &b), 2.5, 1e-12));
    }
}
