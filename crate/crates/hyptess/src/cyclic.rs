//! Cyclic polygons described by their side lengths.
//!
//! A tuple `(d_0, …, d_{n-1})` is the side-length tuple of a polygon inscribed
//! in a circle iff every `sinh(d_i/2)` is less than the sum of the others.
//! Writing `θ_i(J) = asin(sinh(d_i/2)/sinh J)` for the half-angle subtended at
//! the center by side `i` on a circle of radius `J`, the polygon is
//!
//! * **centered** (center in the interior) iff `Σ 2θ_i(M/2) > 2π`, with `M`
//!   the longest side; its radius solves `Σ θ_i(J) = π`;
//! * **boundary-centered** (center on the longest side) at equality, with
//!   `J = M/2`;
//! * **non-centered** otherwise; its radius solves `θ_max(J) = Σ_{i≠max} θ_i(J)`.
//!
//! The radius-`R` defect is the area of the polygon outside radius-`R` disks
//! about its vertices. Coning the polygon to its center splits it into
//! isosceles triangles with legs `J`, base `d_i` and base angle `β_i`
//! (`cos β_i = tanh(d_i/2)/tanh J`); each contributes
//! `π − 2θ_i − 2β_i cosh R`, and for a non-centered polygon the triangle on the
//! longest side is subtracted rather than added.
//!
//! All angle evaluations use the `atan2` forms below rather than `asin`/`acos`
//! of ratios, which keeps full precision when `J` is close to `d/2`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Width of the band around `2π` in which a central-angle sum is classified
/// as boundary-centered.
pub const CLASS_DEAD_BAND: f64 = 1e-11;

/// Relative slack allowed when checking `R ≤ min(sides)/2`.
const RADIUS_SLACK: f64 = 1e-12;

/// Classification of a side-length tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CyclicClass {
    NotCyclic,
    NonCentered,
    BoundaryCentered,
    Centered,
}

/// A side-length tuple together with its classification and circumradius
/// (`f64::INFINITY` for tuples that are not cyclic).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicTuple {
    pub sides: Vec<f64>,
    pub class: CyclicClass,
    pub radius: f64,
}

impl CyclicTuple {
    /// Index of the (first) longest side.
    pub fn longest(&self) -> usize {
        longest_index(&self.sides)
    }
}

fn longest_index(sides: &[f64]) -> usize {
    let mut k = 0;
    for (i, &d) in sides.iter().enumerate() {
        if d > sides[k] {
            k = i;
        }
    }
    k
}

fn check_sides(sides: &[f64], min_len: usize) -> Result<()> {
    if sides.len() < min_len {
        return Err(Error::InvalidSides(format!(
            "need at least {min_len} side lengths, got {}",
            sides.len()
        )));
    }
    if let Some(d) = sides.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::InvalidSides(format!("side length {d} is not positive")));
    }
    Ok(())
}

/// `θ = asin(sinh(d/2)/sinh J)` for `J ≥ d/2`, evaluated stably.
fn half_angle(d: f64, j: f64) -> f64 {
    let h = d / 2.0;
    if j <= h {
        return PI / 2.0;
    }
    let gap = ((j - h).sinh() * (j + h).sinh()).sqrt(); // √(sinh²J − sinh²(d/2))
    h.sinh().atan2(gap)
}

/// Base angle `β` with `cos β = tanh(d/2)/tanh J`, evaluated stably.
fn base_angle(d: f64, j: f64) -> f64 {
    let h = d / 2.0;
    if j <= h {
        return 0.0;
    }
    let gap = ((j - h).sinh() * (j + h).sinh()).sqrt();
    gap.atan2(h.sinh() * j.cosh())
}

/// `Σ 2·asin(s_i · u)`, the central-angle sum at `sinh J = 1/u`.
fn angle_sum(s: &[f64], u: f64) -> f64 {
    s.iter().map(|&x| 2.0 * (x * u).min(1.0).asin()).sum()
}

/// Classifies a side-length tuple and solves for its circumradius.
pub fn classify(sides: &[f64]) -> Result<CyclicTuple> {
    check_sides(sides, 3)?;
    let k = longest_index(sides);
    let m = sides[k];
    let s: Vec<f64> = sides.iter().map(|d| (d / 2.0).sinh()).collect();
    let others: f64 = s.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| v).sum();
    if s[k] >= others {
        return Ok(CyclicTuple {
            sides: sides.to_vec(),
            class: CyclicClass::NotCyclic,
            radius: f64::INFINITY,
        });
    }
    // At J = M/2 the longest side subtends exactly π; evaluating that term
    // through asin would cost half the working precision.
    let rest: Vec<f64> = s.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| *v).collect();
    let total = PI + angle_sum(&rest, 1.0 / s[k]);
    let class = if (total - 2.0 * PI).abs() <= CLASS_DEAD_BAND {
        CyclicClass::BoundaryCentered
    } else if total > 2.0 * PI {
        CyclicClass::Centered
    } else {
        CyclicClass::NonCentered
    };
    let mut t = CyclicTuple { sides: sides.to_vec(), class, radius: m / 2.0 };
    t.radius = radius(&t)?;
    Ok(t)
}

/// Circumradius of a classified tuple.
///
/// The angle equations are solved by bisection in `u = 1/sinh J` over
/// `(0, 1/sinh(M/2)]`, which covers every radius from `M/2` to infinity with
/// a finite bracket.
pub fn radius(t: &CyclicTuple) -> Result<f64> {
    let k = longest_index(&t.sides);
    let m = t.sides[k];
    let s: Vec<f64> = t.sides.iter().map(|d| (d / 2.0).sinh()).collect();
    let u_max = 1.0 / s[k];
    let u = match t.class {
        CyclicClass::NotCyclic => return Err(Error::NotCyclic(t.sides.clone())),
        CyclicClass::BoundaryCentered => return Ok(m / 2.0),
        CyclicClass::Centered => bisect(|u| angle_sum(&s, u) - 2.0 * PI, 0.0, u_max)?,
        CyclicClass::NonCentered => {
            let rest: Vec<f64> = s.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| *v).collect();
            bisect(
                |u| (s[k] * u).min(1.0).asin() - 0.5 * angle_sum(&rest, u),
                // The equation also vanishes at u = 0 (infinite radius), so
                // start strictly inside, where it is negative.
                u_max * 1e-200,
                u_max,
            )?
        }
    };
    Ok((1.0 / u).asinh().max(m / 2.0))
}

/// The longest side making `(b₀, others)` boundary-centered.
pub fn b0(others: &[f64]) -> Result<f64> {
    check_sides(others, 2)?;
    if others.len() == 2 {
        return Ok((others[0].cosh() + others[1].cosh() - 1.0).acosh());
    }
    let s: Vec<f64> = others.iter().map(|d| (d / 2.0).sinh()).collect();
    let smax = s.iter().cloned().fold(0.0, f64::max);
    // Σ asin(s_i u) = π/2 with u = 1/sinh(b/2) ∈ (0, 1/s_max].
    let u = bisect(|u| 0.5 * angle_sum(&s, u) - PI / 2.0, 0.0, 1.0 / smax)?;
    let m = others.iter().cloned().fold(0.0, f64::max);
    Ok((2.0 * (1.0 / u).asinh()).max(m))
}

/// The supremum of longest sides keeping `(h, others)` cyclic:
/// `h₀ = 2·asinh(Σ sinh(d_i/2))`.
pub fn h0(others: &[f64]) -> Result<f64> {
    check_sides(others, 2)?;
    Ok(2.0 * others.iter().map(|d| (d / 2.0).sinh()).sum::<f64>().asinh())
}

fn check_disk(r: f64, max: f64) -> Result<()> {
    if !(r >= 0.0) || r > max * (1.0 + RADIUS_SLACK) {
        return Err(Error::RadiusOutOfRange { radius: r, max });
    }
    Ok(())
}

/// Defect of the isosceles triangle with base `d`, legs `j` and apex at the
/// circle's center: its area minus the radius-`r` sectors at the two base
/// vertices.
pub fn isosceles_defect(d: f64, j: f64, r: f64) -> Result<f64> {
    if !(d > 0.0) || j < d / 2.0 * (1.0 - 1e-15) {
        return Err(Error::InvalidSides(format!("need J ≥ d/2 > 0, got d = {d}, J = {j}")));
    }
    check_disk(r, d / 2.0)?;
    Ok(PI - 2.0 * half_angle(d, j) - 2.0 * base_angle(d, j) * r.cosh())
}

/// Half central angles `θ_i` and base angles `β_i` of the isosceles pieces.
///
/// The longest side's angles are recovered from the angle constraint
/// (`θ_k = π − Σθ_i` when centered, `θ_k = Σθ_i` when not) and the right
/// triangle relation `cos θ = cosh(d/2)·sin β`: evaluating them directly
/// from `J` would lose half the working precision near the
/// boundary-centered locus, where `J → d_k/2`.
fn piece_angles(t: &CyclicTuple) -> Vec<(f64, f64)> {
    let k = t.longest();
    let mut out: Vec<(f64, f64)> =
        t.sides.iter().map(|&d| (half_angle(d, t.radius), base_angle(d, t.radius))).collect();
    let rest: f64 = out.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, a)| a.0).sum();
    let theta = match t.class {
        CyclicClass::NonCentered => rest,
        _ => PI - rest,
    }
    .clamp(0.0, PI / 2.0);
    let beta = (theta.cos() / (t.sides[k] / 2.0).cosh()).clamp(-1.0, 1.0).asin();
    out[k] = (theta, beta);
    out
}

/// Radius-`r` defect of a cyclic polygon.
pub fn defect(t: &CyclicTuple, r: f64) -> Result<f64> {
    let dmin = t.sides.iter().cloned().fold(f64::INFINITY, f64::min);
    check_disk(r, dmin / 2.0)?;
    formal_defect(t, r)
}

/// The defect expression `Σ ±(π − 2θ_i − 2β_i cosh r)` for any `r ≥ 0`.
///
/// For `r ≤ min(d_i)/2` this is [`defect`]. Beyond that the disks overlap
/// and the value is no longer an area, but it stays decreasing in `r`, so a
/// lower bound computed at a slightly larger radius remains a lower bound
/// at the smaller one.
pub fn formal_defect(t: &CyclicTuple, r: f64) -> Result<f64> {
    if t.class == CyclicClass::NotCyclic {
        return Err(Error::NotCyclic(t.sides.clone()));
    }
    if !(r >= 0.0) {
        return Err(Error::RadiusOutOfRange { radius: r, max: f64::INFINITY });
    }
    let k = t.longest();
    let ch = r.cosh();
    Ok(piece_angles(t)
        .into_iter()
        .enumerate()
        .map(|(i, (theta, beta))| {
            let piece = PI - 2.0 * theta - 2.0 * beta * ch;
            if t.class == CyclicClass::NonCentered && i == k {
                -piece
            } else {
                piece
            }
        })
        .sum())
}

/// Convenience: classify `sides` and return its radius-`r` defect.
pub fn defect_of(sides: &[f64], r: f64) -> Result<f64> {
    defect(&classify(sides)?, r)
}

/// Partial derivative of the radius-`r` defect in side `i`:
/// `±cosh r · √(1/cosh²(d_i/2) − 1/cosh² J)`.
pub fn defect_partial(t: &CyclicTuple, i: usize, r: f64) -> Result<f64> {
    match t.class {
        CyclicClass::NotCyclic => return Err(Error::NotCyclic(t.sides.clone())),
        CyclicClass::BoundaryCentered => {
            return Err(Error::OutOfRange(
                "defect derivative is one-sided on the boundary-centered locus".into(),
            ))
        }
        _ => {}
    }
    let d = *t
        .sides
        .get(i)
        .ok_or_else(|| Error::OutOfRange(format!("side index {i} out of range")))?;
    let dmin = t.sides.iter().cloned().fold(f64::INFINITY, f64::min);
    check_disk(r, dmin / 2.0)?;
    let h = d / 2.0;
    // √(1/cosh²(d/2) − 1/cosh²J) = tanh(a)/cosh(d/2), with the apothem `a`
    // given by sinh a = sinh J·cos θ / cosh(d/2).
    let theta = piece_angles(t)[i].0;
    let apothem = (t.radius.sinh() * theta.cos() / h.cosh()).asinh();
    let mag = apothem.tanh() / h.cosh();
    let sign = if t.class == CyclicClass::NonCentered && i == t.longest() { -1.0 } else { 1.0 };
    Ok(sign * r.cosh() * mag)
}

/// Limit of the defect of `(h₀(others) − ε, others)` as `ε → 0`, where the
/// circumradius diverges and the polygon becomes inscribed in a horocycle.
pub fn horocyclic_defect(others: &[f64], r: f64) -> Result<f64> {
    let dmin = others.iter().cloned().fold(f64::INFINITY, f64::min);
    check_disk(r, dmin / 2.0)?;
    formal_horocyclic_defect(others, r)
}

/// [`horocyclic_defect`] evaluated as a formal expression for any `r ≥ 0`
/// (see [`formal_defect`]).
pub fn formal_horocyclic_defect(others: &[f64], r: f64) -> Result<f64> {
    let h = h0(others)?;
    if !(r >= 0.0) {
        return Err(Error::RadiusOutOfRange { radius: r, max: f64::INFINITY });
    }
    let ch = r.cosh();
    // β → acos(tanh(d/2)) = atan2(1, sinh(d/2)) as J → ∞.
    let piece = |d: f64| PI - 2.0 * 1f64.atan2((d / 2.0).sinh()) * ch;
    Ok(others.iter().map(|&d| piece(d)).sum::<f64>() - piece(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::{polygon_area, triangle_angle};

    fn d_alpha() -> f64 {
        (1.0 / (1.0 - (PI / 9.0).cos()) - 1.0).acosh()
    }

    fn d_beta() -> f64 {
        let c = bisect(|x| x * x * x - 14.0 * x * x - 15.0 * x - 4.0, 14.0, 16.0).unwrap();
        c.acosh()
    }

    fn d03(d: f64) -> f64 {
        PI - 6.0 * (1.0 / (2.0 * (d / 2.0).cosh())).asin()
    }

    fn d04(d: f64) -> f64 {
        2.0 * PI - 8.0 * (2f64.sqrt() / (2.0 * (d / 2.0).cosh())).asin()
    }

    #[test]
    fn equilateral_is_centered() {
        for d in [0.1, 1.0, 3.0, 6.0] {
            assert_eq!(classify(&[d, d, d]).unwrap().class, CyclicClass::Centered);
        }
    }

    #[test]
    fn isosceles_boundary_tuple() {
        let d = 2.2f64;
        let b = (2.0 * d.cosh() - 1.0).acosh();
        let t = classify(&[b, d, d]).unwrap();
        assert_eq!(t.class, CyclicClass::BoundaryCentered);
        assert_eq!(t.radius, b / 2.0);
    }

    #[test]
    fn over_long_side_is_not_cyclic() {
        let d = 1.4f64;
        let big = 2.0 * (2.5 * (d / 2.0).sinh()).asinh();
        assert_eq!(classify(&[big, d, d]).unwrap().class, CyclicClass::NotCyclic);
        assert!(radius(&classify(&[big, d, d]).unwrap()).is_err());
    }

    #[test]
    fn classify_rejects_bad_input() {
        assert!(classify(&[1.0, 1.0]).is_err());
        assert!(classify(&[1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn regular_polygon_radius() {
        for n in 3..8 {
            let d = 1.7;
            let t = classify(&vec![d; n]).unwrap();
            let expect = ((d / 2.0).sinh() / (PI / n as f64).sin()).asinh();
            assert!((t.radius - expect).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn boundary_isosceles_radius_matches_square() {
        let d = 2.9;
        let b = b0(&[d, d]).unwrap();
        let t = classify(&[b, d, d]).unwrap();
        assert!((t.radius.sinh() - 2f64.sqrt() * (d / 2.0).sinh()).abs() < 1e-12);
        let sq = classify(&[d; 4]).unwrap();
        assert!((sq.radius - t.radius).abs() < 1e-12);
    }

    #[test]
    fn isosceles_radius_closed_form() {
        // sinh J = 2 sinh²(d/2) / √(4 sinh²(d/2) − sinh²(x/2)) for (x, d, d).
        let d = 3.0f64;
        for x in [2.0, 3.0, 3.5, 4.0, 4.2] {
            let t = classify(&[x, d, d]).unwrap();
            let s = (d / 2.0).sinh();
            let closed = 2.0 * s * s / (4.0 * s * s - (x / 2.0).sinh().powi(2)).sqrt();
            assert!((t.radius.sinh() - closed).abs() < 1e-10 * closed, "x = {x}");
        }
    }

    #[test]
    fn b0_round_trip_general() {
        let o = [2.0, 2.5, 3.0];
        let b = b0(&o).unwrap();
        let t = classify(&[b, o[0], o[1], o[2]]).unwrap();
        assert_eq!(t.class, CyclicClass::BoundaryCentered);
        assert!((t.radius - b / 2.0).abs() < 1e-10);
        // General solver agrees with the closed form for two inputs.
        let s: Vec<f64> = [1.3f64, 2.1].iter().map(|d| (d / 2.0).sinh()).collect();
        let u = bisect(|u| 0.5 * angle_sum(&s, u) - PI / 2.0, 0.0, 1.0 / s[1]).unwrap();
        assert!((2.0 * (1.0 / u).asinh() - b0(&[1.3, 2.1]).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn h0_bracketing() {
        let o = [1.1, 2.3];
        let h = h0(&o).unwrap();
        assert!((h0(&[2.0, 2.0]).unwrap() - 2.0 * (2.0 * 1f64.sinh()).asinh()).abs() < 1e-14);
        assert_eq!(classify(&[h - 1e-6, o[0], o[1]]).unwrap().class, CyclicClass::NonCentered);
        assert_eq!(classify(&[h + 1e-6, o[0], o[1]]).unwrap().class, CyclicClass::NotCyclic);
        assert!(h > b0(&o).unwrap());
    }

    #[test]
    fn isosceles_defect_limits() {
        let (d, j) = (1.5f64, 1.2f64);
        let th = ((d / 2.0).sinh() / j.sinh()).asin();
        let be = ((d / 2.0).tanh() / j.tanh()).acos();
        assert!((isosceles_defect(d, j, 0.0).unwrap() - (PI - 2.0 * th - 2.0 * be)).abs() < 1e-13);
        assert!(isosceles_defect(d, d / 2.0, 0.3).unwrap().abs() < 1e-14);
        assert!(isosceles_defect(d, 0.5, 0.3).is_err());
        assert!(isosceles_defect(d, j, 0.8).is_err());
    }

    #[test]
    fn isosceles_pieces_sum_to_triangle_area() {
        let d = 2.0;
        let t = classify(&[d, d, d]).unwrap();
        let pieces = 3.0 * isosceles_defect(d, t.radius, 0.0).unwrap();
        let a = triangle_angle(d, d, d).unwrap();
        assert!((pieces - polygon_area(&[a, a, a]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn defect_of_triangle_matches_gauss_bonnet() {
        for s in [[2.0, 2.5, 3.0], [1.0, 1.0, 1.7], [2.0, 2.0, 3.0]] {
            let area = polygon_area(&[
                triangle_angle(s[0], s[1], s[2]).unwrap(),
                triangle_angle(s[1], s[2], s[0]).unwrap(),
                triangle_angle(s[2], s[0], s[1]).unwrap(),
            ])
            .unwrap();
            assert!((defect_of(&s, 0.0).unwrap() - area).abs() < 1e-9, "{s:?}");
        }
    }

    #[test]
    fn sharp_examples() {
        let da = d_alpha();
        assert!((defect_of(&[da; 3], 0.0).unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
        let db = d_beta();
        let tri = defect_of(&[db; 3], 0.0).unwrap();
        let quad = defect_of(&[db; 4], 0.0).unwrap();
        assert!((tri - d03(db)).abs() < 1e-12);
        assert!((quad - d04(db)).abs() < 1e-12);
        assert!((4.0 * tri + quad - 4.0 * PI).abs() < 1e-10);
        let bb = b0(&[db, db]).unwrap();
        assert!((quad - 2.0 * defect_of(&[bb, db, db], 0.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn regular_triangle_defect_at_table_radius() {
        let d1 = 15.0166f64.acosh();
        let r1 = 2.8298f64.acosh();
        let v = defect_of(&[d1; 3], r1).unwrap();
        assert!((0.12586..0.12587).contains(&v), "{v}");
    }

    #[test]
    fn derivative_at_regular_triangle() {
        let db = d_beta();
        let t = classify(&[db; 3]).unwrap();
        let expect = (1.0 / (db / 2.0).cosh().powi(2) - 1.0 / t.radius.cosh().powi(2)).sqrt();
        assert!((defect_partial(&t, 0, 0.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn derivative_signs_for_non_centered() {
        let t = classify(&[3.0, 2.2, 2.3]).unwrap();
        assert_eq!(t.class, CyclicClass::NonCentered);
        assert!(defect_partial(&t, 0, 0.5).unwrap() < 0.0);
        assert!(defect_partial(&t, 1, 0.5).unwrap() > 0.0);
        let b = classify(&[b0(&[2.0, 2.0]).unwrap(), 2.0, 2.0]).unwrap();
        assert!(defect_partial(&b, 0, 0.0).is_err());
    }

    #[test]
    fn horocyclic_defect_is_a_limit() {
        let o = [2.0, 2.6];
        let r = 0.8;
        let h = h0(&o).unwrap();
        let lim = horocyclic_defect(&o, r).unwrap();
        let near = |e: f64| defect_of(&[h - e, o[0], o[1]], r).unwrap();
        // Defect approaches the limit linearly in ε; Richardson-extrapolate.
        let (a, b) = (near(1e-7), near(2e-7));
        assert!((2.0 * a - b - lim).abs() < 1e-8, "{} vs {lim}", 2.0 * a - b);
        assert!((horocyclic_defect(&[2.6, 2.0], r).unwrap() - lim).abs() < 1e-14);
        assert!(lim < defect_of(&[b0(&o).unwrap(), o[0], o[1]], r).unwrap());
    }

    #[test]
    fn radius_out_of_range_rejected() {
        assert!(defect_of(&[1.0, 1.0, 1.0], 0.6).is_err());
        assert!(defect_of(&[1.0, 1.0, 1.0], 0.5).is_ok());
    }
}
