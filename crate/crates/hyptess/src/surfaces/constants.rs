//! Named constants of the extremal surfaces and the one-parameter solves
//! `d₁(t)` and `d₁(r)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cyclic::{b0, defect_of};
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Rational bounds bracketing `cosh d_β` and `cosh r_β`, used by the bound
/// tables: `cosh r₁ < cosh r_β < cosh r₂` and `cosh d₁ < cosh d_β < cosh d₂`.
pub const TABLE_COSH_R1: f64 = 2.8298;
pub const TABLE_COSH_R2: f64 = 2.8299;
pub const TABLE_COSH_D1: f64 = 15.0166;
pub const TABLE_COSH_D2: f64 = 15.0167;

/// Side lengths and radii of the two extremal surfaces.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Constants {
    /// Side of the equilateral triangle with angle `π/9`.
    pub d_alpha: f64,
    /// `d_α / 2`, with `cosh r_α = 1/(2 sin(π/18))`.
    pub r_alpha: f64,
    /// Common side of the four triangles and square of area `4π`.
    pub d_beta: f64,
    /// `d_β / 2`.
    pub r_beta: f64,
    /// Diagonal of the square, `b₀(d_β, d_β)`.
    pub b_beta: f64,
    pub cosh_d_alpha: f64,
    pub cosh_r_alpha: f64,
    /// Real root of `x³ − 14x² − 15x − 4`.
    pub cosh_d_beta: f64,
    pub cosh_r_beta: f64,
}

/// Computes all named constants.
pub fn constants() -> Constants {
    let cosh_d_alpha = 1.0 / (1.0 - (PI / 9.0).cos()) - 1.0;
    let cosh_r_alpha = 1.0 / (2.0 * (PI / 18.0).sin());
    let cosh_d_beta = bisect(|x| ((x - 14.0) * x - 15.0) * x - 4.0, 14.0, 16.0)
        .expect("the cubic changes sign on [14, 16]");
    let d_alpha = cosh_d_alpha.acosh();
    let d_beta = cosh_d_beta.acosh();
    let r_beta = d_beta / 2.0;
    Constants {
        d_alpha,
        r_alpha: cosh_r_alpha.acosh(),
        d_beta,
        r_beta,
        b_beta: b0(&[d_beta, d_beta]).expect("positive inputs"),
        cosh_d_alpha,
        cosh_r_alpha,
        cosh_d_beta,
        cosh_r_beta: r_beta.cosh(),
    }
}

/// Length below which every Delaunay edge is centered when all sites are at
/// least `2r` apart: `B₀(r) = acosh(2 cosh(2r) − 1)`.
pub fn b0_cap(r: f64) -> f64 {
    (2.0 * (2.0 * r).cosh() - 1.0).acosh()
}

fn d03(d: f64) -> f64 {
    defect_of(&[d, d, d], 0.0).expect("equilateral triangles are cyclic")
}

/// Solves `f(t, d) = 4π` for the side `d = d₁(t)` of the deformed surface
/// `F_t`, where, with `d_t = d_β + t` and `b_t = b₀(d_t, d_t)`,
/// `f(t, d) = 3·D₀(d_t,d_t,d_t) + D₀(d,d_t,d_t) + D₀(b_t,d_t,d) + D₀(b_t,d_t,d_t)`.
pub fn solve_d1_of_t(t: f64) -> Result<f64> {
    if !(t.abs() < 0.05) {
        return Err(Error::OutOfRange(format!("|t| = {} must be below 0.05", t.abs())));
    }
    let c = constants();
    let dt = c.d_beta + t;
    let bt = b0(&[dt, dt])?;
    let fixed = 3.0 * d03(dt) + defect_of(&[bt, dt, dt], 0.0)?;
    let f = |d: f64| -> f64 {
        match (defect_of(&[d, dt, dt], 0.0), defect_of(&[bt, dt, d], 0.0)) {
            (Ok(a), Ok(b)) => fixed + a + b - 4.0 * PI,
            _ => f64::NAN,
        }
    };
    // `f` increases through the root but turns over further out, where the
    // triangles become non-centered; walk outward from `d_t` to bracket it.
    let f0 = f(dt);
    if f0 == 0.0 {
        return Ok(dt);
    }
    let dir = if f0 < 0.0 { 1.0 } else { -1.0 };
    let step = 0.05;
    let mut near = dt;
    for _ in 0..40 {
        let far = near + dir * step;
        let ff = f(far);
        if !ff.is_finite() {
            break;
        }
        if ff.signum() != f0.signum() {
            return if dir > 0.0 { bisect(f, near, far) } else { bisect(f, far, near) };
        }
        near = far;
    }
    Err(Error::Bracket(format!("no solution d₁(t) near d_t for t = {t}")))
}

/// Solves `4·D₀(d_r,d_r,d_r) + 2·D₀(d, d_r, d_r) = 4π` for `d = d₁(r)` on
/// `[d_r, b₀(d_r, d_r)]`, where `d_r = 2r` and `r ∈ [r_β, r_α]`.
pub fn d1_of_r(r: f64) -> Result<f64> {
    let c = constants();
    let slack = 1e-12;
    if !(r >= c.r_beta - slack && r <= c.r_alpha + slack) {
        return Err(Error::OutOfRange(format!("r = {r} outside [r_β, r_α]")));
    }
    let dr = 2.0 * r;
    let hi = b0(&[dr, dr])?;
    let fixed = 4.0 * d03(dr);
    let f = |d: f64| fixed + 2.0 * defect_of(&[d, dr, dr], 0.0).unwrap_or(f64::NAN) - 4.0 * PI;
    // At the range ends the root sits on the bracket end up to rounding.
    let (flo, fhi) = (f(dr), f(hi));
    if flo >= 0.0 || flo.abs() < 1e-12 {
        return Ok(dr);
    }
    if fhi <= 0.0 || fhi.abs() < 1e-12 {
        return Ok(hi);
    }
    bisect(f, dr, hi)
}
