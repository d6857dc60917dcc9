//! Points of the length space of a fixed triangulation scheme, and a sampled
//! check that the covering radius is controlled by the injectivity radius.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::constants::{constants, d1_of_r};
use super::octagon::{build_surface, EdgePairing, Model, SIDES};
use crate::cyclic::{self, b0, CyclicClass};
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Relative dead band used to recognize two boundary-centered triangles that
/// share their longest side and so form one inscribed quadrilateral.
pub const EXCEPTIONAL_DEAD_BAND: f64 = 1e-9;

/// Consecutive rejected draws after which a grid radius is abandoned.
const MAX_REJECTIONS: usize = 10_000;

/// Tolerance on the ratio `sinh J / (√2 sinh r)`.
const RATIO_TOL: f64 = 1e-9;

/// Side lengths for a one-vertex triangulation scheme `ι` whose triangles
/// have total area `4π`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PIotaPoint {
    pub pairing: EdgePairing,
    /// Length of side `γ_i`; paired sides carry equal lengths.
    pub lengths: Vec<f64>,
}

impl PIotaPoint {
    /// Validates gluing consistency, cyclicity of every triangle, and the
    /// area condition `Σ D₀ = 4π` (to `1e-9`).
    pub fn new(pairing: EdgePairing, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != SIDES {
            return Err(Error::InvalidSides(format!("expected {SIDES} lengths")));
        }
        for (i, &k) in pairing.involution.iter().enumerate() {
            if (lengths[i] - lengths[k]).abs() > 1e-12 * lengths[i].max(1.0) {
                return Err(Error::LengthMismatch(lengths[i], lengths[k]));
            }
        }
        let p = PIotaPoint { pairing, lengths };
        let area = p.area()?;
        if (area - 4.0 * PI).abs() > 1e-9 {
            return Err(Error::Malformed(format!("triangle areas sum to {area}, not 4π")));
        }
        Ok(p)
    }

    /// Builds the point from one length per side class (classes ordered as
    /// [`EdgePairing::classes`]).
    pub fn from_classes(pairing: EdgePairing, class_lengths: &[f64]) -> Result<Self> {
        let classes = pairing.classes();
        if class_lengths.len() != classes.len() {
            return Err(Error::InvalidSides(format!("expected {} class lengths", classes.len())));
        }
        let mut lengths = vec![0.0; SIDES];
        for (&(i, k), &l) in classes.iter().zip(class_lengths) {
            lengths[i] = l;
            lengths[k] = l;
        }
        PIotaPoint::new(pairing, lengths)
    }

    pub fn triangle(&self, j: usize) -> Result<cyclic::CyclicTuple> {
        cyclic::classify(&self.lengths[3 * j..3 * j + 3])
    }

    /// Total area of the six triangles.
    pub fn area(&self) -> Result<f64> {
        (0..6).map(|j| cyclic::defect_of(&self.lengths[3 * j..3 * j + 3], 0.0)).sum()
    }

    /// Half the shortest side: the injectivity radius at the vertex when the
    /// triangulation is Delaunay.
    pub fn injectivity_radius(&self) -> f64 {
        self.lengths.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0
    }
}

/// Covering radius `J_ι` at the vertex: the largest circumradius of the
/// Delaunay faces. Two boundary-centered triangles glued along their common
/// longest side form a single inscribed quadrilateral, whose radius is used.
pub fn covering_radius(p: &PIotaPoint) -> Result<f64> {
    let tuples: Vec<cyclic::CyclicTuple> = (0..6).map(|j| p.triangle(j)).collect::<Result<_>>()?;
    let mut best: f64 = 0.0;
    let mut merged = [false; 6];
    for (j, t) in tuples.iter().enumerate() {
        if merged[j] {
            continue;
        }
        let near_bc = |t: &cyclic::CyclicTuple| {
            let k = t.longest();
            let others: Vec<f64> = (0..3).filter(|&i| i != k).map(|i| t.sides[i]).collect();
            b0(&others).map(|b| (t.sides[k] - b).abs() <= EXCEPTIONAL_DEAD_BAND * b).unwrap_or(false)
        };
        if near_bc(t) {
            let side = 3 * j + t.longest();
            let other = p.pairing.involution[side];
            let (oj, ok) = (other / 3, other % 3);
            if oj != j && tuples[oj].longest() == ok && near_bc(&tuples[oj]) {
                let quad = [
                    t.sides[(t.longest() + 1) % 3],
                    t.sides[(t.longest() + 2) % 3],
                    tuples[oj].sides[(ok + 1) % 3],
                    tuples[oj].sides[(ok + 2) % 3],
                ];
                let q = cyclic::classify(&quad)?;
                merged[j] = true;
                merged[oj] = true;
                best = best.max(q.radius);
                continue;
            }
        }
        if t.class == CyclicClass::NotCyclic {
            return Err(Error::NotCyclic(t.sides.clone()));
        }
        best = best.max(t.radius);
    }
    Ok(best)
}

/// Result of the sampled check at one injectivity radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridReport {
    pub r: f64,
    pub accepted: usize,
    pub attempts: usize,
    /// Largest sampled covering radius.
    pub max_sampled_j: f64,
    /// Largest sampled `sinh J / (√2 sinh r)`.
    pub max_ratio: f64,
    /// Covering radius at the extremal point, from the closed form.
    pub extremal_j: f64,
    /// Covering radius at the extremal point, computed from its triangles.
    pub extremal_j_numeric: f64,
    pub extremal_ratio: f64,
}

/// Result of the sampled check over a grid of injectivity radii.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InjToCovReport {
    pub seed: u64,
    pub grid: Vec<GridReport>,
    pub max_ratio: f64,
    pub passed: bool,
}

/// Closed-form covering radius at the extremal point
/// `(d₁(r), d₁(r), d_r, …, d_r)`.
fn extremal_j(r: f64, d1: f64) -> f64 {
    let s = r.sinh();
    let h = (d1 / 2.0).sinh();
    (2.0 * s * s / (4.0 * s * s - h * h).sqrt()).asinh()
}

fn all_c_or_bc(lengths: &[f64], tris: impl Iterator<Item = usize>) -> bool {
    tris.into_iter().all(|j| {
        matches!(
            cyclic::classify(&lengths[3 * j..3 * j + 3]).map(|t| t.class),
            Ok(CyclicClass::Centered | CyclicClass::BoundaryCentered)
        )
    })
}

/// Draws one point of the length space with shortest side `d_r`, or `None`
/// when the draw is rejected.
fn sample_point(
    pairing: &EdgePairing,
    classes: &[(usize, usize)],
    r: f64,
    d1: f64,
    rng: &mut ChaCha8Rng,
) -> Option<PIotaPoint> {
    let dr = 2.0 * r;
    let n = classes.len();
    let c0 = rng.random_range(0..n);
    let cf = (c0 + rng.random_range(1..n)) % n;
    let scale: f64 = rng.random::<f64>();
    let mut lengths = vec![dr; SIDES];
    for (c, &(i, k)) in classes.iter().enumerate() {
        if c != c0 && c != cf {
            let l = dr + scale * rng.random::<f64>() * (d1 - dr);
            lengths[i] = l;
            lengths[k] = l;
        }
    }
    let (fi, fk) = classes[cf];
    let touching = |j: usize| j == fi / 3 || j == fk / 3;
    if !all_c_or_bc(&lengths, (0..6).filter(|&j| !touching(j))) {
        return None;
    }
    // Upper end: the free side may grow until a triangle holding it once
    // becomes boundary-centered.
    let mut hi = f64::INFINITY;
    for side in [fi, fk] {
        let j = side / 3;
        let others: Vec<usize> = (3 * j..3 * j + 3).filter(|&s| s != side).collect();
        if others.iter().any(|&s| s == fi || s == fk) {
            continue;
        }
        hi = hi.min(b0(&[lengths[others[0]], lengths[others[1]]]).ok()?);
    }
    if !hi.is_finite() {
        hi = 2.0 * d1;
    }
    let area = |x: f64| -> f64 {
        let mut l = lengths.clone();
        l[fi] = x;
        l[fk] = x;
        (0..6).map(|j| cyclic::defect_of(&l[3 * j..3 * j + 3], 0.0).unwrap_or(f64::NAN)).sum::<f64>() - 4.0 * PI
    };
    let (flo, fhi) = (area(dr), area(hi));
    let x = if flo.abs() < 1e-12 {
        dr
    } else if flo > 0.0 || fhi < 0.0 || !fhi.is_finite() {
        return None;
    } else {
        bisect(area, dr, hi).ok()?
    };
    lengths[fi] = x;
    lengths[fk] = x;
    if !all_c_or_bc(&lengths, 0..6) {
        return None;
    }
    PIotaPoint::new(pairing.clone(), lengths).ok()
}

/// Checks `sinh J_ι ≤ √2 sinh r` on random points of the length space of
/// the canonical one-vertex scheme, over `grid` injectivity radii spread
/// evenly on `[r_β, r_α]`, with `samples` accepted points per radius. Each
/// grid radius uses its own generator seeded from `seed`, and radii are
/// processed in parallel.
pub fn verify_inj_to_cov(grid: usize, samples: usize, seed: u64) -> Result<InjToCovReport> {
    if grid < 2 || samples == 0 {
        return Err(Error::OutOfRange("need at least 2 grid radii and 1 sample".into()));
    }
    let c = constants();
    let pairing = build_surface(Model::FAlpha)?.pairing;
    let classes = pairing.classes();
    // A class whose two sides lie in different triangles.
    let split = classes
        .iter()
        .position(|&(i, k)| i / 3 != k / 3)
        .ok_or_else(|| Error::Malformed("no class joins two triangles".into()))?;
    let rows: Vec<Result<GridReport>> = (0..grid)
        .into_par_iter()
        .map(|g| {
            let r = c.r_beta + (c.r_alpha - c.r_beta) * g as f64 / (grid - 1) as f64;
            let d1 = d1_of_r(r)?;
            let dr = 2.0 * r;
            let bound = 2f64.sqrt() * r.sinh();
            let mut ext = vec![dr; classes.len()];
            ext[split] = d1;
            let ext_point = PIotaPoint::from_classes(pairing.clone(), &ext)?;
            let extremal_j_numeric = covering_radius(&ext_point)?;
            let ej = extremal_j(r, d1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (g as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let (mut accepted, mut attempts) = (0, 0);
            let (mut max_j, mut max_ratio) = (0.0f64, 0.0f64);
            let mut rejected_in_row = 0;
            while accepted < samples {
                attempts += 1;
                if let Some(p) = sample_point(&pairing, &classes, r, d1, &mut rng) {
                    let j = covering_radius(&p)?;
                    accepted += 1;
                    rejected_in_row = 0;
                    max_j = max_j.max(j);
                    max_ratio = max_ratio.max(j.sinh() / bound);
                } else {
                    rejected_in_row += 1;
                    if rejected_in_row >= MAX_REJECTIONS {
                        return Err(Error::Sampling(format!(
                            "{MAX_REJECTIONS} consecutive rejections at r = {r}"
                        )));
                    }
                }
            }
            Ok(GridReport {
                r,
                accepted,
                attempts,
                max_sampled_j: max_j,
                max_ratio,
                extremal_j: ej,
                extremal_j_numeric,
                extremal_ratio: ej.sinh() / bound,
            })
        })
        .collect();
    let grid_rows: Vec<GridReport> = rows.into_iter().collect::<Result<_>>()?;
    let max_ratio = grid_rows.iter().map(|g| g.max_ratio.max(g.extremal_ratio)).fold(0.0, f64::max);
    let passed = grid_rows.iter().all(|g| {
        g.accepted == samples
            && g.max_ratio <= 1.0 + RATIO_TOL
            && g.extremal_ratio <= 1.0 + RATIO_TOL
            && g.max_sampled_j <= g.extremal_j + RATIO_TOL
            && (g.extremal_j - g.extremal_j_numeric).abs() <= 1e-9
    });
    Ok(InjToCovReport { seed, grid: grid_rows, max_ratio, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_alpha_point_has_equal_radii() {
        let c = constants();
        let pairing = build_surface(Model::FAlpha).unwrap().pairing;
        let p = PIotaPoint::from_classes(pairing, &[c.d_alpha; 9]).unwrap();
        assert!((p.injectivity_radius() - c.r_alpha).abs() < 1e-12);
        let j = covering_radius(&p).unwrap();
        let expect = ((c.d_alpha / 2.0).sinh() / (PI / 3.0).sin()).asinh();
        assert!((j - expect).abs() < 1e-10);
    }

    #[test]
    fn area_condition_is_enforced() {
        let c = constants();
        let pairing = build_surface(Model::FAlpha).unwrap().pairing;
        assert!(PIotaPoint::from_classes(pairing, &[c.d_alpha + 0.01; 9]).is_err());
    }

    #[test]
    fn extremal_closed_form_matches_triangle_radius() {
        let c = constants();
        let r = 0.5 * (c.r_alpha + c.r_beta);
        let d1 = d1_of_r(r).unwrap();
        let t = cyclic::classify(&[d1, 2.0 * r, 2.0 * r]).unwrap();
        assert!((extremal_j(r, d1) - t.radius).abs() < 1e-10);
    }

    #[test]
    fn exceptional_point_merges_into_square() {
        let c = constants();
        let s = build_surface(Model::FBeta).unwrap();
        let p = PIotaPoint::new(s.pairing.clone(), s.lengths.clone()).unwrap();
        let j = covering_radius(&p).unwrap();
        let square = cyclic::classify(&[c.d_beta; 4]).unwrap().radius;
        assert!((j - square).abs() < 1e-10);
    }

    #[test]
    fn small_sweep_passes_and_is_reproducible() {
        let a = verify_inj_to_cov(3, 20, 7).unwrap();
        assert!(a.passed, "{a:?}");
        let b = verify_inj_to_cov(3, 20, 7).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
    }
}
