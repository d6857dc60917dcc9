//! Seeded checkers shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use hyptess::admissible::{
    ad_membership, admissible_interval, bound_report, frontier_b, frontier_h, tree_defect, FrontierLengths,
    RootedTree,
};
use hyptess::cyclic::{b0, classify, defect, defect_partial, h0, radius, CyclicClass};
use hyptess::hypgeo::{angle_at, dist, orientation, polygon_area, HPoint};
use hyptess::surfaces::SurfaceTessellation;
use hyptess::tessellation::{delaunay, half_min_distance, voronoi, DualCell};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn d1() -> f64 {
    15.0166f64.acosh()
}

pub fn r1() -> f64 {
    2.8298f64.acosh()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sides(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Vec<f64> {
    let n = rng.random_range(lo..=hi);
    (0..n).map(|_| rng.random_range(0.2..4.0)).collect()
}

fn with_longest(others: &[f64], longest: f64) -> Vec<f64> {
    let mut v = vec![longest];
    v.extend_from_slice(others);
    v
}

/// Area of the cell's boundary polygon minus the radius-`r` sectors at its
/// corners, from the polygon's own corner angles.
pub fn area_minus_sectors(cell: &DualCell, t: &SurfaceTessellation, r: f64) -> f64 {
    let sites = &t.delaunay.voronoi.sites;
    let cycle = cell.boundary_cycle(&t.delaunay).unwrap();
    let n = cycle.len();
    let angles: Vec<f64> = (0..n)
        .map(|k| {
            let (p, v, q) = (&sites[cycle[(k + n - 1) % n]], &sites[cycle[k]], &sites[cycle[(k + 1) % n]]);
            let a = angle_at(v, p, q);
            if orientation(p, v, q) > 0.0 {
                a
            } else {
                2.0 * PI - a
            }
        })
        .collect();
    polygon_area(&angles).unwrap() - angles.iter().sum::<f64>() * (r.cosh() - 1.0)
}

/// The unique non-centered cell among a surface's cells.
pub fn noncentered_cell(t: &SurfaceTessellation) -> Option<&DualCell> {
    let cells: Vec<&DualCell> =
        t.cells.iter().map(|&c| &t.dual.cells[c]).filter(|c| c.tree.is_some()).collect();
    (cells.len() == 1).then(|| cells[0])
}

/// `b₀ ± ε` and `h₀ ± ε` land in the expected classes, and the
/// boundary-centered radius is half the longest side.
pub fn bracketing(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let eps = 1e-6;
    for _ in 0..cases {
        let others = sides(&mut rng, 2, 5);
        let (b, h) = (b0(&others).unwrap(), h0(&others).unwrap());
        let class = |x: f64| classify(&with_longest(&others, x)).unwrap().class;
        let mut expect = vec![
            (b - eps, CyclicClass::Centered),
            (b, CyclicClass::BoundaryCentered),
            (h - eps, CyclicClass::NonCentered),
            (h + eps, CyclicClass::NotCyclic),
        ];
        if b + eps < h - eps {
            expect.push((b + eps, CyclicClass::NonCentered));
        }
        for (x, c) in expect {
            if class(x) != c {
                return Err(format!("{others:?}: length {x} classified {:?}, expected {c:?}", class(x)));
            }
        }
        let t = classify(&with_longest(&others, b)).unwrap();
        let j = radius(&t).unwrap();
        if (j - b / 2.0).abs() >= 1e-10 {
            return Err(format!("{others:?}: boundary-centered radius {j} vs {}", b / 2.0));
        }
    }
    Ok(())
}

/// Central finite differences of the defect agree with the closed-form
/// partial derivative to relative error `1e−5` on `cases` tuples.
pub fn derivative_vs_finite_differences(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let h = 1e-6;
    let mut done = 0;
    while done < cases {
        let s = sides(&mut rng, 3, 6);
        let t = classify(&s).unwrap();
        if !matches!(t.class, CyclicClass::Centered | CyclicClass::NonCentered) {
            continue;
        }
        let i = rng.random_range(0..s.len());
        let dmin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        let r = rng.random_range(0.0..0.95) * dmin / 2.0;
        if s[i] - h <= 2.0 * r {
            continue;
        }
        let at = |x: f64| {
            let mut v = s.clone();
            v[i] = x;
            classify(&v).ok().filter(|u| u.class == t.class).and_then(|u| defect(&u, r).ok())
        };
        let (Some(up), Some(dn)) = (at(s[i] + h), at(s[i] - h)) else { continue };
        let fd = (up - dn) / (2.0 * h);
        let exact = defect_partial(&t, i, r).unwrap();
        if (fd - exact).abs() / exact.abs().max(1e-3) >= 1e-5 {
            return Err(format!("{s:?}, side {i}, r {r}: finite difference {fd} vs {exact}"));
        }
        done += 1;
    }
    Ok(())
}

/// Growing sides of a centered (or boundary-centered) tuple into another
/// such tuple never lowers the defect, on `cases` pairs.
pub fn monotonicity(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let ok = |c: CyclicClass| matches!(c, CyclicClass::Centered | CyclicClass::BoundaryCentered);
    let mut done = 0;
    while done < cases {
        let n = rng.random_range(3..=6);
        let base = rng.random_range(0.3..3.0);
        let s: Vec<f64> = (0..n).map(|_| base * rng.random_range(1.0..1.35)).collect();
        let bigger: Vec<f64> = s.iter().map(|d| d * (1.0 + rng.random_range(0.0..0.35))).collect();
        let (t, t2) = (classify(&s).unwrap(), classify(&bigger).unwrap());
        if !(ok(t.class) && ok(t2.class)) {
            continue;
        }
        let r = rng.random::<f64>() * s.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
        let (a, b) = (defect(&t, r).unwrap(), defect(&t2, r).unwrap());
        if b < a - 1e-12 {
            return Err(format!("{s:?} → {bigger:?} at r {r}: {a} → {b}"));
        }
        done += 1;
    }
    Ok(())
}

/// On random site sets, each probe lies in the Voronoi cell of its nearest
/// site and in no cell of a strictly farther one.
pub fn voronoi_oracle(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let point = |rng: &mut ChaCha8Rng, max_r: f64| HPoint::from_polar(rng.random_range(0.0..max_r), rng.random_range(0.0..2.0 * PI));
    for inst in 0..instances {
        let n = rng.random_range(8..30);
        let sites: Vec<HPoint> = (0..n).map(|_| point(&mut rng, 2.5)).collect();
        if half_min_distance(&sites) <= 1e-3 {
            continue;
        }
        let v = voronoi(&sites, 6.0, &HPoint::origin()).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let x = point(&mut rng, 1.2);
            let d: Vec<f64> = sites.iter().map(|s| dist(s, &x)).collect();
            let best = d.iter().cloned().fold(f64::INFINITY, f64::min);
            let k = d.iter().position(|&e| e == best).unwrap();
            if v.cells[k].neighbors.iter().all(|nb| nb.is_some()) && !v.cell_contains(k, &x) {
                return Err(format!("instance {inst}: probe missing from its nearest site's cell"));
            }
            if d.iter().enumerate().any(|(j, &dj)| j != k && dj > best + 1e-9 && v.cell_contains(j, &x)) {
                return Err(format!("instance {inst}: probe inside a farther site's cell"));
            }
        }
        let del = delaunay(&v).map_err(|e| e.to_string())?;
        if del.faces.len() != v.vertices.iter().filter(|u| u.interior).count() {
            return Err(format!("instance {inst}: face count differs from interior vertex count"));
        }
    }
    Ok(())
}

/// Every chain shape with at most two edges and vertex valences 3 or 4, up
/// to reversal, with every choice of root.
pub fn small_tree_shapes() -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for (a, b) in [(3, 3), (3, 4), (4, 4)] {
        for root in 0..2 {
            out.push((vec![a, b], root));
        }
    }
    for a in [3, 4] {
        for b in [3, 4] {
            for c in [3, 4] {
                if a <= c {
                    for root in 0..3 {
                        out.push((vec![a, b, c], root));
                    }
                }
            }
        }
    }
    out
}

pub struct Outcome {
    pub name: String,
    pub accepted: usize,
    pub tries: usize,
    /// Smallest `tree_defect − best bound` over the accepted samples.
    pub min_slack: f64,
}

const MAX_TRIES: usize = 500_000;

/// Draws `samples` admissible configurations of one tree and records how
/// far their defects stay above the best bound at `b_F = d₁`.
///
/// Half the draws keep all frontier lengths close to their lower bound,
/// where the bound is tightest. The other half spreads them independently:
/// trees rooted away from their centre are only admissible when the root's
/// frontier edges are clearly longer. Edge lengths come from the exact
/// interval for one edge, and by rejection in the `b`/`h` box for two.
pub fn soundness_probe(valences: &[usize], root: usize, samples: usize, seed: u64) -> Outcome {
    let t = RootedTree::chain(valences, root).unwrap();
    let nf = t.frontier.len();
    let bf = FrontierLengths::uniform(d1(), nf).unwrap();
    let best = bound_report(&t, &bf, r1()).unwrap().best;
    let mut rng = rng(seed);
    let mut out =
        Outcome { name: format!("{valences:?} rooted at {root}"), accepted: 0, tries: 0, min_slack: f64::INFINITY };
    while out.accepted < samples && out.tries < MAX_TRIES {
        out.tries += 1;
        let df: Vec<f64> = if rng.random::<bool>() {
            let spread = 2.0 * rng.random::<f64>();
            (0..nf).map(|_| d1() + spread * rng.random::<f64>().powi(2)).collect()
        } else {
            (0..nf).map(|_| d1() + 5.0 * rng.random::<f64>() * rng.random::<f64>().powi(2)).collect()
        };
        let df = FrontierLengths::new(df).unwrap();
        let de: Vec<f64> = if t.edges.len() == 1 {
            let iv = admissible_interval(&t, &df).unwrap();
            if iv.empty {
                continue;
            }
            vec![iv.lower + (iv.upper - iv.lower) * rng.random::<f64>().powi(3)]
        } else {
            let b = frontier_b(&t, &df).unwrap();
            let h = frontier_h(&t, &df).unwrap();
            b.iter().zip(&h).map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>().powi(3)).collect()
        };
        if !ad_membership(&t, &de, &df) {
            continue;
        }
        out.accepted += 1;
        out.min_slack = out.min_slack.min(tree_defect(&t, &de, &df, r1()).unwrap() - best);
    }
    out
}

/// [`soundness_probe`] over every small tree shape, in parallel.
pub fn soundness_sweep(samples: usize, seed: u64) -> Vec<Outcome> {
    small_tree_shapes()
        .par_iter()
        .enumerate()
        .map(|(i, (v, root))| soundness_probe(v, *root, samples, seed.wrapping_add(i as u64)))
        .collect()
}
