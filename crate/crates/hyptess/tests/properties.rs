//! Randomized invariants of the cyclic-polygon, tessellation and geometry
//! layers, each checked against an independent computation.

use std::f64::consts::PI;

use hyptess::cyclic::{self, b0, classify, defect, defect_partial, h0, radius, CyclicClass};
use hyptess::hypgeo::{circumcenter, dist, polygon_area, triangle_angle, HIsometry, HPoint};
use hyptess::tessellation::{delaunay, half_min_distance, voronoi};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn sides(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2f64..4.0, min..=max)
}

fn point(max_r: f64) -> impl Strategy<Value = HPoint> {
    (0.0..max_r, 0.0..2.0 * PI).prop_map(|(r, a)| HPoint::from_polar(r, a))
}

fn with_longest(others: &[f64], longest: f64) -> Vec<f64> {
    let mut v = vec![longest];
    v.extend_from_slice(others);
    v
}

proptest! {
    #![proptest_config(config(300, 0xB0_0B))]

    #[test]
    fn b0_and_h0_bracket_the_classes(others in sides(2, 5)) {
        let b = b0(&others).unwrap();
        let h = h0(&others).unwrap();
        prop_assert!(b < h);
        let eps = 1e-6;
        let class = |x: f64| classify(&with_longest(&others, x)).unwrap().class;
        prop_assert_eq!(class(b - eps), CyclicClass::Centered);
        prop_assert_eq!(class(b), CyclicClass::BoundaryCentered);
        if b + eps < h - eps {
            prop_assert_eq!(class(b + eps), CyclicClass::NonCentered);
        }
        prop_assert_eq!(class(h - eps), CyclicClass::NonCentered);
        prop_assert_eq!(class(h + eps), CyclicClass::NotCyclic);
    }

    #[test]
    fn boundary_centered_radius_is_half_the_longest_side(others in sides(2, 5)) {
        let b = b0(&others).unwrap();
        let t = classify(&with_longest(&others, b)).unwrap();
        prop_assert_eq!(t.class, CyclicClass::BoundaryCentered);
        prop_assert!((radius(&t).unwrap() - b / 2.0).abs() < 1e-10);
    }

    #[test]
    fn centered_radius_closes_the_angle_sum(s in sides(3, 7)) {
        let t = classify(&s).unwrap();
        prop_assume!(t.class == CyclicClass::Centered);
        let sum: f64 = s.iter().map(|d| 2.0 * ((d / 2.0).sinh() / t.radius.sinh()).asin()).sum();
        prop_assert!((sum - 2.0 * PI).abs() < 1e-9, "{}", sum);
    }

    #[test]
    fn triangle_defect_at_zero_is_its_area(a in 0.2f64..4.0, b in 0.2f64..4.0, c in 0.2f64..4.0) {
        prop_assume!(a < b + c && b < a + c && c < a + b);
        // Hyperbolic triangles need not be inscribed in a circle.
        prop_assume!(classify(&[a, b, c]).unwrap().class != CyclicClass::NotCyclic);
        let angles = [
            triangle_angle(a, b, c).unwrap(),
            triangle_angle(b, c, a).unwrap(),
            triangle_angle(c, a, b).unwrap(),
        ];
        let area = polygon_area(&angles).unwrap();
        prop_assert!((cyclic::defect_of(&[a, b, c], 0.0).unwrap() - area).abs() < 1e-9);
    }

    #[test]
    fn triangle_angle_is_symmetric_in_the_adjacent_sides(a in 0.2f64..4.0, b in 0.2f64..4.0, c in 0.2f64..4.0) {
        prop_assume!(a < b + c && b < a + c && c < a + b);
        prop_assert_eq!(triangle_angle(a, b, c).unwrap(), triangle_angle(a, c, b).unwrap());
    }
}

proptest! {
    #![proptest_config(config(100, 0xD1FF))]

    #[test]
    fn defect_derivative_matches_finite_differences(
        s in sides(3, 6),
        i in 0usize..6,
        rf in 0.0f64..0.95,
    ) {
        let t = classify(&s).unwrap();
        prop_assume!(matches!(t.class, CyclicClass::Centered | CyclicClass::NonCentered));
        let i = i % s.len();
        let dmin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        let r = rf * dmin / 2.0;
        let h = 1e-6;
        let at = |x: f64| {
            let mut v = s.clone();
            v[i] = x;
            classify(&v).ok().filter(|u| u.class == t.class).map(|u| defect(&u, r))
        };
        // Only compare where the step stays inside the current class and
        // inside the disk constraint.
        prop_assume!(s[i] - h > 2.0 * r);
        let (Some(Ok(up)), Some(Ok(dn))) = (at(s[i] + h), at(s[i] - h)) else {
            return Err(TestCaseError::reject("step leaves the class"));
        };
        let fd = (up - dn) / (2.0 * h);
        let exact = defect_partial(&t, i, r).unwrap();
        let scale = exact.abs().max(1e-3);
        prop_assert!((fd - exact).abs() / scale < 1e-5, "fd {} exact {}", fd, exact);
    }
}

proptest! {
    #![proptest_config(config(1000, 0x0303))]

    #[test]
    fn defect_is_monotone_in_every_side(
        base in 0.3f64..3.0,
        ratios in prop::collection::vec(1.0f64..1.35, 3..=6),
        grow in prop::collection::vec(0.0f64..0.35, 6),
        rf in 0.0f64..1.0,
    ) {
        // Near-regular tuples, grown side by side, stay mostly centered.
        let s: Vec<f64> = ratios.iter().map(|q| base * q).collect();
        let t = classify(&s).unwrap();
        let bigger: Vec<f64> = s.iter().zip(&grow).map(|(d, g)| d * (1.0 + g)).collect();
        let t2 = classify(&bigger).unwrap();
        let ok = |c: CyclicClass| matches!(c, CyclicClass::Centered | CyclicClass::BoundaryCentered);
        prop_assume!(ok(t.class) && ok(t2.class));
        let r = rf * s.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
        let (a, b) = (defect(&t, r).unwrap(), defect(&t2, r).unwrap());
        prop_assert!(b >= a - 1e-12, "{} < {}", b, a);
    }
}

proptest! {
    #![proptest_config(config(40, 0x7E55))]

    #[test]
    fn voronoi_cells_agree_with_nearest_sites(
        sites in prop::collection::vec(point(2.5), 8..30),
        probes in prop::collection::vec(point(1.2), 50),
    ) {
        prop_assume!(half_min_distance(&sites) > 1e-3);
        let v = voronoi(&sites, 6.0, &HPoint::origin()).unwrap();
        for x in &probes {
            // Brute-force oracle via the distance function itself.
            let d: Vec<f64> = sites.iter().map(|s| dist(s, x)).collect();
            let best = d.iter().cloned().fold(f64::INFINITY, f64::min);
            let k = d.iter().position(|&e| e == best).unwrap();
            if v.cells[k].neighbors.iter().all(|n| n.is_some()) {
                prop_assert!(v.cell_contains(k, x));
            }
            for (j, &dj) in d.iter().enumerate() {
                if j != k && dj > best + 1e-9 {
                    prop_assert!(!v.cell_contains(j, x));
                }
            }
        }
        // Vertices are equidistant from their sites and have empty disks.
        for vert in v.vertices.iter().filter(|u| u.interior) {
            for &s in &vert.sites {
                prop_assert!((dist(&vert.position, &sites[s]) - vert.radius).abs() < 1e-8);
            }
            for (j, s) in sites.iter().enumerate() {
                if !vert.sites.contains(&j) {
                    prop_assert!(dist(&vert.position, s) > vert.radius - 1e-9);
                }
            }
        }
        // Duality counts and short edges being centered.
        let d = delaunay(&v).unwrap();
        prop_assert_eq!(d.edges.len(), v.edges.iter().filter(|e| e.interior).count());
        prop_assert_eq!(d.faces.len(), v.vertices.iter().filter(|u| u.interior).count());
        let r = half_min_distance(&sites);
        let short = (2.0 * (2.0 * r).cosh() - 1.0).acosh();
        for e in d.edges.iter().filter(|e| e.length < short) {
            prop_assert!(e.centered);
        }
    }

    #[test]
    fn circumcenters_are_equidistant(p in point(3.0), q in point(3.0), r in point(3.0)) {
        prop_assume!(dist(&p, &q) > 1e-3 && dist(&q, &r) > 1e-3 && dist(&p, &r) > 1e-3);
        if let Some(c) = circumcenter(&p, &q, &r).unwrap() {
            prop_assert!((dist(&c, &p) - dist(&c, &q)).abs() < 1e-8);
            prop_assert!((dist(&c, &p) - dist(&c, &r)).abs() < 1e-8);
        }
    }

    #[test]
    fn products_of_isometries_stay_isometries(
        gens in prop::collection::vec((point(2.0), 0.0..2.0 * PI), 1..=8),
        p in point(2.0),
        q in point(2.0),
    ) {
        let g = gens.iter().fold(HIsometry::identity(), |acc, (t, a)| {
            acc.compose(&HIsometry::translation(t)).compose(&HIsometry::rotation(*a))
        });
        prop_assert!(g.form_defect() < 1e-7);
        prop_assert!((dist(&g.apply(&p), &g.apply(&q)) - dist(&p, &q)).abs() < 1e-7);
        prop_assert!(-hyptess::hypgeo::mink(&p.coords(), &q.coords()) >= 1.0 - 1e-12);
    }
}
