//! The certified tree bounds never exceed the defect of an admissible
//! configuration.
//!
//! For every rooted tree with at most two edges built from trivalent and
//! four-valent vertices, frontier lengths are drawn at or above `d₁` and edge
//! lengths from the admissible space. The defect at `R = r₁` must never
//! undercut the best bound computed at the frontier bounds `b_F = d₁`.

mod common;

use common::{d1, r1, small_tree_shapes, soundness_sweep};
use hyptess::admissible::{bound_report, FrontierLengths, RootedTree};

const SAMPLES: usize = 500;

#[test]
fn sampled_admissible_defects_never_undercut_the_bound() {
    let results = soundness_sweep(SAMPLES, 0x5EED);
    assert_eq!(results.len(), 3 * 2 + 6 * 3);
    for o in &results {
        assert_eq!(o.accepted, SAMPLES, "{}: only {} of {} tries admissible", o.name, o.accepted, o.tries);
        assert!(o.min_slack >= -1e-9, "{}: defect undercuts bound by {}", o.name, -o.min_slack);
    }
}

#[test]
fn best_bound_refines_the_basic_bound() {
    for (v, root) in small_tree_shapes() {
        let t = RootedTree::chain(&v, root).unwrap();
        let bf = FrontierLengths::uniform(d1(), t.frontier.len()).unwrap();
        let r = bound_report(&t, &bf, r1()).unwrap();
        assert!(r.best >= r.basic, "{v:?}/{root}");
        let cases = [r.case1, r.case2a, r.case2b, r.case3];
        if let Some(m) = cases.iter().flatten().cloned().reduce(f64::min) {
            assert_eq!(r.best, r.basic.max(m));
        }
    }
}
