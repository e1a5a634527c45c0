mod common;

use common::{check_micro, random_micro, rng, MicroKind};

fn run(kind: MicroKind, seed: u64, count: usize) {
    let mut r = rng(seed);
    let mut with_solutions = 0;
    for i in 0..count {
        let micro = random_micro(&mut r, kind, 50_000);
        let report = check_micro(&micro, &mut r, 400);
        assert_eq!(report.lost_values, 0, "{kind:?} #{i}: propagation removed a supported value in {micro:?}");
        assert_eq!(report.checker_mismatches, 0, "{kind:?} #{i}: fixed-assignment check disagrees in {micro:?}");
        with_solutions += usize::from(report.solutions > 0);
    }
    // the generator should not only produce unsatisfiable instances
    assert!(with_solutions * 4 >= count, "{kind:?}: only {with_solutions}/{count} satisfiable");
}

#[test]
fn diffn_never_removes_supported_values() {
    run(MicroKind::Diffn, 11, 80);
}

#[test]
fn cumulative_never_removes_supported_values() {
    run(MicroKind::Cumulative, 12, 80);
}

#[test]
fn trapezoid_never_removes_supported_values() {
    run(MicroKind::Trapezoid, 13, 80);
}
