mod common;

use anglepack::geometry::validate_layout;
use anglepack::oracle::{brute_force_optimal, OracleResult, DEFAULT_BUDGET};
use anglepack::{Instance, Mode};
use common::{random_instance, rng};
use rand::seq::SliceRandom;

fn optimum(inst: &Instance) -> Option<i64> {
    brute_force_optimal(inst, DEFAULT_BUDGET).unwrap().objective()
}

#[test]
fn witnesses_are_valid() {
    let mut r = rng(1);
    for i in 0..40 {
        let mode = if i % 2 == 0 { Mode::Fixed } else { Mode::RotMirror };
        let inst = random_instance(&mut r, 4, 4, mode);
        if let OracleResult::Optimal { objective, layout } = brute_force_optimal(&inst, DEFAULT_BUDGET).unwrap() {
            assert!(validate_layout(&inst, &layout).unwrap().is_valid());
            assert_eq!(objective, i64::from(layout.end_x + layout.end_y));
        }
    }
}

#[test]
fn monotone_in_added_pieces() {
    let mut r = rng(2);
    for i in 0..30 {
        let mode = if i % 2 == 0 { Mode::Fixed } else { Mode::RotMirror };
        let inst = random_instance(&mut r, 4, 3, mode);
        let mut last = Some(0);
        for n in 1..=inst.pieces.len() {
            let here = optimum(&inst.prefix(n));
            match (last, here) {
                (Some(a), Some(b)) => assert!(b >= a),
                (None, h) => assert_eq!(h, None, "adding a piece cannot restore feasibility"),
                (Some(_), None) => {}
            }
            last = here;
        }
    }
}

#[test]
fn invariant_under_piece_permutation() {
    let mut r = rng(3);
    for i in 0..30 {
        let mode = if i % 2 == 0 { Mode::Fixed } else { Mode::RotMirror };
        let inst = random_instance(&mut r, 4, 4, mode);
        let mut sizes: Vec<[i32; 4]> = inst.pieces.iter().map(|p| p.sizes()).collect();
        sizes.shuffle(&mut r);
        let shuffled = Instance::new(&sizes, inst.max_end_x, inst.max_end_y, mode).unwrap();
        assert_eq!(optimum(&inst), optimum(&shuffled));
    }
}

#[test]
fn rotation_never_hurts() {
    let mut r = rng(4);
    for _ in 0..30 {
        let fixed = random_instance(&mut r, 3, 4, Mode::Fixed);
        let mut rot = fixed.clone();
        rot.mode = Mode::RotMirror;
        match (optimum(&fixed), optimum(&rot)) {
            (Some(f), Some(m)) => assert!(m <= f),
            (Some(_), None) => panic!("rotation lost feasibility"),
            _ => {}
        }
    }
}
