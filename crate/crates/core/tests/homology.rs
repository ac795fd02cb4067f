mod common;

use common::{brute_force_best_clearance, c, disk_points, geometric_intersection, rng};
use hyperperiod::homology::{
    build_cycles, canonical_basis, congruence, determinant, identity, mat_mul, spanning_path, standard_form,
    symplectic_reduce, transpose, SpanningPath,
};
use hyperperiod::hypercurve::{curve_from_branch_points, BranchPointSet};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn intersection_matches_geometric_count() {
    let mut r = rng(3);
    let mut checked = 0;
    while checked < 40 {
        let g = 1 + checked % 4;
        let pts = disk_points(&mut r, 2 * g + 2);
        let Ok(set) = BranchPointSet::new(pts.clone(), 1e-9) else { continue };
        let Ok(path) = spanning_path(&set, 0.3) else { continue };
        let cycles = build_cycles(&path);
        let geo = geometric_intersection(&pts, &cycles, &path.segments);
        assert_eq!(geo, cycles.intersection, "points {pts:?}");
        checked += 1;
    }
}

#[test]
fn real_line_ladder() {
    for g in 1..6 {
        let pts: Vec<_> = (0..2 * g + 2).map(|k| c(k as f64, 0.0)).collect();
        let path = SpanningPath::from_order((0..2 * g + 2).collect());
        let cycles = build_cycles(&path);
        assert_eq!(geometric_intersection(&pts, &cycles, &path.segments), cycles.intersection);
    }
}

#[test]
fn sixth_roots_path_is_optimal() {
    let pts: Vec<_> = (0..6)
        .map(|k| hyperperiod::Complex::from_polar(1.0, std::f64::consts::PI * k as f64 / 3.0))
        .collect();
    let set = BranchPointSet::new(pts.clone(), 1e-9).unwrap();
    let path = spanning_path(&set, 0.3).unwrap();
    assert_eq!(path.order, vec![0, 1, 2, 3, 4, 5]);
    let best = brute_force_best_clearance(&pts).unwrap();
    assert!((path.clearance_ratio(&pts) - best).abs() < 1e-12);
}

#[test]
fn adversarial_middle_point() {
    let pts = vec![c(0.0, 0.0), c(1.0, 1e-3), c(2.0, 0.0), c(1.0, 0.0)];
    let set = BranchPointSet::new(pts.clone(), 1e-9).unwrap();
    let best = brute_force_best_clearance(&pts);
    match spanning_path(&set, 0.3) {
        Ok(path) => {
            assert!(path.is_simple(&pts) && path.clearance_ratio(&pts) >= 0.3);
        }
        Err(e) => {
            assert_eq!(e.code(), "homology.NoClearPath");
            assert!(best.map_or(true, |b| b < 0.3), "a valid ordering exists: {best:?}");
        }
    }
}

#[test]
fn found_paths_agree_with_exhaustive_search() {
    // whenever the heuristic fails, no ordering of six points is valid; when it
    // succeeds, the path really is valid
    let mut r = rng(17);
    let mut misses = 0;
    for _ in 0..40 {
        let pts = disk_points(&mut r, 6);
        let set = BranchPointSet::new(pts.clone(), 1e-9).unwrap();
        let best = brute_force_best_clearance(&pts).unwrap_or(-1.0);
        match spanning_path(&set, 0.3) {
            Ok(path) => {
                assert!(path.is_simple(&pts));
                assert!(path.clearance_ratio(&pts) >= 0.3);
                assert!(best >= path.clearance_ratio(&pts) - 1e-12);
            }
            Err(_) if best >= 0.3 => misses += 1,
            Err(_) => {}
        }
    }
    assert!(misses <= 2, "heuristic missed {misses} feasible configurations");
}

#[test]
fn basis_is_symplectic_on_random_curves() {
    let mut r = rng(5);
    for g in 1..=5 {
        let mut done = 0;
        while done < 5 {
            let Ok(curve) = curve_from_branch_points(disk_points(&mut r, 2 * g + 2)) else { continue };
            let Ok(basis) = canonical_basis(&curve, 0.3) else { continue };
            let m = basis.generator_form();
            assert_eq!(determinant(&m).abs(), 1);
            assert_eq!(basis.basis_form(), standard_form::<i64>(g));
            done += 1;
        }
    }
}

fn random_unimodular(g: usize, seed: u64) -> Vec<Vec<i64>> {
    // product of random elementary shears and a signed permutation
    let n = 2 * g;
    let mut r = rng(seed);
    let mut s = identity::<i64>(n);
    for _ in 0..3 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let q: i64 = if r.gen::<bool>() { 1 } else { -1 };
        for k in 0..n {
            let v = s[j][k];
            s[i][k] += q * v;
        }
    }
    let i = r.gen_range(0..n);
    let j = (i + 1 + r.gen_range(0..n - 1)) % n;
    s.swap(i, j);
    s[i].iter_mut().for_each(|x| *x = -*x);
    s
}

#[test]
fn scrambled_forms_reduce_exactly() {
    for g in 1..=4 {
        let j = standard_form::<i64>(g);
        for seed in 0..200u64 {
            let s = random_unimodular(g, seed * 10 + g as u64);
            assert_eq!(determinant(&s).abs(), 1);
            let m = congruence(&s, &j);
            let t = symplectic_reduce(&m).unwrap();
            assert_eq!(t.apply(&m), j);
            assert_eq!(determinant(&t.t).abs(), 1);
        }
    }
}

#[test]
fn big_integer_reduction() {
    let g = 3;
    let j: Vec<Vec<BigInt>> = standard_form(g);
    let s64 = random_unimodular(g, 99);
    let s: Vec<Vec<BigInt>> = s64.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    // square the scramble so entries grow
    let s = mat_mul(&s, &s);
    let m = mat_mul(&mat_mul(&s, &j), &transpose(&s));
    let t = symplectic_reduce(&m).unwrap();
    assert_eq!(t.apply(&m), j);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_of_any_scramble(g in 1usize..=4, seed in any::<u64>()) {
        let j = standard_form::<i64>(g);
        let m = congruence(&random_unimodular(g, seed), &j);
        let t = symplectic_reduce(&m).unwrap();
        prop_assert_eq!(t.apply(&m), j);
    }
}
