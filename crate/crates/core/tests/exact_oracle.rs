mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subcut::exact::{branch_and_bound, BnbStatus};
use subcut::milp::{enumerate_feasible, generate_max_indep_set, generate_random_mixed, generate_set_cover};
use subcut::simplex;

#[test]
fn matches_enumeration_on_pure_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let m = rng.random_range(1..=4);
        let k = rng.random_range(1..=6);
        let inst = common::tiny_pure(&mut rng, m, k, 3.0);
        let brute = enumerate_feasible(&inst, 3).unwrap().best_objective(&inst).unwrap();
        let res = branch_and_bound(&inst, 100_000).unwrap();
        assert_eq!(res.status, BnbStatus::Optimal);
        assert_eq!(res.optimum, brute);
        let root = simplex::solve(&inst.lp_relaxation(), None).unwrap().objective;
        assert!(root <= res.optimum + 1e-9);
        let p = res.incumbent.unwrap();
        assert!(inst.is_feasible(p.x.view(), p.z.view(), 1e-7));
    }
}

#[test]
fn matches_enumeration_on_mixed_instances() {
    for seed in 0..20 {
        let inst = generate_random_mixed(3, 3, 2, seed).unwrap().with_integer_upper_bounds(3.0);
        let brute = enumerate_feasible(&inst, 3).unwrap().best_objective(&inst).unwrap();
        let res = branch_and_bound(&inst, 100_000).unwrap();
        assert_eq!(res.status, BnbStatus::Optimal);
        assert!((res.optimum - brute).abs() <= 1e-7, "seed {seed}: {} vs {brute}", res.optimum);
    }
}

#[test]
fn generator_examples() {
    let edge = generate_max_indep_set(2, 1.0, 7).unwrap();
    assert_eq!(branch_and_bound(&edge, 100).unwrap().optimum, -1.0);

    let triangle = generate_max_indep_set(3, 1.0, 1).unwrap();
    assert_eq!(enumerate_feasible(&triangle, 1).unwrap().best_objective(&triangle), Some(-1.0));
    let lp = simplex::solve(&triangle.lp_relaxation(), None).unwrap();
    assert!((lp.objective + 1.5).abs() <= 1e-9);

    let cover = generate_set_cover(20, 40, 0.2, 0).unwrap();
    let lp = simplex::solve(&cover.lp_relaxation(), None).unwrap();
    let res = branch_and_bound(&cover, 100_000).unwrap();
    assert_eq!(res.status, BnbStatus::Optimal);
    assert!(lp.objective <= res.optimum + 1e-9);
}

#[test]
fn node_limit_keeps_a_valid_bound() {
    for seed in 0..10 {
        let inst = generate_set_cover(15, 25, 0.2, seed).unwrap();
        let full = branch_and_bound(&inst, 100_000).unwrap();
        let cut = branch_and_bound(&inst, 2).unwrap();
        assert!(cut.lower_bound <= full.optimum + 1e-9);
        assert!(cut.optimum >= full.optimum - 1e-9);
    }
}
