use nalgebra::DMatrix;
use proptest::prelude::*;

use levelcs::linalg::{from_real, mat_vec, norm1, norm2, real_vec, sub};
use levelcs::rng::{derive_seed, gaussian_vec, rng_from_seed};
use levelcs::solver::{oracle_bp, solve_bp, SolveOptions};
use levelcs::SensingOperator;

fn instance(seed: u64, n: usize, m: usize, k: usize) -> (levelcs::linalg::CMatrix, Vec<levelcs::C64>) {
    let mut rng = rng_from_seed(seed);
    let a = DMatrix::from_vec(m, n, gaussian_vec(&mut rng, m * n)) / (m as f64).sqrt();
    let mut x = vec![0.0; n];
    for (j, v) in levelcs::rng::choose_sorted(&mut rng, n, k).into_iter().zip(gaussian_vec(&mut rng, k)) {
        x[j] = v;
    }
    (from_real(&a), real_vec(&x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn objective_never_exceeds_a_feasible_reference(seed in any::<u64>(), n in 4usize..=12, k in 1usize..=3) {
        let m = (n / 2).max(2);
        let (a, x0) = instance(seed, n, m, k.min(n));
        let y = mat_vec(&a, &x0);
        let opts = SolveOptions::default();
        let r = solve_bp(&SensingOperator::from_dense(a.clone()), &y, &opts).unwrap();
        prop_assert!(r.objective <= norm1(&x0) * (1.0 + 1e-6) + 1e-9);
        let resid = norm2(&sub(&mat_vec(&a, &r.x), &y));
        prop_assert!(resid <= opts.tol_feas * (1.0 + norm2(&y)), "residual {resid:e}");
    }
}

#[test]
fn oracle_agreement_on_random_instances() {
    for k in 0..50u64 {
        let n = 4 + (k as usize % 9);
        let m = (n / 2).max(2) + (k as usize % 3).min(n - 1 - (n / 2).max(2));
        let (a, x0) = instance(derive_seed(77, k), n, m, 2);
        let y = mat_vec(&a, &x0);
        let oracle = oracle_bp(&a, &y).unwrap();
        let r = solve_bp(&SensingOperator::from_dense(a), &y, &SolveOptions::default()).unwrap();
        let rel = (r.objective - oracle.objective).abs() / oracle.objective;
        assert!(rel < 1e-5, "instance {k}: {rel:e}");
    }
}

#[test]
fn identical_inputs_give_identical_iterates() {
    let (a, x0) = instance(5, 12, 6, 2);
    let y = mat_vec(&a, &x0);
    let op = SensingOperator::from_dense(a);
    let r1 = solve_bp(&op, &y, &SolveOptions::default()).unwrap();
    let r2 = solve_bp(&op, &y, &SolveOptions::default()).unwrap();
    assert_eq!(r1, r2);
}
