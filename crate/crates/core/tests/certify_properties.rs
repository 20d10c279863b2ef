use nalgebra::DMatrix;
use proptest::prelude::*;

use levelcs::certify::{nsp_falsify, recovery_threshold, rip_exact, ripl_exact};
use levelcs::linalg::{from_real, mat_vec, norm2, CMatrix};
use levelcs::rng::{choose_sorted, gaussian, gaussian_vec, rng_from_seed};
use levelcs::{SensingOperator, SparsityPattern, C64};

fn gaussian_matrix(seed: u64, m: usize, n: usize) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    from_real(&(DMatrix::from_vec(m, n, gaussian_vec(&mut rng, m * n)) / (m as f64).sqrt()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ripl_is_monotone_in_budgets(seed in any::<u64>(), s1 in 1usize..=2, s2 in 1usize..=2) {
        let a = gaussian_matrix(seed, 6, 10);
        let p = SparsityPattern::new(vec![s1, s2], vec![0, 5, 10]).unwrap();
        let d1 = ripl_exact(&a, &p).unwrap().value.lower();
        let d2 = ripl_exact(&a, &p.scaled(2)).unwrap().value.lower();
        prop_assert!(d1 <= d2 + 1e-12);
    }

    #[test]
    fn single_level_ripl_is_rip(seed in any::<u64>(), s in 1usize..=3) {
        let a = gaussian_matrix(seed, 5, 9);
        let p = SparsityPattern::single_level(s, 9).unwrap();
        let r1 = ripl_exact(&a, &p).unwrap().value.lower();
        let r2 = rip_exact(&a, s).unwrap().value.lower();
        prop_assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn block_diagonal_constant_is_the_block_maximum(seed in any::<u64>(), s1 in 1usize..=2, s2 in 1usize..=3) {
        let (a1, a2) = (gaussian_matrix(seed, 4, 5), gaussian_matrix(seed ^ 1, 5, 6));
        let mut a = CMatrix::zeros(9, 11);
        a.view_mut((0, 0), (4, 5)).copy_from(&a1);
        a.view_mut((4, 5), (5, 6)).copy_from(&a2);
        let p = SparsityPattern::new(vec![s1, s2], vec![0, 5, 11]).unwrap();
        let joint = ripl_exact(&a, &p).unwrap().value.lower();
        let b1 = rip_exact(&a1, s1).unwrap().value.lower();
        let b2 = rip_exact(&a2, s2).unwrap().value.lower();
        prop_assert!((joint - b1.max(b2)).abs() < 1e-12);
    }

    #[test]
    fn inner_product_bound(seed in any::<u64>(), same_support in any::<bool>()) {
        let a = gaussian_matrix(seed, 7, 10);
        let p = SparsityPattern::new(vec![1, 1], vec![0, 5, 10]).unwrap();
        let delta = ripl_exact(&a, &p.scaled(2)).unwrap().value.lower();
        let mut rng = rng_from_seed(seed.wrapping_add(3));
        let pick = |rng: &mut _| vec![choose_sorted(rng, 5, 1)[0], 5 + choose_sorted(rng, 5, 1)[0]];
        let sx = pick(&mut rng);
        let sy = if same_support { sx.clone() } else { pick(&mut rng) };
        let mut x = vec![C64::new(0.0, 0.0); 10];
        let mut y = x.clone();
        for &j in &sx { x[j] = C64::new(gaussian(&mut rng), gaussian(&mut rng)); }
        for &j in &sy { y[j] = C64::new(gaussian(&mut rng), gaussian(&mut rng)); }
        let xy: C64 = x.iter().zip(&y).map(|(u, v)| u.conj() * v).sum();
        let xx = norm2(&x).powi(2);
        for j in 0..10 { y[j] -= x[j] * (xy / xx); }
        let (ux, uy) = (mat_vec(&a, &x), mat_vec(&a, &y));
        let t = (norm2(&ux).powi(2) - xx) / xx;
        let lhs = ux.iter().zip(&uy).map(|(u, v)| u.conj() * v).sum::<C64>().norm();
        let rhs = (delta * delta - t * t).max(0.0).sqrt() * norm2(&x) * norm2(&y);
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }

    #[test]
    fn identity_has_no_nullspace_violation(tau in 1.0f64..4.0, rho in 0.05f64..0.95, seed in any::<u64>()) {
        let p = SparsityPattern::new(vec![2, 3], vec![0, 6, 16]).unwrap();
        let r = nsp_falsify(&SensingOperator::identity(16), &p, rho, tau, 200, seed, None).unwrap();
        prop_assert!(r.holds.is_none());
    }
}

#[test]
fn threshold_at_one_level_and_unit_ratio() {
    let t = recovery_threshold(&SparsityPattern::single_level(3, 10).unwrap()).unwrap();
    assert!((t - 4.0 / 41f64.sqrt()).abs() < 1e-12);
}
