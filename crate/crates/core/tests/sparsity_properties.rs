use proptest::prelude::*;

use levelcs::fliptest::{make_permutation, PermutationKind};
use levelcs::linalg::real_vec;
use levelcs::{SparsityPattern, C64};

/// Pattern with 1..=4 levels of width 1..=5 and budgets 0..=width.
fn pattern() -> impl Strategy<Value = SparsityPattern> {
    prop::collection::vec((1usize..=5, 0usize..=5), 1..=4).prop_map(|lv| {
        let mut m = vec![0];
        let mut s = Vec::new();
        for (w, b) in lv {
            m.push(m.last().unwrap() + w);
            s.push(b.min(w));
        }
        SparsityPattern::new(s, m).unwrap()
    })
}

fn vector_for(p: &SparsityPattern) -> impl Strategy<Value = Vec<C64>> {
    let n = p.extent();
    prop::collection::vec(prop_oneof![Just(0.0), -5.0f64..5.0], n).prop_map(|v| real_vec(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sigma_vanishes_exactly_on_sparse_vectors((p, x) in pattern().prop_flat_map(|p| { let v = vector_for(&p); (Just(p), v) })) {
        prop_assert_eq!(p.sigma(&x) == 0.0, p.is_sparse(&x));
    }

    #[test]
    fn sigma_is_invariant_under_level_permutations(
        (p, x) in pattern().prop_flat_map(|p| { let v = vector_for(&p); (Just(p), v) }),
        seed in any::<u64>(),
    ) {
        let q = make_permutation(PermutationKind::LevelRandom { seed }, x.len(), Some(&p)).unwrap();
        let qx = q.apply(&x);
        prop_assert!((p.sigma(&qx) - p.sigma(&x)).abs() <= 1e-12 * (1.0 + p.sigma(&x)));
        prop_assert_eq!(p.is_sparse(&qx), p.is_sparse(&x));
    }

    #[test]
    fn scaling_is_identity_at_one_and_monotone(p in pattern(), a in 1usize..6) {
        prop_assert_eq!(p.scaled(1), p.clone());
        let (lo, hi) = (p.scaled(a), p.scaled(a + 1));
        prop_assert!(lo.budgets().iter().zip(hi.budgets()).all(|(x, y)| x <= y));
    }

    #[test]
    fn ratio_constant_bounds(p in pattern()) {
        let eta = p.ratio_constant();
        if eta.is_finite() {
            prop_assert!(eta.value() >= 1.0);
            let all_equal = p.budgets().windows(2).all(|w| w[0] == w[1]);
            prop_assert_eq!(eta.value() == 1.0, all_equal);
        } else {
            prop_assert!(p.budgets().contains(&0));
        }
    }

    #[test]
    fn best_approximation_matches_subset_search((p, x) in pattern().prop_flat_map(|p| { let v = vector_for(&p); (Just(p), v) })) {
        prop_assume!(p.covers(x.len()));
        // Exhaustive oracle over every subset respecting the budgets.
        let n = x.len();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            if !p.is_sparse_set(&idx) {
                continue;
            }
            let tail: f64 = (0..n).filter(|j| mask >> j & 1 == 0).map(|j| x[j].norm()).sum();
            best = best.min(tail);
        }
        let (_, sigma) = p.best_approximation(&x).unwrap();
        prop_assert!((sigma - best).abs() <= 1e-12 * (1.0 + best));
    }

    #[test]
    fn relative_sparsity_is_monotone_and_sums_to_the_global_count(
        (p, x) in pattern().prop_flat_map(|p| { let v = vector_for(&p); (Just(p), v) }),
        e1 in 0.0f64..=1.0,
        e2 in 0.0f64..=1.0,
    ) {
        prop_assume!(p.covers(x.len()));
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let a = p.relative_sparsity(&x, lo).unwrap();
        let b = p.relative_sparsity(&x, hi).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(u, v)| u <= v));
        // Global count from a plain sort of magnitudes.
        let mut mags: Vec<f64> = x.iter().map(|v| v.norm()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = mags.iter().map(|m| m * m).sum::<f64>().sqrt();
        let global = (0..=mags.len())
            .find(|&k| mags[..k].iter().map(|m| m * m).sum::<f64>().sqrt() >= hi * total * (1.0 - 1e-15))
            .unwrap();
        let global = if hi * total == 0.0 { 0 } else { global };
        prop_assert_eq!(b.iter().sum::<usize>(), global);
    }
}
