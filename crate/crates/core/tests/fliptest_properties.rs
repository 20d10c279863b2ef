use proptest::prelude::*;

use levelcs::fliptest::{make_permutation, Permutation, PermutationKind};
use levelcs::linalg::{dist2, real_vec};
use levelcs::SparsityPattern;

fn pattern() -> impl Strategy<Value = SparsityPattern> {
    prop::collection::vec((1usize..=6, 0usize..=3), 1..=4).prop_map(|lv| {
        let mut m = vec![0];
        let mut s = Vec::new();
        for (w, b) in lv {
            m.push(m.last().unwrap() + w);
            s.push(b.min(w));
        }
        SparsityPattern::new(s, m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reverse_kinds_are_involutions(p in pattern()) {
        let n = p.extent();
        let id: Vec<usize> = (0..n).collect();
        for kind in [PermutationKind::GlobalReverse, PermutationKind::LevelReverse] {
            let q = make_permutation(kind, n, Some(&p)).unwrap();
            prop_assert_eq!(q.apply(&q.apply(&id)), id.clone());
        }
    }

    #[test]
    fn level_preserving_kinds_keep_membership_and_sigma(
        p in pattern(),
        seed in any::<u64>(),
        raw in prop::collection::vec(prop_oneof![Just(0.0), -3.0f64..3.0], 24),
    ) {
        let n = p.extent();
        let x = real_vec(&raw[..n]);
        for kind in [PermutationKind::LevelReverse, PermutationKind::LevelRandom { seed }] {
            let q = make_permutation(kind, n, Some(&p)).unwrap();
            prop_assert!(q.preserves_levels(&p));
            let qx = q.apply(&x);
            prop_assert_eq!(p.is_sparse(&qx), p.is_sparse(&x));
            prop_assert!((p.sigma(&qx) - p.sigma(&x)).abs() <= 1e-12 * (1.0 + p.sigma(&x)));
        }
    }

    #[test]
    fn permutations_are_isometries(
        map in (1usize..20).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle()),
        a in prop::collection::vec(-4.0f64..4.0, 20),
        b in prop::collection::vec(-4.0f64..4.0, 20),
    ) {
        let n = map.len();
        let q = Permutation::custom(map).unwrap();
        let (x1, x2) = (real_vec(&a[..n]), real_vec(&b[..n]));
        let lhs = dist2(&x1, &q.apply_inverse(&x2));
        let rhs = dist2(&q.apply(&x1), &x2);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs));
    }
}
