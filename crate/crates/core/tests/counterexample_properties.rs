use levelcs::counterexamples::{
    construct_eta_dependence, construct_l2_sharpness, construct_l_dependence, covering_counterexamples, tamper, verify,
    Claim, SharpnessVariant,
};
use levelcs::linalg::{dist2, mat_vec, norm1, norm2, scale, sub};

#[test]
fn kernel_relation_and_norms_for_both_dependence_variants() {
    for c in [3usize, 4, 6] {
        for inst in [construct_eta_dependence(1, c).unwrap(), construct_l_dependence(2, c).unwrap()] {
            let z2 = inst.z2.clone().unwrap();
            let lhs = mat_vec(&inst.u, &inst.z1);
            let rhs = mat_vec(&inst.u, &scale(&z2, -1.0));
            assert!(norm2(&sub(&lhs, &rhs)) < 1e-10);
            // Entries are small integers, so these sums are exact.
            assert_eq!(norm1(&inst.z1), (c * c + c) as f64);
            assert_eq!(norm1(&z2), (c * c - c) as f64);
            assert!(norm1(&z2) < norm1(&inst.z1));
        }
    }
}

#[test]
fn exact_delta_respects_the_analytic_bound() {
    for (a, c) in [(1, 3), (1, 5), (2, 5), (3, 6)] {
        let inst = construct_eta_dependence(a, c).unwrap();
        let p = inst.pattern.scaled(a);
        let d = levelcs::certify::ripl_exact(&inst.u, &p).unwrap().value.lower();
        assert!(d <= (a + 1) as f64 / (c + 1) as f64 + 1e-12, "a={a} C={c}: {d}");
    }
}

#[test]
fn covering_and_dependence_instances_verify() {
    for inst in covering_counterexamples() {
        assert!(verify(&inst).passed);
    }
    let inst = construct_eta_dependence(1, 10).unwrap();
    let r = verify(&inst);
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
    let l = verify(&construct_l_dependence(1, 4).unwrap());
    assert!(l.passed, "{:?}", l.failures().collect::<Vec<_>>());
}

#[test]
fn tampered_instance_fails() {
    let inst = construct_eta_dependence(1, 10).unwrap();
    let r = verify(&tamper(&inst));
    assert!(!r.passed);
    assert!(r.failures().any(|o| matches!(o.claim, Claim::KernelRelation)));
    assert!(r.failures().any(|o| matches!(o.claim, Claim::L1Failure { .. })));
}

#[test]
fn sharpness_ratio_grows_like_the_fourth_root_of_eta() {
    let rho = 0.5;
    let mut fitted = f64::INFINITY;
    for c in [8usize, 16, 32] {
        let inst = construct_l2_sharpness(1, c, rho, SharpnessVariant::Eta).unwrap();
        let z = inst.z.clone().unwrap();
        let sigma = inst.pattern.sigma(&inst.z1);
        let ratio = dist2(&z, &inst.z1) * (inst.pattern.num_elements() as f64).sqrt() / sigma;
        let eta = inst.pattern.ratio_constant().value();
        assert_eq!(eta, (c * c) as f64);
        fitted = fitted.min(ratio / eta.powf(0.25));
        assert!(ratio >= (rho * eta.sqrt() / 3.0).sqrt());
    }
    assert!(fitted > 0.0);
}

#[test]
fn levels_variant_of_the_sharpness_family_verifies() {
    let inst = construct_l2_sharpness(1, 8, 0.5, SharpnessVariant::Levels).unwrap();
    let r = verify(&inst);
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
}
