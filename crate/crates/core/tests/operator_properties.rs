use levelcs::operators::{
    dft_ordered, dwt, dyadic_bands, idwt, max_off_block, multilevel_scheme, rank_one_deflation, reorder, subsample,
    tensor2d, wht_ordered, DftOrdering, WaveletFamily, WaveletSpec, WhtOrdering,
};
use levelcs::linalg::real_vec;
use levelcs::SensingOperator;

fn constructed() -> Vec<(String, SensingOperator)> {
    let mut ops = Vec::new();
    for n in [8usize, 64] {
        for o in [DftOrdering::Natural, DftOrdering::LowFirst] {
            ops.push((format!("dft {o:?} {n}"), dft_ordered(n, o)));
        }
        for o in [WhtOrdering::Natural, WhtOrdering::Paley, WhtOrdering::Sequency] {
            ops.push((format!("wht {o:?} {n}"), wht_ordered(n, o).unwrap()));
        }
        for fam in [WaveletFamily::Haar, WaveletFamily::Daubechies(2), WaveletFamily::Daubechies(4)] {
            let spec = WaveletSpec::new(fam, 1);
            ops.push((format!("dwt {fam} {n}"), dwt(spec, n).unwrap()));
            ops.push((format!("idwt {fam} {n}"), idwt(spec, n).unwrap()));
        }
    }
    let spec = WaveletSpec::new(WaveletFamily::Daubechies(3), 3);
    let dd = dft_ordered(64, DftOrdering::LowFirst).compose(&idwt(spec, 64).unwrap()).unwrap();
    ops.push(("dft*idwt db3".into(), dd.clone()));
    let m = spec.level_boundaries(64).unwrap();
    let scheme = multilevel_scheme(64, &dyadic_bands(&m), &[8, 8, 5, 9], 3).unwrap();
    ops.push(("subsampled".into(), subsample(&dd, &scheme).unwrap()));
    ops.push(("tensor".into(), tensor2d(&dft_ordered(8, DftOrdering::LowFirst), &wht_ordered(8, WhtOrdering::Paley).unwrap())));
    let k = real_vec(&[0.5, 0.5, 0.5, 0.5]);
    ops.push(("deflation".into(), rank_one_deflation(&k, 2.0).unwrap()));
    ops.push(("reorder".into(), reorder(vec![3, 1, 0, 2]).unwrap()));
    ops.push(("adjoint".into(), dd.adjoint()));
    ops
}

#[test]
fn adjoint_probes_pass_for_every_operator() {
    for (name, op) in constructed() {
        let m = op.adjoint_mismatch(100, 17);
        assert!(m < 1e-10, "{name}: adjoint mismatch {m:e}");
    }
}

#[test]
fn transforms_are_unitary() {
    for (name, op) in constructed() {
        if name.starts_with("dft") || name.starts_with("wht") || name.contains("dwt") || name == "tensor" {
            let d = op.isometry_defect(50, 5);
            assert!(d < 1e-10, "{name}: isometry defect {d:e}");
        }
    }
}

#[test]
fn walsh_haar_is_block_diagonal_at_every_depth() {
    for levels in 1..=6 {
        let spec = WaveletSpec::new(WaveletFamily::Haar, levels);
        let u = wht_ordered(64, WhtOrdering::Paley)
            .unwrap()
            .compose(&idwt(spec, 64).unwrap())
            .unwrap()
            .materialize()
            .unwrap();
        let off = max_off_block(&u, &spec.level_boundaries(64).unwrap());
        assert!(off < 1e-12, "levels {levels}: {off:e}");
    }
}

#[test]
fn multilevel_scheme_is_bitwise_reproducible() {
    let bands = dyadic_bands(&[0, 4, 8, 16, 32, 64, 128]);
    let m = [4, 4, 3, 5, 9, 17];
    let a = multilevel_scheme(128, &bands, &m, 99).unwrap();
    let b = multilevel_scheme(128, &bands, &m, 99).unwrap();
    assert_eq!(a, b);
    let c = multilevel_scheme(128, &bands, &m, 100).unwrap();
    assert_ne!(a.indices(), c.indices());
}
