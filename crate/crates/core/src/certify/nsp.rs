use rayon::prelude::*;

use super::{CertValue, CertificateKind, CertificateReport, Method, Witness};
use crate::linalg::{kernel_basis, norm1, norm2, CMatrix};
use crate::rng::{choose_sorted, complex_gaussian_vec, derive_seed, rng_from_seed, uniform, DetRng};
use crate::{Error, Result, SensingOperator, SparsityPattern, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCheckOptions {
    /// Relative singular-value cut deciding the kernel.
    pub rel_tol: f64,
    /// Largest kernel dimension handled by randomized falsification.
    pub max_dim: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for KernelCheckOptions {
    fn default() -> Self {
        KernelCheckOptions {
            rel_tol: 1e-10,
            max_dim: 8,
            trials: 10_000,
            seed: 0,
        }
    }
}

/// `(||h_{S^c}||_1 - ||h_S||_1) / ||h||_1` for the support `S` that
/// maximizes `||h_S||_1`, together with that support.
fn l1_margin(h: &[C64], p: &SparsityPattern) -> (f64, Vec<usize>) {
    let n = h.len().min(p.extent());
    let s = p.top_support_by(n, |j| h[j].norm());
    let total = norm1(h);
    let inside: f64 = s.iter().map(|&j| h[j].norm()).sum();
    let margin = if total == 0.0 { 1.0 } else { (total - 2.0 * inside) / total };
    (margin, s)
}

/// Exact-recovery verdict from the kernel of `A`: every `(s, M)`-sparse
/// vector is the unique l1 minimizer iff `||h_S||_1 < ||h_{S^c}||_1` for
/// every nonzero kernel vector `h` and maximal support `S`.
pub fn kernel_exact_recovery_check(a: &CMatrix, p: &SparsityPattern) -> Result<CertificateReport> {
    kernel_exact_recovery_check_with(a, p, &KernelCheckOptions::default())
}

/// As [`kernel_exact_recovery_check`]. A kernel of dimension one is decided
/// exactly; larger kernels up to `max_dim` are searched with random kernel
/// vectors, which can only refute.
pub fn kernel_exact_recovery_check_with(
    a: &CMatrix,
    p: &SparsityPattern,
    opts: &KernelCheckOptions,
) -> Result<CertificateReport> {
    let (_, kernel) = kernel_basis(a, opts.rel_tol);
    let mut report = CertificateReport::new(
        CertificateKind::KernelExactRecovery,
        CertValue::Scalar(1.0),
        Method::Analytic,
        1,
    );
    match kernel.len() {
        0 => {
            report.holds = Some(true);
            report.note = Some("trivial kernel".into());
            Ok(report)
        }
        1 => {
            let h = &kernel[0];
            let (margin, s) = l1_margin(h, p);
            report.value = CertValue::Scalar(margin);
            report.holds = Some(margin > 1e-12);
            report.witness = Witness {
                support: Some(s),
                vector: Some(h.clone()),
            };
            report.note = Some("one-dimensional kernel: exact verdict".into());
            Ok(report)
        }
        d if d <= opts.max_dim => {
            let results: Vec<(f64, Vec<usize>, Vec<C64>)> = (0..opts.trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = rng_from_seed(derive_seed(opts.seed, i as u64));
                    let c = complex_gaussian_vec(&mut rng, d);
                    let mut h = vec![C64::new(0.0, 0.0); a.ncols()];
                    for (ci, b) in c.iter().zip(&kernel) {
                        for (hj, bj) in h.iter_mut().zip(b) {
                            *hj += ci * bj;
                        }
                    }
                    let (m, s) = l1_margin(&h, p);
                    (m, s, h)
                })
                .collect();
            let (idx, _) = results
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, r)| if r.0 < acc.1 { (i, r.0) } else { acc });
            let (margin, s, h) = results[idx].clone();
            report.method = Method::RandomizedSearch;
            report.work = opts.trials as u64;
            report.value = CertValue::Scalar(margin);
            report.witness = Witness {
                support: Some(s),
                vector: Some(h),
            };
            if margin <= 1e-12 {
                report.holds = Some(false);
                report.note = Some(format!("violating kernel vector found (kernel dimension {d})"));
            } else {
                report.note = Some(format!("no violation found in {} trials (kernel dimension {d}); inconclusive", opts.trials));
            }
            Ok(report)
        }
        d => Err(Error::KernelTooLarge(d)),
    }
}

/// Evaluates `||v_S||_2 <= rho/sqrt(s~) ||v_{S^c}||_1 + tau ||Uv||_2` for the
/// support maximizing `||v_S||_2`. Returns `(lhs, rhs, S)`.
pub fn nsp_violation(
    op: &SensingOperator,
    p: &SparsityPattern,
    rho: f64,
    tau: f64,
    v: &[C64],
) -> (f64, f64, Vec<usize>) {
    let n = v.len().min(p.extent());
    let s = p.top_support_by(n, |j| v[j].norm());
    let mut in_s = vec![false; v.len()];
    for &j in &s {
        in_s[j] = true;
    }
    let lhs = s.iter().map(|&j| v[j].norm_sqr()).sum::<f64>().sqrt();
    let tail: f64 = v
        .iter()
        .zip(&in_s)
        .filter(|(_, &i)| !i)
        .map(|(x, _)| x.norm())
        .sum();
    let s_tilde = p.num_elements() as f64;
    let rhs = rho / s_tilde.sqrt() * tail + tau * norm2(&op.apply(v));
    (lhs, rhs, s)
}

fn probe(
    rng: &mut DetRng,
    kind: usize,
    n: usize,
    p: &SparsityPattern,
    hints: &[Vec<C64>],
) -> Vec<C64> {
    match kind {
        0 if !hints.is_empty() => {
            let c = complex_gaussian_vec(rng, hints.len());
            let mut v = vec![C64::new(0.0, 0.0); n];
            for (ci, h) in c.iter().zip(hints) {
                for (vj, hj) in v.iter_mut().zip(h) {
                    *vj += ci * hj;
                }
            }
            let scale = norm2(&v) * 10f64.powf(-6.0 * uniform(rng)) / (n as f64).sqrt();
            for (vj, g) in v.iter_mut().zip(complex_gaussian_vec(rng, n)) {
                *vj += g * scale;
            }
            v
        }
        1 => complex_gaussian_vec(rng, n),
        3 => complex_gaussian_vec(rng, n)
            .into_iter()
            .map(|g| g * g.norm_sqr())
            .collect(),
        _ => {
            let tail = 10f64.powf(-4.0 * uniform(rng));
            let mut v: Vec<C64> = complex_gaussian_vec(rng, n).into_iter().map(|g| g * tail).collect();
            for l in 0..p.levels() {
                let r = p.level_range(l);
                let r = r.start.min(n)..r.end.min(n);
                let k = p.budgets()[l].min(r.len());
                for j in choose_sorted(rng, r.len(), k) {
                    v[r.start + j] += complex_gaussian_vec(rng, 1)[0];
                }
            }
            v
        }
    }
}

/// Randomized search for a violation of the l2 robust nullspace property in
/// levels. Probes cycle through kernel-aligned vectors (when `kernel_hint`
/// is given), dense Gaussian, sparse-plus-tail and heavy-tailed vectors;
/// the support is always the per-level maximizer of `||v_S||_2`. Reports
/// the first violating trial, or the largest `lhs/rhs` seen.
pub fn nsp_falsify(
    op: &SensingOperator,
    p: &SparsityPattern,
    rho: f64,
    tau: f64,
    trials: usize,
    seed: u64,
    kernel_hint: Option<&[Vec<C64>]>,
) -> Result<CertificateReport> {
    if trials == 0 {
        return Err(Error::InvalidOptions("trials must be at least 1".into()));
    }
    let n = op.n_in();
    let hints = kernel_hint.unwrap_or(&[]);
    if hints.iter().any(|h| h.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: hints.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
        });
    }
    let run = |i: usize| {
        let mut rng = rng_from_seed(derive_seed(seed, i as u64));
        let v = probe(&mut rng, i % 4, n, p, hints);
        let (lhs, rhs, s) = nsp_violation(op, p, rho, tau, &v);
        (lhs, rhs, s, v)
    };
    let ratios: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (lhs, rhs, _, v) = run(i);
            let violated = lhs > rhs * (1.0 + 1e-12) + 1e-15 * norm2(&v);
            (if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 }, violated)
        })
        .collect();
    let worst = ratios.iter().map(|r| r.0).fold(0.0, f64::max);
    let mut report = CertificateReport::new(CertificateKind::NspL2, CertValue::Scalar(worst), Method::RandomizedSearch, trials as u64);
    match ratios.iter().position(|r| r.1) {
        Some(i) => {
            let (_, _, s, v) = run(i);
            report.holds = Some(false);
            report.work = i as u64 + 1;
            report.value = CertValue::Scalar(ratios[i].0);
            report.witness = Witness {
                support: Some(s),
                vector: Some(v),
            };
            report.note = Some(format!("violation at trial {i}"));
        }
        None => {
            report.note = Some(format!("no violation found in {trials} trials; max lhs/rhs = {worst:.6}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real, real_vec};
    use nalgebra::DMatrix;

    #[test]
    fn identity_never_violates() {
        let op = SensingOperator::identity(12);
        let p = SparsityPattern::new(vec![2, 3], vec![0, 4, 12]).unwrap();
        for rho in [0.1, 0.5, 0.9] {
            let r = nsp_falsify(&op, &p, rho, 1.0, 2000, 3, None).unwrap();
            assert_eq!(r.holds, None);
            assert!(r.value.lower() <= 1.0);
        }
    }

    #[test]
    fn kernel_vector_violation_is_found() {
        // U = I - kk* with k = (1,1,1,1)/2; the kernel vector spreads its
        // mass evenly, so a support of 3 out of 4 violates for small rho.
        let k = real_vec(&[0.5; 4]);
        let op = crate::operators::rank_one_deflation(&k, 1.0).unwrap();
        let p = SparsityPattern::single_level(3, 4).unwrap();
        let hint = vec![k.clone()];
        let r = nsp_falsify(&op, &p, 0.2, 1.0, 100, 1, Some(&hint)).unwrap();
        assert_eq!(r.holds, Some(false));
        assert_eq!(r.work, 1);
    }

    #[test]
    fn one_dim_kernel_verdicts() {
        let a = from_real(&DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, 0.0]));
        // h = (2, 0, -1)/sqrt5: the support {0} carries 2/3 of the l1 mass.
        let p = SparsityPattern::single_level(1, 3).unwrap();
        let r = kernel_exact_recovery_check(&a, &p).unwrap();
        assert_eq!(r.holds, Some(false));
        assert_eq!(r.witness.support, Some(vec![0]));
        let q = SparsityPattern::new(vec![1], vec![0, 2]).unwrap();
        let r = kernel_exact_recovery_check(&a, &q).unwrap();
        assert_eq!(r.holds, Some(false));
        let inj = from_real(&DMatrix::identity(3, 3));
        assert_eq!(kernel_exact_recovery_check(&inj, &p).unwrap().holds, Some(true));
    }

    #[test]
    fn larger_kernels() {
        let a = from_real(&DMatrix::from_row_slice(1, 4, &[1.0, 1.0, 1.0, 1.0]));
        let p = SparsityPattern::single_level(2, 4).unwrap();
        let r = kernel_exact_recovery_check(&a, &p).unwrap();
        assert_eq!(r.method, Method::RandomizedSearch);
        assert_eq!(r.holds, Some(false));
        let wide = from_real(&DMatrix::from_row_slice(1, 12, &[1.0; 12]));
        let opts = KernelCheckOptions { max_dim: 4, ..Default::default() };
        assert!(matches!(
            kernel_exact_recovery_check_with(&wide, &p, &opts),
            Err(Error::KernelTooLarge(11))
        ));
    }
}
