use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CertValue, CertificateKind, CertificateReport, Method};
use crate::certify::recovery_threshold;
use crate::linalg::{inner, norm2, principal_submatrix, spectral_deviation, CMatrix};
use crate::rng::{complex_gaussian_vec, derive_seed, rng_from_seed, uniform, DetRng, below};
use crate::{Error, Result, SensingOperator, SparsityPattern, C64};

/// Default cap on the number of supports examined by exact enumeration.
pub const ENUMERATION_CAP: u128 = 10_000_000;

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Levels {
    ranges: Vec<Range<usize>>,
    counts: Vec<usize>,
}

impl Levels {
    fn new(p: &SparsityPattern, n: usize) -> Self {
        let ranges: Vec<Range<usize>> = (0..p.levels())
            .map(|l| {
                let r = p.level_range(l);
                r.start.min(n)..r.end.min(n)
            })
            .collect();
        let counts = p.maximal_counts(n);
        Levels { ranges, counts }
    }

    fn sizes(&self) -> Vec<u128> {
        self.ranges
            .iter()
            .zip(&self.counts)
            .map(|(r, &k)| binom(r.len(), k))
            .collect()
    }

    /// Support number `idx` in lexicographic order (level 0 most
    /// significant, lexicographic combinations within each level).
    fn unrank(&self, mut idx: u128, sizes: &[u128]) -> Vec<usize> {
        let mut digits = vec![0u128; sizes.len()];
        for l in (0..sizes.len()).rev() {
            digits[l] = idx % sizes[l];
            idx /= sizes[l];
        }
        let mut support = Vec::with_capacity(self.counts.iter().sum());
        for (l, r) in self.ranges.iter().enumerate() {
            unrank_combination(r.len(), self.counts[l], digits[l], r.start, &mut support);
        }
        support
    }
}

fn unrank_combination(w: usize, k: usize, mut rank: u128, offset: usize, out: &mut Vec<usize>) {
    let mut c = 0;
    for i in 0..k {
        loop {
            let count = binom(w - c - 1, k - i - 1);
            if rank < count {
                break;
            }
            rank -= count;
            c += 1;
        }
        out.push(offset + c);
        c += 1;
    }
}

/// Number of maximal `(s, M)`-sparse supports for `n` columns (saturating).
pub fn enumeration_count(p: &SparsityPattern, n: usize) -> u128 {
    Levels::new(p, n)
        .sizes()
        .iter()
        .fold(1u128, |acc, &s| acc.saturating_mul(s))
}

/// Spectral deviation `max(lambda_max - 1, 1 - lambda_min)` of the Gram
/// submatrix `G[S, S]`.
pub fn support_deviation(gram: &CMatrix, support: &[usize]) -> f64 {
    if support.is_empty() {
        return 0.0;
    }
    spectral_deviation(&principal_submatrix(gram, support))
}

/// Exact RIP-in-levels constant by enumerating every maximal support.
///
/// Columns at or beyond `M_l` never enter a support, and a zero budget
/// simply contributes nothing, so the pattern need not cover `A`.
pub fn ripl_exact(a: &CMatrix, p: &SparsityPattern) -> Result<CertificateReport> {
    ripl_exact_with_cap(a, p, ENUMERATION_CAP)
}

pub fn ripl_exact_with_cap(a: &CMatrix, p: &SparsityPattern, cap: u128) -> Result<CertificateReport> {
    let n = a.ncols();
    let levels = Levels::new(p, n);
    let sizes = levels.sizes();
    let total = sizes.iter().fold(1u128, |acc, &s| acc.saturating_mul(s));
    if total > cap {
        return Err(Error::EnumerationTooLarge { count: total, cap });
    }
    let gram = a.adjoint() * a;
    let (dev, idx) = (0..total as u64)
        .into_par_iter()
        .map(|i| (support_deviation(&gram, &levels.unrank(i as u128, &sizes)), i))
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |x, y| {
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    let support = levels.unrank(idx as u128, &sizes);
    Ok(
        CertificateReport::new(CertificateKind::RipL, CertValue::Scalar(dev.max(0.0)), Method::ExactEnumeration, total as u64)
            .with_support(support),
    )
}

/// Classical restricted isometry constant `delta_s` over all `s`-subsets.
pub fn rip_exact(a: &CMatrix, s: usize) -> Result<CertificateReport> {
    let n = a.ncols();
    let p = SparsityPattern::single_level(s.min(n), n)?;
    let mut r = ripl_exact(a, &p)?;
    r.kind = CertificateKind::Rip;
    Ok(r)
}

/// Exact constant for operators with `A* A = c^2 (I - k k*)`, `||k|| = 1`.
///
/// On a support `S` the Gram matrix is `c^2 (I - k_S k_S*)`, with eigenvalue
/// `c^2 (1 - ||k_S||^2)` once and `c^2` on the rest, so only the supports
/// maximizing and minimizing `||k_S||` matter.
pub fn ripl_deflation_analytic(k: &[C64], c: f64, p: &SparsityPattern) -> Result<CertificateReport> {
    let nk = norm2(k);
    if (nk - 1.0).abs() > 1e-10 {
        return Err(Error::DimensionMismatch(format!("kernel vector norm {nk} is not 1")));
    }
    let n = k.len();
    let c2 = c * c;
    let top = p.top_support_by(n, |j| k[j].norm());
    let bottom = p.top_support_by(n, |j| -k[j].norm());
    let energy = |s: &[usize]| s.iter().map(|&j| k[j].norm_sqr()).sum::<f64>();
    let mut best = ((c2 * (1.0 - energy(&top)) - 1.0).abs(), top.clone());
    let low = (c2 * (1.0 - energy(&bottom)) - 1.0).abs();
    if low > best.0 {
        best = (low, bottom);
    }
    if top.len() >= 2 && (c2 - 1.0).abs() > best.0 {
        best = ((c2 - 1.0).abs(), top);
    }
    Ok(
        CertificateReport::new(CertificateKind::RipL, CertValue::Scalar(best.0), Method::Analytic, 2)
            .with_support(best.1)
            .with_note("Gram matrix is a scaled rank-one deflation"),
    )
}

enum Evaluator<'a> {
    Gram(CMatrix),
    Operator(&'a SensingOperator),
}

impl Evaluator<'_> {
    fn deviation(&self, support: &[usize], rng: &mut DetRng) -> f64 {
        match self {
            Evaluator::Gram(g) => support_deviation(g, support),
            Evaluator::Operator(op) => rayleigh_deviation(op, support, rng),
        }
    }
}

/// Lower bound on the deviation of `A_S* A_S` from the identity by power
/// iteration on `A_S* A_S - I`; every Rayleigh quotient is attained, so
/// the running maximum never overshoots.
fn rayleigh_deviation(op: &SensingOperator, support: &[usize], rng: &mut DetRng) -> f64 {
    if support.is_empty() {
        return 0.0;
    }
    let n = op.n_in();
    let mut v = complex_gaussian_vec(rng, support.len());
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut best: f64 = 0.0;
    for _ in 0..40 {
        let mut full = vec![C64::new(0.0, 0.0); n];
        for (&j, &vj) in support.iter().zip(&v) {
            full[j] = vj;
        }
        let back = op.apply_adjoint(&op.apply(&full));
        let bv: Vec<C64> = support.iter().zip(&v).map(|(&j, vj)| back[j] - vj).collect();
        best = best.max(inner(&bv, &v).re.abs());
        let nb = norm2(&bv);
        if nb < 1e-300 {
            break;
        }
        v = bv.iter().map(|x| x / nb).collect();
    }
    best
}

/// Weighted sample of `k` items from `range` without replacement
/// (exponential-key method), sorted.
fn weighted_pick(rng: &mut DetRng, range: Range<usize>, k: usize, w: &[f64]) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = range
        .map(|j| {
            let u = uniform(rng).max(f64::MIN_POSITIVE);
            let wj = w[j].max(1e-12);
            (u.ln() / wj, j)
        })
        .collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<usize> = keyed.into_iter().take(k).map(|(_, j)| j).collect();
    out.sort_unstable();
    out
}

/// Randomized lower bound on `delta_{s,M}`: `budget` maximal supports
/// proposed from per-level column leverage (alternating with uniform
/// proposals), each refined by greedy in-level swaps.
pub fn ripl_lower_bound(
    op: &SensingOperator,
    p: &SparsityPattern,
    budget: usize,
    seed: u64,
) -> Result<CertificateReport> {
    if budget == 0 {
        return Err(Error::InvalidOptions("budget must be at least 1".into()));
    }
    let n = op.n_in();
    let levels = Levels::new(p, n);
    let evaluator = if n <= 1024 && n * op.n_out() <= crate::operators::MATERIALIZE_CAP {
        let a = op.materialize()?;
        Evaluator::Gram(a.adjoint() * &a)
    } else {
        Evaluator::Operator(op)
    };
    let leverage: Vec<f64> = match &evaluator {
        Evaluator::Gram(g) => (0..n).map(|j| g[(j, j)].re).collect(),
        Evaluator::Operator(o) => (0..n)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[j] = C64::new(1.0, 0.0);
                norm2(&o.apply(&e)).powi(2)
            })
            .collect(),
    };
    let uniform_w = vec![1.0; n];
    const SWAPS: usize = 8;

    let (dev, _, support) = (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i as u64));
            let w = if i % 2 == 0 { &leverage } else { &uniform_w };
            let mut support = Vec::new();
            for (r, &k) in levels.ranges.iter().zip(&levels.counts) {
                support.extend(weighted_pick(&mut rng, r.clone(), k, w));
            }
            let mut best = evaluator.deviation(&support, &mut rng);
            let swappable: Vec<usize> = (0..levels.ranges.len())
                .filter(|&l| levels.counts[l] > 0 && levels.counts[l] < levels.ranges[l].len())
                .collect();
            if !swappable.is_empty() {
                for _ in 0..SWAPS {
                    let l = swappable[below(&mut rng, swappable.len())];
                    let r = &levels.ranges[l];
                    let inside: Vec<usize> = support.iter().copied().filter(|j| r.contains(j)).collect();
                    let outside: Vec<usize> = r.clone().filter(|j| !inside.contains(j)).collect();
                    let drop = inside[below(&mut rng, inside.len())];
                    let add = outside[below(&mut rng, outside.len())];
                    let mut cand: Vec<usize> = support.iter().copied().filter(|&j| j != drop).collect();
                    cand.push(add);
                    cand.sort_unstable();
                    let d = evaluator.deviation(&cand, &mut rng);
                    if d > best {
                        best = d;
                        support = cand;
                    }
                }
            }
            (best, i, support)
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, Vec::new()),
            |x, y| {
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    let work = (budget * (1 + SWAPS)) as u64;
    Ok(
        CertificateReport::new(CertificateKind::RipL, CertValue::Scalar(dev.max(0.0)), Method::RandomizedSearch, work)
            .with_support(support)
            .with_note("lower bound on the RIP-in-levels constant"),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryCheck {
    pub holds: bool,
    pub threshold: Option<f64>,
    /// Report on `delta_{2s,M}`.
    pub report: Option<CertificateReport>,
    pub reason: Option<String>,
}

/// Whether `delta_{2s,M}(A)` is below the uniform recovery threshold of
/// `(s, M)` and the pattern covers `A`.
pub fn check_recovery_condition(a: &CMatrix, p: &SparsityPattern) -> Result<RecoveryCheck> {
    let n = a.ncols();
    let threshold = match recovery_threshold(p) {
        Ok(t) => t,
        Err(Error::InfiniteRatio) => {
            return Ok(RecoveryCheck {
                holds: false,
                threshold: None,
                report: None,
                reason: Some("InfiniteRatio".into()),
            })
        }
        Err(e) => return Err(e),
    };
    if p.extent() < n {
        return Ok(RecoveryCheck {
            holds: false,
            threshold: Some(threshold),
            report: None,
            reason: Some("PatternDoesNotCover".into()),
        });
    }
    let p2 = p.scaled(2);
    if enumeration_count(&p2, n) <= ENUMERATION_CAP {
        let r = ripl_exact(a, &p2)?;
        let holds = r.value.lower() < threshold;
        return Ok(RecoveryCheck {
            holds,
            threshold: Some(threshold),
            report: Some(r),
            reason: (!holds).then(|| "delta_2s exceeds the threshold".into()),
        });
    }
    let op = SensingOperator::from_dense(a.clone());
    let r = ripl_lower_bound(&op, &p2, 256, 0)?;
    let reason = if r.value.lower() >= threshold {
        "delta_2s lower bound exceeds the threshold"
    } else {
        "inconclusive: only a lower bound on delta_2s is available"
    };
    Ok(RecoveryCheck {
        holds: false,
        threshold: Some(threshold),
        report: Some(r),
        reason: Some(reason.into()),
    })
}
