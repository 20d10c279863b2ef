//! Flip tests: permute the coefficients of a recoverable vector and check
//! whether recovery survives. Uniform recovery guarantees over a class
//! closed under the permutation predict that it does.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{dist1, dist2, norm1, norm2};
use crate::rng::{choose_sorted, derive_seed, rng_from_seed, shuffle};
use crate::solver::{solve_bpdn, solve_weighted_l1, SolveOptions, SolveResult};
use crate::{Error, Result, SensingOperator, SparsityPattern, Weights, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PermutationKind {
    GlobalReverse,
    LevelReverse,
    LevelRandom { seed: u64 },
    Custom,
}

/// A bijection on `0..n`, acting as `(Qx)[i] = x[map[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
    kind: PermutationKind,
}

impl Permutation {
    pub fn custom(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::InvalidOptions("permutation map is not a bijection".into()));
            }
            seen[j] = true;
        }
        Ok(Permutation {
            map,
            kind: PermutationKind::Custom,
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
            kind: PermutationKind::Custom,
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn kind(&self) -> PermutationKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.map.iter().map(|&j| x[j]).collect()
    }

    pub fn apply_inverse<T: Copy + Default>(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); y.len()];
        for (&j, &v) in self.map.iter().zip(y) {
            out[j] = v;
        }
        out
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j] = i;
        }
        Permutation {
            map,
            kind: PermutationKind::Custom,
        }
    }

    /// Whether every level of `p` is mapped onto itself.
    pub fn preserves_levels(&self, p: &SparsityPattern) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| p.level_of(i) == p.level_of(j))
    }
}

/// Builds a permutation of `0..n`. Level kinds act within the levels of
/// `pattern` and leave indices at or beyond `M_l` fixed.
pub fn make_permutation(
    kind: PermutationKind,
    n: usize,
    pattern: Option<&SparsityPattern>,
) -> Result<Permutation> {
    let level_ranges = || -> Result<Vec<std::ops::Range<usize>>> {
        let p = pattern.ok_or_else(|| Error::InvalidOptions("level permutations need a pattern".into()))?;
        Ok((0..p.levels())
            .map(|l| {
                let r = p.level_range(l);
                r.start.min(n)..r.end.min(n)
            })
            .collect())
    };
    let map = match kind {
        PermutationKind::GlobalReverse => (0..n).rev().collect(),
        PermutationKind::LevelReverse => {
            let mut map: Vec<usize> = (0..n).collect();
            for r in level_ranges()? {
                map[r.clone()].reverse();
            }
            map
        }
        PermutationKind::LevelRandom { seed } => {
            let mut map: Vec<usize> = (0..n).collect();
            for (l, r) in level_ranges()?.into_iter().enumerate() {
                let mut rng = rng_from_seed(derive_seed(seed, l as u64));
                let perm = shuffle(&mut rng, r.len());
                for (k, j) in perm.into_iter().enumerate() {
                    map[r.start + k] = r.start + j;
                }
            }
            map
        }
        PermutationKind::Custom => {
            return Err(Error::InvalidOptions("use Permutation::custom for explicit maps".into()))
        }
    };
    Ok(Permutation { map, kind })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub feasibility_residual: f64,
}

impl From<&SolveResult> for SolveDiagnostics {
    fn from(r: &SolveResult) -> Self {
        SolveDiagnostics {
            iterations: r.iterations,
            converged: r.converged,
            objective: r.objective,
            feasibility_residual: r.feasibility_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FlipTransform {
    Permutation {
        kind: PermutationKind,
    },
    Mover {
        level: usize,
        added: usize,
        removed: usize,
        budget: f64,
    },
}

/// Relative errors of the original and the transformed recovery, both
/// measured against the original vector (after undoing the permutation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipReport {
    pub err_original_l1: f64,
    pub err_original_l2: f64,
    pub err_flipped_l1: f64,
    pub err_flipped_l2: f64,
    pub transform: FlipTransform,
    pub original: SolveDiagnostics,
    pub flipped: SolveDiagnostics,
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// Norm minimized during recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryNorm {
    #[default]
    L1,
    WeightedL1,
}

fn recover(
    u: &SensingOperator,
    x: &[C64],
    eps: f64,
    weights: Option<&Weights>,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let y = u.try_apply(x)?;
    match weights {
        Some(w) => solve_weighted_l1(u, &y, w, eps, opts),
        None => solve_bpdn(u, &y, eps, opts),
    }
}

/// Runs the flip test: recovers `x1` and `Q x1` from their measurements and
/// compares both reconstructions with `x1`.
pub fn run_flip_test(
    u: &SensingOperator,
    x1: &[C64],
    perm: &Permutation,
    opts: &SolveOptions,
    eps: f64,
) -> Result<FlipReport> {
    if perm.len() != x1.len() {
        return Err(Error::LengthMismatch {
            expected: x1.len(),
            got: perm.len(),
        });
    }
    let original = recover(u, x1, eps, None, opts)?;
    flip_against(u, x1, perm, &original, opts, eps)
}

fn flip_against(
    u: &SensingOperator,
    x1: &[C64],
    perm: &Permutation,
    original: &SolveResult,
    opts: &SolveOptions,
    eps: f64,
) -> Result<FlipReport> {
    let x2 = perm.apply(x1);
    let flipped = recover(u, &x2, eps, None, opts)?;
    let back = perm.apply_inverse(&flipped.x);
    let (n1, n2) = (norm1(x1), norm2(x1));
    Ok(FlipReport {
        err_original_l1: rel(dist1(x1, &original.x), n1),
        err_original_l2: rel(dist2(x1, &original.x), n2),
        err_flipped_l1: rel(dist1(x1, &back), n1),
        err_flipped_l2: rel(dist2(x1, &back), n2),
        transform: FlipTransform::Permutation { kind: perm.kind() },
        original: original.into(),
        flipped: (&flipped).into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub count: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    /// Population standard deviation of the flipped relative l2 errors.
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub reports: Vec<FlipReport>,
    pub seeds: Vec<u64>,
    pub summary: SweepSummary,
}

/// Flip test in levels with `count` random level-preserving permutations;
/// permutation `k` is drawn with seed `derive_seed(seed, k)`.
pub fn permutation_sweep(
    u: &SensingOperator,
    x1: &[C64],
    p: &SparsityPattern,
    count: usize,
    seed: u64,
    opts: &SolveOptions,
    eps: f64,
) -> Result<SweepResult> {
    if count == 0 {
        return Err(Error::InvalidOptions("count must be at least 1".into()));
    }
    let original = recover(u, x1, eps, None, opts)?;
    let seeds: Vec<u64> = (0..count as u64).map(|k| derive_seed(seed, k)).collect();
    let reports = seeds
        .par_iter()
        .map(|&s| {
            let perm = make_permutation(PermutationKind::LevelRandom { seed: s }, x1.len(), Some(p))?;
            flip_against(u, x1, &perm, &original, opts, eps)
        })
        .collect::<Result<Vec<_>>>()?;
    let errs: Vec<f64> = reports.iter().map(|r| r.err_flipped_l2).collect();
    let mean = errs.iter().sum::<f64>() / count as f64;
    let var = errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / count as f64;
    let summary = SweepSummary {
        count,
        max: errs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min: errs.iter().copied().fold(f64::INFINITY, f64::min),
        mean,
        stddev: var.sqrt(),
    };
    Ok(SweepResult {
        reports,
        seeds,
        summary,
    })
}

/// One row per permutation plus a final `summary` row holding the means.
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from("perm_index,seed,err_orig_l2,err_flip_l2,err_orig_l1,err_flip_l1,iterations\n");
    for (k, (r, s)) in sweep.reports.iter().zip(&sweep.seeds).enumerate() {
        out.push_str(&format!(
            "{k},{s},{:e},{:e},{:e},{:e},{}\n",
            r.err_original_l2, r.err_flipped_l2, r.err_original_l1, r.err_flipped_l1, r.flipped.iterations
        ));
    }
    let n = sweep.reports.len().max(1) as f64;
    let mean = |f: fn(&FlipReport) -> f64| sweep.reports.iter().map(f).sum::<f64>() / n;
    out.push_str(&format!(
        "summary,,{:e},{:e},{:e},{:e},{}\n",
        mean(|r| r.err_original_l2),
        mean(|r| r.err_flipped_l2),
        mean(|r| r.err_original_l1),
        mean(|r| r.err_flipped_l1),
        sweep.reports.iter().map(|r| r.flipped.iterations).sum::<usize>()
    ));
    out
}

/// How `w^2` is built from `w^1`.
///
/// `level: None` picks the level allowing the largest count increase (ties
/// to the finer level). `count: None` frees the whole support outside the
/// chosen level and spends the freed weighted budget there; an explicit
/// count adds exactly that many entries, freeing support elsewhere from the
/// heaviest weights down as needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MoverSpec {
    pub level: Option<usize>,
    pub count: Option<usize>,
    /// Seed choosing which free positions of the level receive entries.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSpec {
    /// Absolute magnitude threshold.
    Fixed(f64),
    /// Thresholds relative to `max |w_j|`, tried in increasing order; the
    /// first whose binarized vector is recovered is used.
    Sweep(Vec<f64>),
}

impl Default for ThresholdSpec {
    fn default() -> Self {
        ThresholdSpec::Sweep(vec![1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneralizedFlipOptions {
    pub mover: MoverSpec,
    pub threshold: ThresholdSpec,
    pub norm: RecoveryNorm,
    /// Relative l2 error below which a vector counts as recovered.
    pub recover_tol: f64,
    pub eps: f64,
}

impl Default for GeneralizedFlipOptions {
    fn default() -> Self {
        GeneralizedFlipOptions {
            mover: MoverSpec::default(),
            threshold: ThresholdSpec::default(),
            norm: RecoveryNorm::L1,
            recover_tol: 1e-4,
            eps: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedFlipReport {
    pub report: FlipReport,
    pub threshold: f64,
    pub weighted_l0_w1: f64,
    pub weighted_l0_w2: f64,
    pub w1_level_counts: Vec<usize>,
    pub w2_level_counts: Vec<usize>,
    pub w1: Vec<C64>,
    pub w2: Vec<C64>,
}

fn binarize(w: &[C64], t: f64) -> Vec<C64> {
    w.iter()
        .map(|v| if v.norm() >= t && v.norm() > 0.0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
        .collect()
}

fn level_counts(x: &[C64], p: &SparsityPattern) -> Vec<usize> {
    (0..p.levels())
        .map(|l| {
            let r = p.level_range(l);
            x[r.start.min(x.len())..r.end.min(x.len())].iter().filter(|v| v.norm() != 0.0).count()
        })
        .collect()
}

struct Move {
    level: usize,
    added: Vec<usize>,
    removed: Vec<usize>,
}

fn plan_move(
    w1: &[C64],
    weights: &[f64],
    p: &SparsityPattern,
    level: usize,
    count: Option<usize>,
    seed: u64,
) -> Option<Move> {
    let r = p.level_range(level);
    let r = r.start.min(w1.len())..r.end.min(w1.len());
    let free: Vec<usize> = r.clone().filter(|&j| w1[j].norm() == 0.0).collect();
    let mut outside: Vec<usize> = (0..w1.len())
        .filter(|j| !r.contains(j) && w1[*j].norm() != 0.0)
        .collect();
    // Heaviest first; among equal weights the highest index goes first.
    outside.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(b.cmp(&a)));
    let mut free_sorted = free.clone();
    free_sorted.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));

    let (take, removed) = match count {
        None => {
            let freed: f64 = outside.iter().map(|&j| weights[j].powi(2)).sum();
            let mut spent = 0.0;
            let mut take = 0;
            for &j in &free_sorted {
                let c = weights[j].powi(2);
                if spent + c > freed * (1.0 + 1e-12) {
                    break;
                }
                spent += c;
                take += 1;
            }
            (take, outside)
        }
        Some(c) => {
            if c > free.len() {
                return None;
            }
            let cost: f64 = free_sorted[..c].iter().map(|&j| weights[j].powi(2)).sum();
            let mut freed = 0.0;
            let mut removed = Vec::new();
            for &j in &outside {
                if freed >= cost * (1.0 - 1e-12) {
                    break;
                }
                freed += weights[j].powi(2);
                removed.push(j);
            }
            if freed < cost * (1.0 - 1e-12) {
                return None;
            }
            (c, removed)
        }
    };
    // Positions receiving entries: the cheapest weight class, chosen at
    // random within it.
    let chosen: Vec<usize> = if take == 0 {
        Vec::new()
    } else {
        let cutoff = weights[free_sorted[take - 1]];
        let mut cheap: Vec<usize> = free_sorted.iter().copied().filter(|&j| weights[j] < cutoff).collect();
        let tier: Vec<usize> = free.iter().copied().filter(|&j| weights[j] == cutoff).collect();
        let need = take - cheap.len();
        let mut rng = rng_from_seed(seed);
        cheap.extend(choose_sorted(&mut rng, tier.len(), need).into_iter().map(|k| tier[k]));
        cheap.sort_unstable();
        cheap
    };
    Some(Move {
        level,
        added: chosen,
        removed,
    })
}

/// Generalized flip test for weighted sparsity.
///
/// Thresholds `w` and binarizes it to `w^1`, then builds a 0/1 vector `w^2`
/// with `||w^2||_{w,0} <= ||w^1||_{w,0}` but more non-zeros in one level,
/// and recovers both from their measurements.
pub fn generalized_flip_test(
    u: &SensingOperator,
    w: &[C64],
    weights: &Weights,
    p: &SparsityPattern,
    options: &GeneralizedFlipOptions,
    opts: &SolveOptions,
) -> Result<GeneralizedFlipReport> {
    let n = w.len();
    if weights.len() != n || u.n_in() != n {
        return Err(Error::LengthMismatch {
            expected: u.n_in(),
            got: if weights.len() != n { weights.len() } else { n },
        });
    }
    if !p.covers(n) {
        return Err(Error::PatternDoesNotCover { n });
    }
    let solver_weights = match options.norm {
        RecoveryNorm::L1 => None,
        RecoveryNorm::WeightedL1 => Some(weights),
    };
    let wmax = w.iter().map(|v| v.norm()).fold(0.0, f64::max);

    let candidates: Vec<f64> = match &options.threshold {
        ThresholdSpec::Fixed(t) => vec![*t],
        ThresholdSpec::Sweep(rel) => {
            let mut r = rel.clone();
            r.sort_by(f64::total_cmp);
            r.into_iter().map(|f| f * wmax).collect()
        }
    };
    let mut chosen = None;
    for t in candidates {
        let w1 = binarize(w, t);
        if w1.iter().all(|v| v.norm() == 0.0) {
            continue;
        }
        let res = recover(u, &w1, options.eps, solver_weights, opts)?;
        let err = rel(dist2(&w1, &res.x), norm2(&w1));
        if err < options.recover_tol || matches!(options.threshold, ThresholdSpec::Fixed(_)) {
            chosen = Some((t, w1, res));
            break;
        }
    }
    let (threshold, w1, original) = chosen.ok_or_else(|| {
        Error::ParameterInfeasible("no threshold in the sweep yields a recovered binarized vector".into())
    })?;

    let ws = weights.as_slice();
    let budget = crate::sparsity::weighted_norms(&w1, weights)?.0;
    let plan = match options.mover.level {
        Some(l) => {
            if l >= p.levels() {
                return Err(Error::MoverInfeasible(format!("level {l} does not exist")));
            }
            plan_move(&w1, ws, p, l, options.mover.count, options.mover.seed)
        }
        None => (0..p.levels())
            .filter_map(|l| plan_move(&w1, ws, p, l, options.mover.count, options.mover.seed))
            .filter(|m| m.added.len() > m.removed.iter().filter(|&&j| p.level_of(j) == Some(m.level)).count())
            .max_by(|a, b| {
                let gain = |m: &Move| m.added.len() as i64;
                gain(a).cmp(&gain(b)).then(a.level.cmp(&b.level))
            }),
    };
    let plan = plan.ok_or_else(|| {
        Error::MoverInfeasible("no level can take more entries within the weighted budget".into())
    })?;
    if options.mover.count.is_none() && plan.added.is_empty() {
        return Err(Error::MoverInfeasible(format!(
            "level {} cannot take any entry within the weighted budget",
            plan.level
        )));
    }
    let mut w2 = w1.clone();
    for &j in &plan.removed {
        w2[j] = C64::new(0.0, 0.0);
    }
    for &j in &plan.added {
        w2[j] = C64::new(1.0, 0.0);
    }
    let w2_l0 = crate::sparsity::weighted_norms(&w2, weights)?.0;
    if w2_l0 > budget * (1.0 + 1e-12) {
        return Err(Error::MoverInfeasible(format!("weighted budget exceeded: {w2_l0} > {budget}")));
    }

    let flipped = recover(u, &w2, options.eps, solver_weights, opts)?;
    let report = FlipReport {
        err_original_l1: rel(dist1(&w1, &original.x), norm1(&w1)),
        err_original_l2: rel(dist2(&w1, &original.x), norm2(&w1)),
        err_flipped_l1: rel(dist1(&w2, &flipped.x), norm1(&w2)),
        err_flipped_l2: rel(dist2(&w2, &flipped.x), norm2(&w2)),
        transform: FlipTransform::Mover {
            level: plan.level,
            added: plan.added.len(),
            removed: plan.removed.len(),
            budget,
        },
        original: (&original).into(),
        flipped: (&flipped).into(),
    };
    Ok(GeneralizedFlipReport {
        report,
        threshold,
        weighted_l0_w1: budget,
        weighted_l0_w2: w2_l0,
        w1_level_counts: level_counts(&w1, p),
        w2_level_counts: level_counts(&w2, p),
        w1,
        w2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vec;

    fn pat(s: &[usize], m: &[usize]) -> SparsityPattern {
        SparsityPattern::new(s.to_vec(), m.to_vec()).unwrap()
    }

    #[test]
    fn reverse_examples() {
        let q = make_permutation(PermutationKind::GlobalReverse, 4, None).unwrap();
        assert_eq!(q.apply(&[1, 2, 3, 4]), vec![4, 3, 2, 1]);
        let p = pat(&[1, 1], &[0, 2, 4]);
        let q = make_permutation(PermutationKind::LevelReverse, 4, Some(&p)).unwrap();
        assert_eq!(q.apply(&['a', 'b', 'c', 'd']), vec!['b', 'a', 'd', 'c']);
        for q in [q.clone(), make_permutation(PermutationKind::GlobalReverse, 7, None).unwrap()] {
            let twice = q.apply(&q.apply(&(0..q.len()).collect::<Vec<_>>()));
            assert_eq!(twice, (0..q.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn level_random_is_reproducible_and_level_preserving() {
        let p = pat(&[2, 3, 4], &[0, 4, 10, 20]);
        let a = make_permutation(PermutationKind::LevelRandom { seed: 9 }, 20, Some(&p)).unwrap();
        let b = make_permutation(PermutationKind::LevelRandom { seed: 9 }, 20, Some(&p)).unwrap();
        assert_eq!(a, b);
        assert!(a.preserves_levels(&p));
        assert!(!a.is_identity());
        let units = pat(&[1, 1, 1], &[0, 1, 2, 3]);
        assert!(make_permutation(PermutationKind::LevelRandom { seed: 1 }, 3, Some(&units))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn inverse_undoes_apply() {
        let q = Permutation::custom(vec![2, 0, 3, 1]).unwrap();
        let x = [10, 20, 30, 40];
        assert_eq!(q.apply_inverse(&q.apply(&x)), x.to_vec());
        assert_eq!(q.inverse().apply(&q.apply(&x)), x.to_vec());
        assert!(Permutation::custom(vec![0, 0]).is_err());
    }

    #[test]
    fn injective_operator_recovers_both() {
        let u = crate::operators::dft(8);
        let x = real_vec(&[1.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0, 0.5]);
        let q = make_permutation(PermutationKind::GlobalReverse, 8, None).unwrap();
        let r = run_flip_test(&u, &x, &q, &SolveOptions::default(), 0.0).unwrap();
        assert!(r.err_original_l2 < 1e-6 && r.err_flipped_l2 < 1e-6);
    }

    #[test]
    fn identity_permutation_is_exact_copy() {
        let u = SensingOperator::from_real_rows(&[vec![1.0, 0.5, 0.2], vec![0.0, 1.0, 0.3]]).unwrap();
        let x = real_vec(&[1.0, 0.0, 0.0]);
        let r = run_flip_test(&u, &x, &Permutation::identity(3), &SolveOptions::default(), 0.0).unwrap();
        assert_eq!(r.err_original_l2, r.err_flipped_l2);
        assert_eq!(r.err_original_l1, r.err_flipped_l1);
    }

    #[test]
    fn sweep_shape_and_zero_spread() {
        let u = crate::operators::dft(4);
        let x = real_vec(&[1.0, 0.0, 0.0, 2.0]);
        let units = pat(&[1, 1, 1, 1], &[0, 1, 2, 3, 4]);
        let s = permutation_sweep(&u, &x, &units, 3, 5, &SolveOptions::default(), 0.0).unwrap();
        assert_eq!(s.reports.len(), 3);
        assert_eq!(s.summary.stddev, 0.0);
        let csv = sweep_csv(&s);
        assert_eq!(csv.lines().count(), 1 + 3 + 1);
        assert!(csv.lines().last().unwrap().starts_with("summary,"));
    }

    #[test]
    fn mover_with_zero_count_keeps_support() {
        let u = crate::operators::dft(8);
        let w = real_vec(&[3.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
        let p = pat(&[2, 2], &[0, 4, 8]);
        let opts = GeneralizedFlipOptions {
            mover: MoverSpec { level: Some(1), count: Some(0), seed: 0 },
            ..Default::default()
        };
        let r = generalized_flip_test(&u, &w, &Weights::ones(8), &p, &opts, &SolveOptions::default()).unwrap();
        assert_eq!(r.w1, r.w2);
        assert_eq!(r.report.err_original_l2, r.report.err_flipped_l2);
        assert_eq!(r.w1, real_vec(&[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn mover_respects_weighted_budget() {
        let u = crate::operators::dft(16);
        let mut w = vec![C64::new(0.0, 0.0); 16];
        for j in [0, 1, 5, 12, 14] {
            w[j] = C64::new(1.0, 0.0);
        }
        let p = pat(&[4, 4, 8], &[0, 4, 8, 16]);
        let weights = Weights::per_level_power(p.boundaries(), 2.0).unwrap();
        let r = generalized_flip_test(&u, &w, &weights, &p, &Default::default(), &SolveOptions::default()).unwrap();
        assert!(r.weighted_l0_w2 <= r.weighted_l0_w1);
        let FlipTransform::Mover { level, added, .. } = r.report.transform else { panic!() };
        assert!(r.w2_level_counts[level] > r.w1_level_counts[level]);
        assert!(added > 0);
    }

    #[test]
    fn infeasible_mover() {
        let u = crate::operators::dft(4);
        let w = real_vec(&[1.0, 1.0, 0.0, 0.0]);
        let p = pat(&[2, 2], &[0, 2, 4]);
        let weights = Weights::new(vec![1.0, 1.0, 5.0, 5.0]).unwrap();
        let opts = GeneralizedFlipOptions {
            mover: MoverSpec { level: Some(1), count: Some(1), seed: 0 },
            ..Default::default()
        };
        assert!(matches!(
            generalized_flip_test(&u, &w, &weights, &p, &opts, &SolveOptions::default()),
            Err(Error::MoverInfeasible(_))
        ));
    }
}
