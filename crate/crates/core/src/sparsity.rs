//! Sparsity patterns `(s, M)` and everything derived from them.
//!
//! A pattern splits `0..M_l` into `l` consecutive levels; level `i` (0-based)
//! is `M[i]..M[i+1]` and may hold at most `s[i]` non-zeros. Magnitude ties
//! are always broken towards the lower index so every selection below is
//! deterministic.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct SparsityPattern {
    budgets: Vec<usize>,
    boundaries: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPattern {
    s: Vec<usize>,
    #[serde(rename = "M")]
    m: Vec<usize>,
}

impl TryFrom<RawPattern> for SparsityPattern {
    type Error = Error;
    fn try_from(raw: RawPattern) -> Result<Self> {
        SparsityPattern::new(raw.s, raw.m)
    }
}

impl From<SparsityPattern> for RawPattern {
    fn from(p: SparsityPattern) -> Self {
        RawPattern {
            s: p.budgets,
            m: p.boundaries,
        }
    }
}

impl SparsityPattern {
    /// Validates and builds a pattern from budgets `s` and boundaries `M`.
    pub fn new(s: Vec<usize>, m: Vec<usize>) -> Result<Self> {
        if s.is_empty() || m.len() != s.len() + 1 {
            return Err(Error::MalformedPattern {
                budgets: s.len(),
                boundaries: m.len(),
            });
        }
        if m[0] != 0 {
            return Err(Error::M0NotZero(m[0]));
        }
        for i in 1..m.len() {
            if m[i] <= m[i - 1] {
                return Err(Error::BoundaryNotIncreasing {
                    index: i,
                    previous: m[i - 1],
                    value: m[i],
                });
            }
        }
        for (i, &b) in s.iter().enumerate() {
            let width = m[i + 1] - m[i];
            if b > width {
                return Err(Error::BudgetExceedsLevelWidth {
                    level: i,
                    budget: b,
                    width,
                });
            }
        }
        Ok(SparsityPattern {
            budgets: s,
            boundaries: m,
        })
    }

    /// The one-level pattern `(s), (0, n)` used by the classical RIP.
    pub fn single_level(s: usize, n: usize) -> Result<Self> {
        Self::new(vec![s], vec![0, n])
    }

    /// Full pattern: every level's budget equals its width.
    pub fn full(boundaries: Vec<usize>) -> Result<Self> {
        let s = boundaries.windows(2).map(|w| w[1].saturating_sub(w[0])).collect();
        Self::new(s, boundaries)
    }

    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn levels(&self) -> usize {
        self.budgets.len()
    }

    /// `M_l`, the end of the last level.
    pub fn extent(&self) -> usize {
        *self.boundaries.last().expect("validated non-empty")
    }

    pub fn level_range(&self, level: usize) -> Range<usize> {
        self.boundaries[level]..self.boundaries[level + 1]
    }

    pub fn width(&self, level: usize) -> usize {
        self.boundaries[level + 1] - self.boundaries[level]
    }

    pub fn level_of(&self, index: usize) -> Option<usize> {
        if index >= self.extent() {
            return None;
        }
        Some(self.boundaries.partition_point(|&b| b <= index) - 1)
    }

    /// Ratio constant `eta = max_{i,j} s_i / s_j`, infinite when a budget is 0.
    pub fn ratio_constant(&self) -> RatioConstant {
        let min = *self.budgets.iter().min().expect("non-empty");
        let max = *self.budgets.iter().max().expect("non-empty");
        if min == 0 {
            RatioConstant::Infinite
        } else {
            RatioConstant::finite(max as u64, min as u64)
        }
    }

    /// Number of elements `s~ = s_1 + ... + s_l`.
    pub fn num_elements(&self) -> usize {
        self.budgets.iter().sum()
    }

    /// Whether the pattern covers a matrix with `n` columns: finite ratio
    /// constant and `M_l >= n`.
    pub fn covers(&self, n: usize) -> bool {
        self.ratio_constant().is_finite() && self.extent() >= n
    }

    /// Scaled pattern `(a s, M)` with each budget clamped to its level width.
    pub fn scaled(&self, a: usize) -> SparsityPattern {
        let budgets = self
            .budgets
            .iter()
            .enumerate()
            .map(|(i, &b)| (a.saturating_mul(b)).min(self.width(i)))
            .collect();
        SparsityPattern {
            budgets,
            boundaries: self.boundaries.clone(),
        }
    }

    /// Whether `x` is `(s, M)`-sparse, counting entries with modulus above
    /// `threshold` as non-zero (`threshold = 0` is the exact test).
    pub fn is_sparse_with_threshold(&self, x: &[C64], threshold: f64) -> bool {
        if x.len() > self.extent() {
            return false;
        }
        (0..self.levels()).all(|lvl| {
            let r = clip(self.level_range(lvl), x.len());
            let nnz = x[r].iter().filter(|v| v.norm() > threshold).count();
            nnz <= self.budgets[lvl]
        })
    }

    pub fn is_sparse(&self, x: &[C64]) -> bool {
        self.is_sparse_with_threshold(x, 0.0)
    }

    pub fn is_sparse_set(&self, indices: &[usize]) -> bool {
        let mut counts = vec![0usize; self.levels()];
        for &i in indices {
            match self.level_of(i) {
                Some(l) => counts[l] += 1,
                None => return false,
            }
        }
        counts.iter().zip(&self.budgets).all(|(c, b)| c <= b)
    }

    /// Per-level support sizes of a maximal `(s, M)`-sparse set in a vector
    /// of length `n`.
    pub(crate) fn maximal_counts(&self, n: usize) -> Vec<usize> {
        (0..self.levels())
            .map(|l| self.budgets[l].min(clip(self.level_range(l), n).len()))
            .collect()
    }

    /// Largest-magnitude `s_i` indices of each level, ties to the lower
    /// index. Only requires `len(values) <= M_l`.
    pub(crate) fn top_support_by<F: Fn(usize) -> f64>(&self, n: usize, key: F) -> Vec<usize> {
        let mut support = Vec::with_capacity(self.num_elements());
        for lvl in 0..self.levels() {
            let r = clip(self.level_range(lvl), n);
            let mut idx: Vec<usize> = r.collect();
            idx.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
            idx.truncate(self.budgets[lvl]);
            idx.sort_unstable();
            support.extend(idx);
        }
        support
    }

    /// Best `(s, M)`-sparse approximation in l1: keeps the `s_i` largest
    /// entries of each level and returns the kept support together with
    /// `sigma_{s,M}(x)_1`, the l1 mass of the dropped entries.
    pub fn best_approximation(&self, x: &[C64]) -> Result<(LevelSupport<'_>, f64)> {
        if !self.covers(x.len()) {
            return Err(Error::PatternDoesNotCover { n: x.len() });
        }
        let support = self.top_support_by(x.len(), |i| x[i].norm());
        let sigma = complement_l1(x, &support);
        Ok((
            LevelSupport {
                indices: support,
                pattern: self,
            },
            sigma,
        ))
    }

    /// `sigma_{s,M}(x)_1` without the covering check.
    pub fn sigma(&self, x: &[C64]) -> f64 {
        let support = self.top_support_by(x.len().min(self.extent()), |i| x[i].norm());
        complement_l1(x, &support)
    }

    /// Relative sparsity `s_k(eps)` per level.
    ///
    /// `s(eps)` is the smallest count `k` such that the l2 norm of the `k`
    /// largest-magnitude coefficients reaches `eps * ||w||_2`; the result
    /// splits those `k` coefficients by level.
    pub fn relative_sparsity(&self, w: &[C64], eps: f64) -> Result<Vec<usize>> {
        if !(0.0..=1.0).contains(&eps) || eps.is_nan() {
            return Err(Error::EpsilonOutOfRange(eps));
        }
        if !self.covers(w.len()) {
            return Err(Error::PatternDoesNotCover { n: w.len() });
        }
        let order = magnitude_order(w);
        let energies: Vec<f64> = order.iter().map(|&i| w[i].norm_sqr()).collect();
        let total: f64 = energies.iter().sum();
        let target = eps * eps * total;
        let mut cum = 0.0;
        let mut count = 0;
        if target > 0.0 {
            for (k, e) in energies.iter().enumerate() {
                cum += e;
                if cum >= target {
                    count = k + 1;
                    break;
                }
            }
            if count == 0 {
                count = order.len();
            }
        }
        let mut per_level = vec![0usize; self.levels()];
        for &i in &order[..count] {
            per_level[self.level_of(i).expect("covered")] += 1;
        }
        Ok(per_level)
    }

    /// Smallest `X` such that every `(s, M)`-sparse vector is
    /// `(omega, X)`-weighted sparse: per level, the sum of the `s_i` largest
    /// squared weights.
    pub fn max_weighted_l0(&self, weights: &Weights) -> Result<f64> {
        let n = weights.len();
        if !self.covers(n) {
            return Err(Error::PatternDoesNotCover { n });
        }
        let w = weights.as_slice();
        let support = self.top_support_by(n, |i| w[i]);
        Ok(support.iter().map(|&i| w[i] * w[i]).sum())
    }
}

impl fmt::Display for SparsityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={:?}, M={:?}", self.budgets, self.boundaries)
    }
}

fn clip(r: Range<usize>, n: usize) -> Range<usize> {
    r.start.min(n)..r.end.min(n)
}

fn complement_l1(x: &[C64], support: &[usize]) -> f64 {
    let mut keep = vec![false; x.len()];
    for &i in support {
        keep[i] = true;
    }
    // Summed in index order so the value does not depend on the support order.
    x.iter()
        .zip(&keep)
        .filter(|(_, &k)| !k)
        .map(|(v, _)| v.norm())
        .sum()
}

/// Indices sorted by decreasing modulus, ties to the lower index.
pub fn magnitude_order(x: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[b].norm().total_cmp(&x[a].norm()).then(a.cmp(&b)));
    idx
}

/// Exact ratio constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RatioConstant {
    Finite { num: u64, den: u64 },
    Infinite,
}

impl RatioConstant {
    fn finite(num: u64, den: u64) -> Self {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        RatioConstant::Finite {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RatioConstant::Finite { .. })
    }

    pub fn value(&self) -> f64 {
        match *self {
            RatioConstant::Finite { num, den } => num as f64 / den as f64,
            RatioConstant::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for RatioConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioConstant::Finite { num, den: 1 } => write!(f, "{num}"),
            RatioConstant::Finite { num, den } => write!(f, "{num}/{den}"),
            RatioConstant::Infinite => write!(f, "inf"),
        }
    }
}

/// Per-coordinate weights, each at least 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weights(Vec<f64>);

impl TryFrom<Vec<f64>> for Weights {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Weights::new(v)
    }
}

impl From<Weights> for Vec<f64> {
    fn from(w: Weights) -> Self {
        w.0
    }
}

impl Weights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = w
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 1.0)
        {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(Weights(w))
    }

    pub fn ones(n: usize) -> Self {
        Weights(vec![1.0; n])
    }

    /// Weight `base^(i+1)` on every coordinate of level `i` (levels counted
    /// from 1 in the exponent, so the coarsest level gets `base`).
    pub fn per_level_power(pattern_boundaries: &[usize], base: f64) -> Result<Self> {
        let mut w = Vec::new();
        for (lvl, win) in pattern_boundaries.windows(2).enumerate() {
            let v = base.powi(lvl as i32 + 1);
            w.extend(std::iter::repeat_n(v, win[1] - win[0]));
        }
        Weights::new(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Weighted l0 and l1 norms:
/// `(sum_{j in supp x} w_j^2, sum_j w_j |x_j|)`.
pub fn weighted_norms(x: &[C64], weights: &Weights) -> Result<(f64, f64)> {
    if x.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            got: x.len(),
        });
    }
    let w = weights.as_slice();
    let l0 = x
        .iter()
        .zip(w)
        .filter(|(v, _)| v.norm() != 0.0)
        .map(|(_, wj)| wj * wj)
        .sum();
    let l1 = x.iter().zip(w).map(|(v, wj)| wj * v.norm()).sum();
    Ok((l0, l1))
}

/// A support that is `(s, M)`-sparse for the attached pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSupport<'p> {
    indices: Vec<usize>,
    pattern: &'p SparsityPattern,
}

impl<'p> LevelSupport<'p> {
    pub fn new(mut indices: Vec<usize>, pattern: &'p SparsityPattern) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= pattern.extent()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: pattern.extent(),
            });
        }
        if !pattern.is_sparse_set(&indices) {
            return Err(Error::PatternDoesNotCover { n: indices.len() });
        }
        Ok(LevelSupport { indices, pattern })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn pattern(&self) -> &SparsityPattern {
        self.pattern
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.indices
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vec;
    use crate::rng::{gaussian_vec, rng_from_seed, uniform};

    fn pat(s: &[usize], m: &[usize]) -> SparsityPattern {
        SparsityPattern::new(s.to_vec(), m.to_vec()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            SparsityPattern::new(vec![3], vec![0, 2]),
            Err(Error::BudgetExceedsLevelWidth { .. })
        ));
        assert!(matches!(
            SparsityPattern::new(vec![1, 1], vec![0, 2, 2]),
            Err(Error::BoundaryNotIncreasing { .. })
        ));
        assert!(matches!(
            SparsityPattern::new(vec![1], vec![1, 2]),
            Err(Error::M0NotZero(1))
        ));
        assert!(SparsityPattern::new(vec![], vec![0]).is_err());
        assert!(SparsityPattern::new(vec![1], vec![0, 1]).is_ok());
    }

    #[test]
    fn ratio_constant_values() {
        let c = 10;
        let p = pat(&[1, c * c], &[0, c, c + c * c]);
        assert_eq!(p.ratio_constant(), RatioConstant::Finite { num: 100, den: 1 });
        assert_eq!(pat(&[2, 2, 2], &[0, 2, 4, 6]).ratio_constant().value(), 1.0);
        assert_eq!(pat(&[1, 0], &[0, 1, 2]).ratio_constant(), RatioConstant::Infinite);
        assert_eq!(pat(&[2, 3], &[0, 4, 8]).ratio_constant().to_string(), "3/2");
    }

    #[test]
    fn num_elements_and_covering() {
        assert_eq!(pat(&[1, 100], &[0, 10, 110]).num_elements(), 101);
        assert_eq!(pat(&[0, 0], &[0, 1, 2]).num_elements(), 0);
        assert_eq!(pat(&[16, 1], &[0, 16, 40]).num_elements(), 17);
        assert!(!pat(&[1, 0], &[0, 1, 2]).covers(2));
        assert!(!pat(&[1], &[0, 1]).covers(3));
        assert!(pat(&[1, 1], &[0, 1, 2]).covers(2));
    }

    #[test]
    fn scaling_clamps_to_width() {
        assert_eq!(pat(&[1, 2], &[0, 2, 4]).scaled(3).budgets(), &[2, 2]);
        assert_eq!(pat(&[1, 1], &[0, 4, 8]).scaled(2).budgets(), &[2, 2]);
        let p = pat(&[1, 3, 0], &[0, 2, 6, 9]);
        assert_eq!(p.scaled(1), p);
    }

    #[test]
    fn membership() {
        let c = 4usize;
        let p = pat(&[1, c * c], &[0, c, c + c * c]);
        let mut z1 = vec![0.0; c + c * c];
        z1[0] = c as f64;
        for v in z1.iter_mut().skip(c) {
            *v = 1.0;
        }
        assert!(p.is_sparse(&real_vec(&z1)));
        assert!(p.is_sparse(&real_vec(&[0.0; 20])));
        assert!(!pat(&[1, 0], &[0, 1, 2]).is_sparse(&real_vec(&[1.0, 1.0])));
        assert!(pat(&[1, 0], &[0, 1, 2]).is_sparse_with_threshold(&real_vec(&[1.0, 1e-9]), 1e-6));
    }

    #[test]
    fn best_approximation_keeps_level_maxima() {
        let p = pat(&[1, 1], &[0, 2, 4]);
        let x = real_vec(&[3.0, 1.0, 2.0, 0.5]);
        let (s, sigma) = p.best_approximation(&x).unwrap();
        assert_eq!(s.indices(), &[0, 2]);
        assert!((sigma - 1.5).abs() < 1e-15);
        let sparse = real_vec(&[3.0, 0.0, 0.0, 0.5]);
        assert_eq!(p.best_approximation(&sparse).unwrap().1, 0.0);
        assert!(pat(&[1, 0], &[0, 1, 2]).best_approximation(&x[..2]).is_err());
    }

    #[test]
    fn best_approximation_ties_go_low() {
        let p = pat(&[1], &[0, 3]);
        let (s, _) = p.best_approximation(&real_vec(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(s.indices(), &[0]);
    }

    /// Every (s,M)-sparse support, by brute force over all subsets.
    fn all_sparse_subsets(p: &SparsityPattern, n: usize) -> Vec<Vec<usize>> {
        (0u32..(1 << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| p.is_sparse_set(s))
            .collect()
    }

    #[test]
    fn best_approximation_matches_exhaustive_search() {
        let mut rng = rng_from_seed(11);
        for trial in 0..60 {
            let n = 4 + trial % 9;
            let levels = 1 + trial % 3;
            let mut m = vec![0];
            for l in 1..levels {
                let next = (n * l / levels).max(m[l - 1] + 1);
                m.push(next);
            }
            m.push(n);
            let s: Vec<usize> = m
                .windows(2)
                .map(|w| 1 + (trial % (w[1] - w[0])).min(w[1] - w[0] - 1))
                .collect();
            let p = SparsityPattern::new(s, m).unwrap();
            let x = real_vec(&gaussian_vec(&mut rng, n));
            let brute = all_sparse_subsets(&p, n)
                .iter()
                .map(|sup| complement_l1(&x, sup))
                .fold(f64::INFINITY, f64::min);
            let (_, sigma) = p.best_approximation(&x).unwrap();
            assert!((sigma - brute).abs() < 1e-12, "trial {trial}");
        }
    }

    #[test]
    fn weighted_l0_bound_matches_exhaustive_search() {
        let mut rng = rng_from_seed(5);
        for trial in 0..30 {
            let n = 10;
            let p = pat(&[1 + trial % 3, 2, 1], &[0, 3, 7, 10]);
            let w = Weights::new((0..n).map(|_| 1.0 + 4.0 * uniform(&mut rng)).collect()).unwrap();
            let brute = all_sparse_subsets(&p, n)
                .iter()
                .map(|sup| sup.iter().map(|&i| w.as_slice()[i].powi(2)).sum::<f64>())
                .fold(0.0, f64::max);
            assert!((p.max_weighted_l0(&w).unwrap() - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_l0_examples() {
        let p = pat(&[1, 1], &[0, 2, 4]);
        let w = Weights::per_level_power(p.boundaries(), 2.0).unwrap();
        assert_eq!(w.as_slice(), &[2.0, 2.0, 4.0, 4.0]);
        assert_eq!(p.max_weighted_l0(&w).unwrap(), 20.0);
        let q = pat(&[2, 1, 3], &[0, 3, 5, 9]);
        assert_eq!(q.max_weighted_l0(&Weights::ones(9)).unwrap(), 6.0);
    }

    #[test]
    fn weighted_norm_examples() {
        let w = Weights::new(vec![2.0, 3.0, 5.0]).unwrap();
        assert_eq!(weighted_norms(&real_vec(&[1.0, 0.0, 1.0]), &w).unwrap(), (29.0, 7.0));
        assert_eq!(weighted_norms(&real_vec(&[0.0; 3]), &w).unwrap(), (0.0, 0.0));
        let x = real_vec(&[-1.5, 0.0, 2.0]);
        assert_eq!(weighted_norms(&x, &Weights::ones(3)).unwrap(), (2.0, 3.5));
        assert!(weighted_norms(&x, &Weights::ones(2)).is_err());
        assert!(Weights::new(vec![0.5]).is_err());
    }

    #[test]
    fn relative_sparsity_basics() {
        let p = pat(&[1, 1, 2], &[0, 1, 2, 4]);
        let w = real_vec(&[4.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.relative_sparsity(&w, 0.5).unwrap(), vec![1, 0, 0]);
        assert_eq!(p.relative_sparsity(&w, 0.0).unwrap(), vec![0, 0, 0]);
        assert!(p.relative_sparsity(&w, 1.5).is_err());
        let w2 = real_vec(&[1.0, 2.0, 0.5, 2.0]);
        assert_eq!(p.relative_sparsity(&w2, 1.0).unwrap(), vec![1, 1, 2]);
    }

    #[test]
    fn relative_sparsity_matches_sort_oracle() {
        let mut rng = rng_from_seed(21);
        let p = pat(&[1, 1, 2, 4, 8], &[0, 1, 2, 4, 8, 16]);
        for _ in 0..50 {
            let w = real_vec(&gaussian_vec(&mut rng, 16));
            let eps = uniform(&mut rng);
            let got = p.relative_sparsity(&w, eps).unwrap();
            // Oracle: grow the prefix of the sorted magnitudes until its
            // energy ratio reaches eps^2.
            let mut mags: Vec<(f64, usize)> = w.iter().enumerate().map(|(i, v)| (v.norm(), i)).collect();
            mags.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
            let total: f64 = mags.iter().map(|(m, _)| m * m).sum();
            let mut k = 0;
            while (mags[..k].iter().map(|(m, _)| m * m).sum::<f64>()).sqrt() < eps * total.sqrt() {
                k += 1;
            }
            let mut expect = vec![0; 5];
            for &(_, i) in &mags[..k] {
                expect[p.level_of(i).unwrap()] += 1;
            }
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn serde_roundtrip_validates() {
        let p = pat(&[1, 2], &[0, 2, 4]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"s":[1,2],"M":[0,2,4]}"#);
        let back: SparsityPattern = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<SparsityPattern>(r#"{"s":[3],"M":[0,2]}"#).is_err());
    }
}
