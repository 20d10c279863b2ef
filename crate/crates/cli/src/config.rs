//! Versioned JSON experiment configuration.
//!
//! Every config file is a JSON object with `"version": 1` and a `seed`.
//! Randomized components take an explicit `seed` or derive one from the
//! top-level seed and their position in the file; either way the seed used
//! is recorded in the provenance block.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use levelcs::counterexamples::{
    construct_eta_dependence, construct_l2_sharpness_with_tau, construct_l_dependence, covering_counterexamples,
    CounterexampleInstance, SharpnessVariant, VerifyOptions,
};
use levelcs::fliptest::GeneralizedFlipOptions;
use levelcs::linalg::{norm2, real_vec};
use levelcs::operators::{
    dft_ordered, dwt, dyadic_bands, idwt, multilevel_scheme, rank_one_deflation, reorder, subsample, tensor2d,
    wht_ordered, DftOrdering, WaveletFamily, WaveletSpec, WhtOrdering,
};
use levelcs::rng::{choose_sorted, derive_seed, gaussian, rng_from_seed};
use levelcs::solver::SolveOptions;
use levelcs::{SamplingScheme, SensingOperator, SparsityPattern, Weights, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ingest;

pub const CONFIG_VERSION: u64 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A parsed config file with its raw bytes and directory.
pub struct Loaded<T> {
    pub config: T,
    pub sha256: String,
    pub base: PathBuf,
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<Loaded<T>> {
    let raw = std::fs::read(path).with_context(|| format!("reading config {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_slice(&raw).with_context(|| format!("malformed JSON in {}", path.display()))?;
    match value.get("version").and_then(serde_json::Value::as_u64) {
        Some(CONFIG_VERSION) => {}
        Some(v) => bail!("unsupported config version {v} (expected {CONFIG_VERSION})"),
        None => bail!("config is missing \"version\": {CONFIG_VERSION}"),
    }
    let config = serde_json::from_value(value).with_context(|| format!("invalid config {}", path.display()))?;
    Ok(Loaded {
        config,
        sha256: sha256_hex(&raw),
        base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

/// Resolution state shared by the builders: relative paths, seeds and the
/// inputs read along the way.
pub struct Ctx {
    pub base: PathBuf,
    pub seed: u64,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: BTreeMap<String, String>,
}

impl Ctx {
    pub fn new(base: PathBuf, seed: u64) -> Self {
        Ctx {
            base,
            seed,
            seeds: BTreeMap::new(),
            inputs: BTreeMap::new(),
        }
    }

    pub fn seed_for(&mut self, label: &str, explicit: Option<u64>) -> u64 {
        let s = explicit.unwrap_or_else(|| {
            let h = Sha256::digest(label.as_bytes());
            derive_seed(self.seed, u64::from_le_bytes(h[..8].try_into().unwrap()))
        });
        self.seeds.insert(label.to_string(), s);
        s
    }

    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let full = if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base.join(path)
        };
        let bytes = std::fs::read(&full).with_context(|| format!("reading {}", full.display()))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }
}

/// Level boundaries: an explicit list or those of a wavelet decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Boundaries {
    Explicit(Vec<usize>),
    Wavelet { wavelet: WaveletFamily, levels: usize },
}

impl Boundaries {
    pub fn resolve(&self, n: usize) -> Result<Vec<usize>> {
        match self {
            Boundaries::Explicit(m) => Ok(m.clone()),
            Boundaries::Wavelet { wavelet, levels } => Ok(WaveletSpec::new(*wavelet, *levels).level_boundaries(n)?),
        }
    }
}

/// `s` defaults to the level widths.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    #[serde(default)]
    pub s: Option<Vec<usize>>,
    #[serde(rename = "M")]
    pub m: Boundaries,
}

impl PatternSpec {
    pub fn build(&self, n: usize) -> Result<SparsityPattern> {
        let m = self.m.resolve(n)?;
        Ok(match &self.s {
            Some(s) => SparsityPattern::new(s.clone(), m)?,
            None => SparsityPattern::full(m)?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SamplingSpec {
    Indices {
        indices: Vec<usize>,
    },
    /// Uniform draws per band; `fractions[j]` asks for `ceil(f * width)`.
    Multilevel {
        boundaries: Boundaries,
        #[serde(default)]
        counts: Option<Vec<usize>>,
        #[serde(default)]
        fractions: Option<Vec<f64>>,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl SamplingSpec {
    fn build(&self, n: usize, ctx: &mut Ctx, label: &str) -> Result<SamplingScheme> {
        match self {
            SamplingSpec::Indices { indices } => Ok(SamplingScheme::from_indices(n, indices.clone())?),
            SamplingSpec::Multilevel {
                boundaries,
                counts,
                fractions,
                seed,
            } => {
                let bands = dyadic_bands(&boundaries.resolve(n)?);
                let counts = match (counts, fractions) {
                    (Some(c), None) => c.clone(),
                    (None, Some(f)) => {
                        if f.len() != bands.len() {
                            bail!("{label}: {} fractions for {} bands", f.len(), bands.len());
                        }
                        bands
                            .iter()
                            .zip(f)
                            .map(|(b, &f)| {
                                if !(0.0..=1.0).contains(&f) {
                                    bail!("{label}: sampling fraction {f} outside [0, 1]");
                                }
                                Ok(((f * b.len() as f64).ceil() as usize).min(b.len()))
                            })
                            .collect::<Result<_>>()?
                    }
                    _ => bail!("{label}: give exactly one of \"counts\" and \"fractions\""),
                };
                let seed = ctx.seed_for(label, *seed);
                Ok(multilevel_scheme(n, &bands, &counts, seed)?)
            }
        }
    }
}

/// Operators listed in `compose.chain` are applied last-to-first, so
/// `[A, B]` is `A ∘ B`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Identity {
        n: usize,
    },
    Dft {
        n: usize,
        #[serde(default)]
        ordering: DftOrdering,
    },
    Wht {
        n: usize,
        #[serde(default)]
        ordering: WhtOrdering,
    },
    Dwt {
        n: usize,
        wavelet: WaveletFamily,
        levels: usize,
    },
    Idwt {
        n: usize,
        wavelet: WaveletFamily,
        levels: usize,
    },
    /// Dense matrix from a CSV (`re,im` pairs unless `real`) or binary file.
    Matrix {
        path: PathBuf,
        #[serde(default)]
        real: bool,
    },
    /// `scale (I - k k*)` with `k` the normalized `kernel`.
    Deflation {
        kernel: Vec<f64>,
        #[serde(default = "one")]
        scale: f64,
    },
    Reorder {
        map: Vec<usize>,
    },
    Tensor {
        first: Box<OperatorSpec>,
        second: Box<OperatorSpec>,
    },
    Compose {
        chain: Vec<OperatorSpec>,
    },
    /// Row subsampling; `normalize` rescales by `sqrt(rows / kept)`.
    Subsample {
        of: Box<OperatorSpec>,
        sampling: SamplingSpec,
        #[serde(default)]
        normalize: bool,
    },
    Scaled {
        of: Box<OperatorSpec>,
        factor: f64,
    },
    Counterexample(CounterexampleParams),
}

fn one() -> f64 {
    1.0
}

pub struct BuiltOperator {
    pub op: SensingOperator,
    /// Set when the operator is a counterexample instance.
    pub instance: Option<CounterexampleInstance>,
}

impl OperatorSpec {
    pub fn build(&self, ctx: &mut Ctx) -> Result<BuiltOperator> {
        self.build_at(ctx, "operator")
    }

    fn build_at(&self, ctx: &mut Ctx, label: &str) -> Result<BuiltOperator> {
        let plain = |op: SensingOperator| BuiltOperator { op, instance: None };
        Ok(match self {
            OperatorSpec::Identity { n } => plain(SensingOperator::identity(*n)),
            OperatorSpec::Dft { n, ordering } => plain(dft_ordered(*n, *ordering)),
            OperatorSpec::Wht { n, ordering } => plain(wht_ordered(*n, *ordering)?),
            OperatorSpec::Dwt { n, wavelet, levels } => plain(dwt(WaveletSpec::new(*wavelet, *levels), *n)?),
            OperatorSpec::Idwt { n, wavelet, levels } => plain(idwt(WaveletSpec::new(*wavelet, *levels), *n)?),
            OperatorSpec::Matrix { path, real } => {
                let bytes = ctx.read(path)?;
                plain(SensingOperator::from_dense(ingest::matrix_from_bytes(path, &bytes, *real)?))
            }
            OperatorSpec::Deflation { kernel, scale } => {
                let k = real_vec(kernel);
                let nk = norm2(&k);
                if nk == 0.0 || !nk.is_finite() {
                    bail!("{label}: deflation kernel must be a nonzero finite vector");
                }
                let k: Vec<C64> = k.iter().map(|v| v / nk).collect();
                plain(rank_one_deflation(&k, *scale)?)
            }
            OperatorSpec::Reorder { map } => plain(reorder(map.clone())?),
            OperatorSpec::Tensor { first, second } => {
                let a = first.build_at(ctx, &format!("{label}.first"))?.op;
                let b = second.build_at(ctx, &format!("{label}.second"))?.op;
                plain(tensor2d(&a, &b))
            }
            OperatorSpec::Compose { chain } => {
                let mut ops = chain
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build_at(ctx, &format!("{label}.chain[{i}]")).map(|b| b.op))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .rev();
                let mut acc = ops.next().ok_or_else(|| anyhow!("{label}: empty compose chain"))?;
                for outer in ops {
                    acc = outer.compose(&acc)?;
                }
                plain(acc)
            }
            OperatorSpec::Subsample { of, sampling, normalize } => {
                let inner = of.build_at(ctx, &format!("{label}.of"))?.op;
                let scheme = sampling.build(inner.n_out(), ctx, &format!("{label}.sampling"))?;
                let mut op = subsample(&inner, &scheme)?;
                if *normalize {
                    if scheme.is_empty() {
                        bail!("{label}: cannot normalize an empty sampling scheme");
                    }
                    op = op.scaled((inner.n_out() as f64 / scheme.len() as f64).sqrt());
                }
                plain(op)
            }
            OperatorSpec::Scaled { of, factor } => plain(of.build_at(ctx, &format!("{label}.of"))?.op.scaled(*factor)),
            OperatorSpec::Counterexample(params) => {
                let mut instances = params.instances()?;
                if instances.len() != 1 {
                    bail!("{label}: \"{}\" names {} instances; pick one", params.name, instances.len());
                }
                let inst = instances.remove(0);
                BuiltOperator {
                    op: SensingOperator::from_dense(inst.u.clone()),
                    instance: Some(inst),
                }
            }
        })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleParams {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<SharpnessVariant>,
}

pub const COUNTEREXAMPLE_NAMES: &[&str] = &[
    "covering-eta",
    "covering-infinite-ratio",
    "covering-short-pattern",
    "eta-dependence",
    "l-dependence",
    "l2-sharp",
    "l2-sharp-eta",
    "l2-sharp-levels",
];

impl CounterexampleParams {
    pub fn instances(&self) -> Result<Vec<CounterexampleInstance>> {
        let a = self.a.unwrap_or(1);
        let covering = |name: &str| -> Vec<CounterexampleInstance> {
            covering_counterexamples().into_iter().filter(|i| i.name == name).collect()
        };
        let sharp = |default_variant: SharpnessVariant| -> Result<Vec<CounterexampleInstance>> {
            Ok(vec![construct_l2_sharpness_with_tau(
                a,
                self.c.unwrap_or(8),
                self.rho.unwrap_or(0.5),
                self.tau.unwrap_or(std::f64::consts::SQRT_2),
                self.variant.unwrap_or(default_variant),
            )?])
        };
        Ok(match self.name.as_str() {
            "covering-eta" => covering_counterexamples(),
            "covering-infinite-ratio" | "covering-short-pattern" => covering(&self.name),
            "eta-dependence" => vec![construct_eta_dependence(a, self.c.unwrap_or(10))?],
            "l-dependence" => vec![construct_l_dependence(a, self.c.unwrap_or(10))?],
            "l2-sharp" | "l2-sharp-eta" => sharp(SharpnessVariant::Eta)?,
            "l2-sharp-levels" => {
                if self.variant == Some(SharpnessVariant::Eta) {
                    bail!("l2-sharp-levels conflicts with variant \"eta\"");
                }
                sharp(SharpnessVariant::Levels)?
            }
            other => bail!(
                "unknown counterexample \"{other}\"; known names: {}",
                COUNTEREXAMPLE_NAMES.join(", ")
            ),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    /// `sin t` on `[0, 0.3]`, `-10 cos t` on `(0.3, 0.8]`, `9` after.
    Piecewise,
}

impl TestFunction {
    fn eval(self, t: f64) -> f64 {
        match self {
            TestFunction::Piecewise => {
                if t <= 0.3 {
                    t.sin()
                } else if t <= 0.8 {
                    -10.0 * t.cos()
                } else {
                    9.0
                }
            }
        }
    }
}

/// A vector; `transform` (when given) is applied after loading.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SignalSpec {
    File {
        path: PathBuf,
        #[serde(default)]
        transform: Option<OperatorSpec>,
    },
    Inline {
        values: Vec<f64>,
        #[serde(default)]
        transform: Option<OperatorSpec>,
    },
    /// Gaussian values on a uniformly drawn support filling each level's budget.
    RandomSparse {
        pattern: PatternSpec,
        n: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// `f(i / n)` for `i` in `0..n`.
    Function {
        name: TestFunction,
        n: usize,
        #[serde(default)]
        transform: Option<OperatorSpec>,
    },
}

impl SignalSpec {
    pub fn build(&self, ctx: &mut Ctx, label: &str) -> Result<Vec<C64>> {
        let (x, transform) = match self {
            SignalSpec::File { path, transform } => {
                let bytes = ctx.read(path)?;
                (ingest::vector_from_bytes(path, &bytes)?, transform)
            }
            SignalSpec::Inline { values, transform } => (real_vec(values), transform),
            SignalSpec::RandomSparse { pattern, n, seed } => {
                let p = pattern.build(*n)?;
                if !p.covers(*n) {
                    bail!("{label}: pattern does not cover length {n}");
                }
                let mut rng = rng_from_seed(ctx.seed_for(label, *seed));
                let mut x = vec![C64::new(0.0, 0.0); *n];
                for l in 0..p.levels() {
                    let r = p.level_range(l);
                    for j in choose_sorted(&mut rng, r.len(), p.budgets()[l]) {
                        x[r.start + j] = C64::new(gaussian(&mut rng), 0.0);
                    }
                }
                return Ok(x);
            }
            SignalSpec::Function { name, n, transform } => (
                (0..*n).map(|i| C64::new(name.eval(i as f64 / *n as f64), 0.0)).collect(),
                transform,
            ),
        };
        match transform {
            None => Ok(x),
            Some(t) => {
                let op = t.build_at(ctx, &format!("{label}.transform"))?.op;
                Ok(op.try_apply(&x)?)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    /// `base^(level + 1)` on each level of the pattern.
    PerLevel { per_level_base: f64 },
    Values { values: Vec<f64> },
}

impl WeightSpec {
    pub fn build(&self, n: usize, pattern: Option<&SparsityPattern>) -> Result<Weights> {
        let w = match self {
            WeightSpec::PerLevel { per_level_base } => {
                let p = pattern.ok_or_else(|| anyhow!("per-level weights need a pattern"))?;
                Weights::per_level_power(p.boundaries(), *per_level_base)?
            }
            WeightSpec::Values { values } => Weights::new(values.clone())?,
        };
        if w.len() != n {
            bail!("{} weights for a vector of length {n}", w.len());
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CheckSpec {
    /// `delta_{a s, M}` by enumeration of all maximal supports.
    RiplExact {
        #[serde(default)]
        scale: Option<usize>,
        #[serde(default)]
        cap: Option<u64>,
    },
    /// Closed form for rank-one deflations.
    RiplAnalytic {
        #[serde(default)]
        scale: Option<usize>,
    },
    RiplLowerBound {
        #[serde(default)]
        scale: Option<usize>,
        #[serde(default = "default_budget")]
        budget: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    RipExact {
        s: usize,
    },
    Threshold {},
    RecoveryCondition {},
    KernelCheck {},
    NspFalsify {
        rho: f64,
        tau: f64,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    ErrorBounds {
        rho: f64,
        tau: f64,
        #[serde(default)]
        sigma: f64,
        #[serde(default)]
        eps: f64,
    },
}

fn default_budget() -> usize {
    64
}

fn default_trials() -> usize {
    10_000
}

fn default_checks() -> Vec<CheckSpec> {
    vec![CheckSpec::RiplExact { scale: None, cap: None }]
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyExpect {
    #[serde(default)]
    pub delta_at_most: Option<f64>,
    #[serde(default)]
    pub delta_at_least: Option<f64>,
    #[serde(default)]
    pub recovery_holds: Option<bool>,
    #[serde(default)]
    pub nsp_holds: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    pub version: u64,
    #[serde(default)]
    pub seed: u64,
    pub operator: OperatorSpec,
    /// Defaults to the instance pattern for counterexample operators.
    #[serde(default)]
    pub pattern: Option<PatternSpec>,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub expect: CertifyExpect,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PermutationSpec {
    Identity {},
    GlobalReverse {},
    LevelReverse {},
    LevelRandom {
        #[serde(default)]
        seed: Option<u64>,
    },
    Custom {
        map: Vec<usize>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FlipMode {
    Single {
        permutation: PermutationSpec,
    },
    /// `count` level-preserving random permutations.
    Sweep {
        count: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    Generalized {
        #[serde(default)]
        weights: Option<WeightSpec>,
        #[serde(default)]
        options: GeneralizedFlipOptions,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipExpect {
    /// `err_flip_l2 >= ratio * err_orig_l2` (for sweeps: the mean).
    #[serde(default)]
    pub flip_ratio_at_least: Option<f64>,
    #[serde(default)]
    pub original_error_at_most: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FliptestConfig {
    pub version: u64,
    #[serde(default)]
    pub seed: u64,
    pub operator: OperatorSpec,
    pub signal: SignalSpec,
    #[serde(default)]
    pub pattern: Option<PatternSpec>,
    pub test: FlipMode,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub solver: SolveOptions,
    #[serde(default)]
    pub expect: FlipExpect,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "from", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasurementSpec {
    /// Complex measurement vector `y`.
    File { path: PathBuf },
    /// `y = U x + e` with `||e||_2 = noise`.
    Simulate {
        signal: SignalSpec,
        #[serde(default)]
        noise: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemSpec {
    Bp {},
    Bpdn {
        eps: f64,
    },
    Weighted {
        #[serde(default)]
        eps: f64,
        weights: WeightSpec,
        #[serde(default)]
        pattern: Option<PatternSpec>,
    },
}

/// Renders `synthesis(x_hat)` (or `x_hat`) as a `rows x cols` 8-bit PGM,
/// clipping real parts to `[0, 1]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub synthesis: Option<OperatorSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverConfig {
    pub version: u64,
    #[serde(default)]
    pub seed: u64,
    pub operator: OperatorSpec,
    pub measurements: MeasurementSpec,
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolveOptions,
    #[serde(default)]
    pub render: Option<RenderSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkepsConfig {
    pub version: u64,
    #[serde(default)]
    pub seed: u64,
    pub signal: SignalSpec,
    pub boundaries: Boundaries,
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    pub version: u64,
    #[serde(default)]
    pub seed: u64,
    pub pattern: PatternSpec,
    /// Signal length; defaults to the last boundary.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub weights: Option<WeightSpec>,
    #[serde(default)]
    pub signal: Option<SignalSpec>,
    #[serde(default)]
    pub scale: Vec<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    pub version: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub a: Option<usize>,
    #[serde(default, rename = "C")]
    pub c: Option<usize>,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub variant: Option<SharpnessVariant>,
    #[serde(default)]
    pub verify: Option<VerifyOptions>,
}
