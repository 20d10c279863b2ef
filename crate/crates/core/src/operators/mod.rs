//! Linear sensing operators with forward and adjoint actions.

mod dft;
mod sampling;
mod structured;
mod tensor2d;
mod wavelet;
mod wht;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::linalg::{mat_adjoint_vec, mat_vec, CMatrix};
use crate::rng::{complex_gaussian_vec, rng_from_seed};
use crate::{Error, Result, C64};

pub use dft::{dft, dft_ordered, DftOrdering};
pub use sampling::{dyadic_bands, multilevel_scheme, SamplingScheme};
pub use structured::{rank_one_deflation, reorder};
pub use tensor2d::{level_flattening, tensor2d};
pub use wavelet::{daubechies_filter, dwt, idwt, WaveletFamily, WaveletSpec};
pub use wht::{fwht_inplace, wht, wht_ordered, WhtOrdering};

/// Default cap on `n_in * n_out` for dense materialization.
pub const MATERIALIZE_CAP: usize = 1 << 22;

/// A complex-linear map and its adjoint.
pub trait LinearMap: Send + Sync {
    fn n_in(&self) -> usize;
    fn n_out(&self) -> usize;
    fn forward(&self, x: &[C64]) -> Vec<C64>;
    fn adjoint(&self, y: &[C64]) -> Vec<C64>;
    fn descriptor(&self) -> String;
    fn dense(&self) -> Option<&CMatrix> {
        None
    }
}

/// Shared handle to an immutable linear operator.
#[derive(Clone)]
pub struct SensingOperator(Arc<dyn LinearMap>);

impl fmt::Debug for SensingOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}x{}]", self.descriptor(), self.n_out(), self.n_in())
    }
}

impl SensingOperator {
    pub fn new<L: LinearMap + 'static>(map: L) -> Self {
        SensingOperator(Arc::new(map))
    }

    pub fn n_in(&self) -> usize {
        self.0.n_in()
    }

    pub fn n_out(&self) -> usize {
        self.0.n_out()
    }

    pub fn descriptor(&self) -> String {
        self.0.descriptor()
    }

    /// `A x`. Panics on a length mismatch.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n_in(), "input length for {}", self.descriptor());
        self.0.forward(x)
    }

    /// `A* y`. Panics on a length mismatch.
    pub fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        assert_eq!(y.len(), self.n_out(), "output length for {}", self.descriptor());
        self.0.adjoint(y)
    }

    pub fn try_apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.n_in() {
            return Err(Error::LengthMismatch {
                expected: self.n_in(),
                got: x.len(),
            });
        }
        Ok(self.0.forward(x))
    }

    /// The backing dense matrix, when the operator was built from one.
    pub fn as_dense(&self) -> Option<&CMatrix> {
        self.0.dense()
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Identity(n))
    }

    pub fn from_dense(m: CMatrix) -> Self {
        Self::new(Dense(m))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_dense(CMatrix::from_fn(r, c, |i, j| {
            C64::new(rows[i][j], 0.0)
        })))
    }

    /// `self ∘ inner`: applies `inner` first.
    pub fn compose(&self, inner: &SensingOperator) -> Result<Self> {
        if self.n_in() != inner.n_out() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} (input {}) with {} (output {})",
                self.descriptor(),
                self.n_in(),
                inner.descriptor(),
                inner.n_out()
            )));
        }
        Ok(Self::new(Composed {
            outer: self.clone(),
            inner: inner.clone(),
        }))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(Adjoint(self.clone()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(Scaled {
            op: self.clone(),
            c,
        })
    }

    /// Dense matrix by applying the operator to each standard basis vector.
    pub fn materialize(&self) -> Result<CMatrix> {
        self.materialize_with_cap(MATERIALIZE_CAP)
    }

    pub fn materialize_with_cap(&self, cap: usize) -> Result<CMatrix> {
        let (rows, cols) = (self.n_out(), self.n_in());
        if rows.saturating_mul(cols) > cap {
            return Err(Error::TooLarge { rows, cols, cap });
        }
        if let Some(d) = self.as_dense() {
            return Ok(d.clone());
        }
        let columns: Vec<Vec<C64>> = (0..cols)
            .into_par_iter()
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); cols];
                e[j] = C64::new(1.0, 0.0);
                self.apply(&e)
            })
            .collect();
        Ok(CMatrix::from_fn(rows, cols, |i, j| columns[j][i]))
    }

    /// Largest `|<Ax, y> - <x, A*y>|` over `pairs` random probes, relative to
    /// `||x|| ||y||`.
    pub fn adjoint_mismatch(&self, pairs: usize, seed: u64) -> f64 {
        let mut rng = rng_from_seed(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let x = complex_gaussian_vec(&mut rng, self.n_in());
            let y = complex_gaussian_vec(&mut rng, self.n_out());
            let lhs = crate::linalg::inner(&self.apply(&x), &y);
            let rhs = crate::linalg::inner(&x, &self.apply_adjoint(&y));
            let scale = crate::linalg::norm2(&x) * crate::linalg::norm2(&y);
            worst = worst.max((lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE));
        }
        worst
    }

    /// Largest `| ||Ax|| / ||x|| - 1 |` over random probes.
    pub fn isometry_defect(&self, probes: usize, seed: u64) -> f64 {
        let mut rng = rng_from_seed(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..probes {
            let x = complex_gaussian_vec(&mut rng, self.n_in());
            let r = crate::linalg::norm2(&self.apply(&x)) / crate::linalg::norm2(&x);
            worst = worst.max((r - 1.0).abs());
        }
        worst
    }
}

struct Identity(usize);

impl LinearMap for Identity {
    fn n_in(&self) -> usize {
        self.0
    }
    fn n_out(&self) -> usize {
        self.0
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        x.to_vec()
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        y.to_vec()
    }
    fn descriptor(&self) -> String {
        format!("identity({})", self.0)
    }
}

struct Dense(CMatrix);

impl LinearMap for Dense {
    fn n_in(&self) -> usize {
        self.0.ncols()
    }
    fn n_out(&self) -> usize {
        self.0.nrows()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        mat_vec(&self.0, x)
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        mat_adjoint_vec(&self.0, y)
    }
    fn descriptor(&self) -> String {
        format!("dense({}x{})", self.0.nrows(), self.0.ncols())
    }
    fn dense(&self) -> Option<&CMatrix> {
        Some(&self.0)
    }
}

struct Composed {
    outer: SensingOperator,
    inner: SensingOperator,
}

impl LinearMap for Composed {
    fn n_in(&self) -> usize {
        self.inner.n_in()
    }
    fn n_out(&self) -> usize {
        self.outer.n_out()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        self.outer.apply(&self.inner.apply(x))
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        self.inner.apply_adjoint(&self.outer.apply_adjoint(y))
    }
    fn descriptor(&self) -> String {
        format!("{}∘{}", self.outer.descriptor(), self.inner.descriptor())
    }
}

struct Adjoint(SensingOperator);

impl LinearMap for Adjoint {
    fn n_in(&self) -> usize {
        self.0.n_out()
    }
    fn n_out(&self) -> usize {
        self.0.n_in()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        self.0.apply_adjoint(x)
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        self.0.apply(y)
    }
    fn descriptor(&self) -> String {
        format!("adjoint({})", self.0.descriptor())
    }
}

struct Scaled {
    op: SensingOperator,
    c: f64,
}

impl LinearMap for Scaled {
    fn n_in(&self) -> usize {
        self.op.n_in()
    }
    fn n_out(&self) -> usize {
        self.op.n_out()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        self.op.apply(x).into_iter().map(|v| v * self.c).collect()
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        self.op.apply_adjoint(y).into_iter().map(|v| v * self.c).collect()
    }
    fn descriptor(&self) -> String {
        format!("{}*{}", self.c, self.op.descriptor())
    }
}

struct Subsampled {
    op: SensingOperator,
    rows: Vec<usize>,
}

impl LinearMap for Subsampled {
    fn n_in(&self) -> usize {
        self.op.n_in()
    }
    fn n_out(&self) -> usize {
        self.rows.len()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        let full = self.op.apply(x);
        self.rows.iter().map(|&r| full[r]).collect()
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        let mut full = vec![C64::new(0.0, 0.0); self.op.n_out()];
        for (&r, &v) in self.rows.iter().zip(y) {
            full[r] = v;
        }
        self.op.apply_adjoint(&full)
    }
    fn descriptor(&self) -> String {
        format!("subsample[{}]({})", self.rows.len(), self.op.descriptor())
    }
}

/// `P_Ω ∘ A`: keeps the rows of `A` listed in `omega`.
pub fn subsample(a: &SensingOperator, omega: &SamplingScheme) -> Result<SensingOperator> {
    if omega.n() != a.n_out() {
        return Err(Error::DimensionMismatch(format!(
            "scheme over {} rows applied to operator with {} rows",
            omega.n(),
            a.n_out()
        )));
    }
    if let Some(&bad) = omega.indices().iter().find(|&&i| i >= a.n_out()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            dim: a.n_out(),
        });
    }
    Ok(SensingOperator::new(Subsampled {
        op: a.clone(),
        rows: omega.indices().to_vec(),
    }))
}

struct BlockDiagonal {
    blocks: Vec<CMatrix>,
    offsets: Vec<usize>,
}

impl LinearMap for BlockDiagonal {
    fn n_in(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }
    fn n_out(&self) -> usize {
        self.n_in()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        let mut out = Vec::with_capacity(x.len());
        for (b, w) in self.blocks.iter().zip(self.offsets.windows(2)) {
            out.extend(mat_vec(b, &x[w[0]..w[1]]));
        }
        out
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        let mut out = Vec::with_capacity(y.len());
        for (b, w) in self.blocks.iter().zip(self.offsets.windows(2)) {
            out.extend(mat_adjoint_vec(b, &y[w[0]..w[1]]));
        }
        out
    }
    fn descriptor(&self) -> String {
        let sizes: Vec<String> = self.blocks.iter().map(|b| b.nrows().to_string()).collect();
        format!("blockdiag({})", sizes.join(","))
    }
}

/// Direct sum of square blocks.
pub fn block_diagonal(blocks: Vec<CMatrix>) -> Result<SensingOperator> {
    let mut offsets = vec![0];
    for (i, b) in blocks.iter().enumerate() {
        if b.nrows() != b.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "block {i} is {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        offsets.push(offsets[i] + b.nrows());
    }
    Ok(SensingOperator::new(BlockDiagonal { blocks, offsets }))
}

/// Fraction of squared Frobenius mass of `m` lying outside the diagonal
/// blocks given by `bounds` (used for both rows and columns).
pub fn off_block_energy_fraction(m: &CMatrix, bounds: &[usize]) -> f64 {
    let (mut off, mut total) = (0.0, 0.0);
    let block = |k: usize| bounds.partition_point(|&b| b <= k);
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let e = m[(i, j)].norm_sqr();
            total += e;
            if block(i) != block(j) {
                off += e;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        off / total
    }
}

/// Largest modulus of an entry outside the diagonal blocks.
pub fn max_off_block(m: &CMatrix, bounds: &[usize]) -> f64 {
    let block = |k: usize| bounds.partition_point(|&b| b <= k);
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if block(i) != block(j) {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}
