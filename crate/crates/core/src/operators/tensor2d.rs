use super::{LinearMap, SensingOperator};
use crate::{Error, Result, C64};

/// `A ⊗ B` acting on row-major `rows x cols` arrays: `X -> A X B^T`.
struct Kronecker {
    a: SensingOperator,
    b: SensingOperator,
}

fn separable(
    x: &[C64],
    rows_in: usize,
    cols_in: usize,
    row_op: impl Fn(&[C64]) -> Vec<C64>,
    col_op: impl Fn(&[C64]) -> Vec<C64>,
    cols_out: usize,
    rows_out: usize,
) -> Vec<C64> {
    let mut tmp = Vec::with_capacity(rows_in * cols_out);
    for r in 0..rows_in {
        tmp.extend(row_op(&x[r * cols_in..(r + 1) * cols_in]));
    }
    let mut out = vec![C64::new(0.0, 0.0); rows_out * cols_out];
    let mut column = vec![C64::new(0.0, 0.0); rows_in];
    for c in 0..cols_out {
        for r in 0..rows_in {
            column[r] = tmp[r * cols_out + c];
        }
        for (r, v) in col_op(&column).into_iter().enumerate() {
            out[r * cols_out + c] = v;
        }
    }
    out
}

impl LinearMap for Kronecker {
    fn n_in(&self) -> usize {
        self.a.n_in() * self.b.n_in()
    }
    fn n_out(&self) -> usize {
        self.a.n_out() * self.b.n_out()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        separable(
            x,
            self.a.n_in(),
            self.b.n_in(),
            |v| self.b.apply(v),
            |v| self.a.apply(v),
            self.b.n_out(),
            self.a.n_out(),
        )
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        separable(
            y,
            self.a.n_out(),
            self.b.n_out(),
            |v| self.b.apply_adjoint(v),
            |v| self.a.apply_adjoint(v),
            self.b.n_in(),
            self.a.n_in(),
        )
    }
    fn descriptor(&self) -> String {
        format!("({})⊗({})", self.a.descriptor(), self.b.descriptor())
    }
}

/// Separable 2D operator `A ⊗ B` on row-major arrays.
pub fn tensor2d(a: &SensingOperator, b: &SensingOperator) -> SensingOperator {
    SensingOperator::new(Kronecker {
        a: a.clone(),
        b: b.clone(),
    })
}

/// Orders the coefficients of a separable 2D transform by level.
///
/// Coefficient `(r, c)` of an `n x n` array belongs to level
/// `max(level(r), level(c))` of the 1D boundaries. Returns `map` with
/// `map[i]` the row-major index of the `i`-th coefficient in level order
/// (stable within a level) and the 2D level boundaries.
pub fn level_flattening(bounds: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if bounds.len() < 2 || bounds[0] != 0 || bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DimensionMismatch(format!("bad level boundaries {bounds:?}")));
    }
    let n = *bounds.last().unwrap();
    let level = |k: usize| bounds.partition_point(|&b| b <= k) - 1;
    let mut keyed: Vec<(usize, usize)> = (0..n * n)
        .map(|idx| (level(idx / n).max(level(idx % n)), idx))
        .collect();
    keyed.sort_unstable();
    let mut m2 = vec![0];
    for l in 0..bounds.len() - 1 {
        let width = bounds[l + 1];
        m2.push(width * width);
        debug_assert_eq!(keyed.iter().filter(|(lv, _)| *lv <= l).count(), width * width);
    }
    Ok((keyed.into_iter().map(|(_, i)| i).collect(), m2))
}
