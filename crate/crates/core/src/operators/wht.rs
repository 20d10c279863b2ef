use serde::{Deserialize, Serialize};

use super::{LinearMap, SensingOperator};
use crate::{Error, Result, C64};

/// Row order of the Walsh–Hadamard matrix.
///
/// With `H[i][j] = (-1)^{popcount(i & j)}` in natural (Hadamard) order, the
/// Paley order takes row `bitrev(k)` as row `k` and the sequency (Walsh)
/// order takes row `bitrev(gray(k))`, so that row `k` has `k` sign changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WhtOrdering {
    Natural,
    #[default]
    Paley,
    Sequency,
}

impl WhtOrdering {
    /// Natural-order row index placed at position `k`.
    pub fn natural_row(self, k: usize, n: usize) -> usize {
        let bits = n.trailing_zeros();
        let rev = |v: usize| {
            if bits == 0 {
                0
            } else {
                v.reverse_bits() >> (usize::BITS - bits)
            }
        };
        match self {
            WhtOrdering::Natural => k,
            WhtOrdering::Paley => rev(k),
            WhtOrdering::Sequency => rev(k ^ (k >> 1)),
        }
    }
}

/// In-place unnormalized fast Walsh–Hadamard transform, natural order.
pub fn fwht_inplace(x: &mut [C64]) {
    let n = x.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (x[i], x[i + h]);
                x[i] = a + b;
                x[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

struct Wht {
    n: usize,
    ordering: WhtOrdering,
    rows: Vec<usize>,
}

impl LinearMap for Wht {
    fn n_in(&self) -> usize {
        self.n
    }
    fn n_out(&self) -> usize {
        self.n
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        let mut buf = x.to_vec();
        fwht_inplace(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        self.rows.iter().map(|&r| buf[r] * s).collect()
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); self.n];
        for (&r, &v) in self.rows.iter().zip(y) {
            buf[r] = v;
        }
        fwht_inplace(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        buf.iter().map(|v| v * s).collect()
    }
    fn descriptor(&self) -> String {
        let tag = match self.ordering {
            WhtOrdering::Natural => "natural",
            WhtOrdering::Paley => "paley",
            WhtOrdering::Sequency => "sequency",
        };
        format!("wht_{tag}({})", self.n)
    }
}

/// Unitary Walsh–Hadamard transform in the default (Paley) order.
pub fn wht(n: usize) -> Result<SensingOperator> {
    wht_ordered(n, WhtOrdering::default())
}

pub fn wht_ordered(n: usize, ordering: WhtOrdering) -> Result<SensingOperator> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(SensingOperator::new(Wht {
        n,
        ordering,
        rows: (0..n).map(|k| ordering.natural_row(k, n)).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vec;

    fn sign_changes(row: &[f64]) -> usize {
        row.windows(2).filter(|w| w[0] != w[1]).count()
    }

    #[test]
    fn small_cases() {
        let y = wht(2).unwrap().apply(&real_vec(&[1.0, 1.0]));
        assert!((y[0].re - 2f64.sqrt()).abs() < 1e-15 && y[1].norm() < 1e-15);
        let y = wht_ordered(4, WhtOrdering::Natural)
            .unwrap()
            .apply(&real_vec(&[1.0, 0.0, 0.0, 0.0]));
        assert!(y.iter().all(|v| (v.re - 0.5).abs() < 1e-15));
        assert!(matches!(wht(6), Err(Error::NotPowerOfTwo(6))));
    }

    #[test]
    fn sequency_rows_have_k_sign_changes() {
        let n = 32;
        let m = wht_ordered(n, WhtOrdering::Sequency).unwrap().materialize().unwrap();
        for k in 0..n {
            let row: Vec<f64> = (0..n).map(|j| m[(k, j)].re.signum()).collect();
            assert_eq!(sign_changes(&row), k);
        }
    }

    #[test]
    fn orderings_are_unitary_with_consistent_adjoint() {
        for ord in [WhtOrdering::Natural, WhtOrdering::Paley, WhtOrdering::Sequency] {
            for n in [1, 2, 8, 64] {
                let op = wht_ordered(n, ord).unwrap();
                assert!(op.adjoint_mismatch(100, 5) < 1e-10);
                assert!(op.isometry_defect(10, 6) < 1e-10);
            }
        }
    }
}
