use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{LinearMap, SensingOperator};
use crate::C64;

/// Row order of the DFT matrix.
///
/// `LowFirst` lists frequencies as `0, 1, -1, 2, -2, ...`, so any prefix of
/// rows is a symmetric low-pass band and dyadic row intervals are frequency
/// bands of growing radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DftOrdering {
    Natural,
    #[default]
    LowFirst,
}

impl DftOrdering {
    /// Natural frequency index (in `0..n`) of output row `r`.
    pub fn frequency_index(self, r: usize, n: usize) -> usize {
        match self {
            DftOrdering::Natural => r,
            DftOrdering::LowFirst => {
                if r % 2 == 1 {
                    r.div_ceil(2)
                } else {
                    (n - r / 2) % n
                }
            }
        }
    }
}

struct Dft {
    n: usize,
    ordering: DftOrdering,
    rows: Vec<usize>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl LinearMap for Dft {
    fn n_in(&self) -> usize {
        self.n
    }
    fn n_out(&self) -> usize {
        self.n
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        let mut buf = x.to_vec();
        self.fwd.process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        self.rows.iter().map(|&k| buf[k] * s).collect()
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); self.n];
        for (&k, &v) in self.rows.iter().zip(y) {
            buf[k] = v;
        }
        self.inv.process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        buf.iter().map(|v| v * s).collect()
    }
    fn descriptor(&self) -> String {
        match self.ordering {
            DftOrdering::Natural => format!("dft({})", self.n),
            DftOrdering::LowFirst => format!("dft_lowfirst({})", self.n),
        }
    }
}

/// Unitary DFT, `(Fx)_k = n^{-1/2} sum_j x_j exp(-2 pi i jk/n)`, natural row
/// order.
pub fn dft(n: usize) -> SensingOperator {
    dft_ordered(n, DftOrdering::Natural)
}

pub fn dft_ordered(n: usize, ordering: DftOrdering) -> SensingOperator {
    assert!(n >= 1, "dft needs n >= 1");
    let mut planner = FftPlanner::new();
    SensingOperator::new(Dft {
        n,
        ordering,
        rows: (0..n).map(|r| ordering.frequency_index(r, n)).collect(),
        fwd: planner.plan_fft_forward(n),
        inv: planner.plan_fft_inverse(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm2, real_vec};
    use crate::rng::{complex_gaussian_vec, rng_from_seed};
    use std::f64::consts::PI;

    fn naive(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for (j, v) in x.iter().enumerate() {
                    let th = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    acc += v * C64::new(th.cos(), th.sin());
                }
                acc / (n as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(dft(1).apply(&real_vec(&[5.0])), real_vec(&[5.0]));
        let y = dft(4).apply(&real_vec(&[1.0, 0.0, 0.0, 0.0]));
        for v in y {
            assert!((v - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn matches_direct_summation() {
        let mut rng = rng_from_seed(3);
        for n in [5, 8, 12, 64] {
            let x = complex_gaussian_vec(&mut rng, n);
            let fast = dft(n).apply(&x);
            let slow = naive(&x);
            let err: f64 = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "n={n}");
        }
    }

    #[test]
    fn low_first_is_a_row_permutation() {
        let n = 8;
        let rows: Vec<usize> = (0..n).map(|r| DftOrdering::LowFirst.frequency_index(r, n)).collect();
        assert_eq!(rows, vec![0, 1, 7, 2, 6, 3, 5, 4]);
        let mut rng = rng_from_seed(4);
        let x = complex_gaussian_vec(&mut rng, n);
        let a = dft_ordered(n, DftOrdering::LowFirst).apply(&x);
        let b = naive(&x);
        for (r, &k) in rows.iter().enumerate() {
            assert!((a[r] - b[k]).norm() < 1e-12);
        }
        assert!((norm2(&a) - norm2(&x)).abs() < 1e-12);
    }

    #[test]
    fn adjoint_and_unitarity() {
        for ord in [DftOrdering::Natural, DftOrdering::LowFirst] {
            for n in [1, 2, 7, 16, 64] {
                let op = dft_ordered(n, ord);
                assert!(op.adjoint_mismatch(100, 1) < 1e-10);
                assert!(op.isometry_defect(20, 2) < 1e-10);
            }
        }
    }

    #[test]
    fn dense_dft2() {
        let m = dft(2).materialize().unwrap();
        let s = 1.0 / 2f64.sqrt();
        let expect = [[s, s], [s, -s]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - C64::new(expect[i][j], 0.0)).norm() < 1e-15);
            }
        }
    }
}
