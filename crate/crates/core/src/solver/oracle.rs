//! Exact basis pursuit for small real systems.
//!
//! `min ||x||_1 s.t. Ax = b` is rewritten with `x = u - v`, `u, v >= 0` and
//! solved by a two-phase dense simplex over exact rationals with Bland's
//! rule. Inputs are converted from `f64` exactly, so the result is the exact
//! minimizer of the problem as stored in floating point.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{kernel_basis, CMatrix};
use crate::{Error, Result, C64};

/// Largest `n_in` handled by the rational simplex.
pub const ORACLE_MAX_SIMPLEX: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Simplex,
    KernelLine,
    Injective,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    /// Exact minimizer when found by the rational simplex.
    pub exact: Option<Vec<BigRational>>,
    pub objective: f64,
    pub unique: bool,
    pub method: OracleMethod,
}

type Q = BigRational;

fn q(v: f64) -> Q {
    BigRational::from_float(v).expect("finite input")
}

fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

enum Lp {
    Optimal { value: Q, x: Vec<Q>, strict: bool },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, obj: &mut [Q], r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (v, pv) in obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for costs `c` with the current basis.
    fn objective_row(&self, c: &[Q]) -> Vec<Q> {
        let mut obj: Vec<Q> = c.iter().cloned().chain(std::iter::once(Q::zero())).collect();
        obj.resize(self.width + 1, Q::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &obj_cost(c, b);
            if cb.is_zero() {
                continue;
            }
            for (v, rv) in obj.iter_mut().zip(row) {
                *v -= cb * rv;
            }
        }
        obj
    }

    /// Bland's rule simplex over the columns accepted by `allowed`.
    fn optimize(&mut self, obj: &mut [Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let Some(enter) = (0..self.width).find(|&j| allowed(j) && obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(obj, r, enter),
                None => return false,
            }
        }
    }
}

fn obj_cost(c: &[Q], j: usize) -> Q {
    c.get(j).cloned().unwrap_or_else(Q::zero)
}

/// `min c.x s.t. Ax = b, x >= 0`.
fn lp_min(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Lp {
    let nv = c.len();
    let m = a.len();
    let width = nv + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let neg = bi.is_negative();
        let mut row: Vec<Q> = ai.iter().map(|v| if neg { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        row.push(if neg { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (nv..width).collect(),
        width,
    };

    // Phase 1: minimize the sum of artificials.
    let phase1: Vec<Q> = (0..width).map(|j| if j >= nv { Q::one() } else { Q::zero() }).collect();
    let mut obj = t.objective_row(&phase1);
    t.optimize(&mut obj, &|_| true);
    if !obj[width].is_zero() {
        return Lp::Infeasible;
    }
    // Drive remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent and are dropped.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= nv {
            match (0..nv).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => {
                    t.pivot(&mut obj, r, j);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    let mut obj = t.objective_row(c);
    if !t.optimize(&mut obj, &|j| j < nv) {
        return Lp::Unbounded;
    }
    let mut x = vec![Q::zero(); nv];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < nv {
            x[bv] = row[width].clone();
        }
    }
    let strict = (0..nv)
        .filter(|j| !t.basis.contains(j))
        .all(|j| obj[j].is_positive());
    Lp::Optimal {
        value: -obj[width].clone(),
        x,
        strict,
    }
}

fn real_parts(u: &CMatrix, y: &[C64]) -> Result<(DMatrix<f64>, Vec<f64>)> {
    if u.iter().chain(y).any(|v| v.im != 0.0) {
        return Err(Error::InvalidOptions("the exact oracle needs real data".into()));
    }
    if y.len() != u.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "measurement length {} for {} rows",
            y.len(),
            u.nrows()
        )));
    }
    Ok((u.map(|v| v.re), y.iter().map(|v| v.re).collect()))
}

/// Exact (or exhaustive) solution of `min ||x||_1 s.t. Ux = y` for real data.
///
/// Uses the rational simplex when `n_in <= 16`; otherwise the kernel must
/// have dimension at most one and the minimizer is found by comparing every
/// breakpoint of `t -> ||x_p + t h||_1` along the kernel line.
pub fn oracle_bp(u: &CMatrix, y: &[C64]) -> Result<OracleSolution> {
    let (a, b) = real_parts(u, y)?;
    if a.ncols() <= ORACLE_MAX_SIMPLEX {
        simplex_bp(&a, &b)
    } else {
        kernel_route(u, &a, &b)
    }
}

fn simplex_bp(a: &DMatrix<f64>, b: &[f64]) -> Result<OracleSolution> {
    let (m, n) = a.shape();
    let rows: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let pos = (0..n).map(|j| q(a[(i, j)]));
            let neg = (0..n).map(|j| -q(a[(i, j)]));
            pos.chain(neg).collect()
        })
        .collect();
    let rhs: Vec<Q> = b.iter().map(|&v| q(v)).collect();
    let cost = vec![Q::one(); 2 * n];
    let (value, uv, strict) = match lp_min(&cost, &rows, &rhs) {
        Lp::Optimal { value, x, strict } => (value, x, strict),
        Lp::Infeasible => {
            return Err(Error::ParameterInfeasible("y is not in the range of U".into()))
        }
        Lp::Unbounded => unreachable!("l1 objective is bounded below"),
    };
    let x: Vec<Q> = (0..n).map(|j| &uv[j] - &uv[n + j]).collect();

    // A strictly positive reduced-cost row proves uniqueness; otherwise
    // every coordinate is pinned down by optimizing over the optimal face.
    let unique = strict || {
        let mut face = rows.clone();
        face.push(vec![Q::one(); 2 * n]);
        let mut face_rhs = rhs.clone();
        face_rhs.push(value.clone());
        (0..n).all(|j| {
            let mut c = vec![Q::zero(); 2 * n];
            c[j] = Q::one();
            c[n + j] = -Q::one();
            let lo = match lp_min(&c, &face, &face_rhs) {
                Lp::Optimal { value, .. } => value,
                _ => return false,
            };
            let neg: Vec<Q> = c.iter().map(|v| -v).collect();
            let hi = match lp_min(&neg, &face, &face_rhs) {
                Lp::Optimal { value, .. } => -value,
                _ => return false,
            };
            lo == hi
        })
    };
    Ok(OracleSolution {
        x: x.iter().map(to_f64).collect(),
        objective: to_f64(&value),
        exact: Some(x),
        unique,
        method: OracleMethod::Simplex,
    })
}

fn kernel_route(u: &CMatrix, a: &DMatrix<f64>, b: &[f64]) -> Result<OracleSolution> {
    let n = a.ncols();
    let (_, kernel) = kernel_basis(u, 1e-10);
    if kernel.len() > 1 {
        return Err(Error::TooLarge {
            rows: a.nrows(),
            cols: n,
            cap: ORACLE_MAX_SIMPLEX,
        });
    }
    let svd = a.clone().svd(true, true);
    let bv = nalgebra::DVector::from_column_slice(b);
    let xp = svd
        .solve(&bv, 1e-10 * svd.singular_values.max().max(1.0))
        .map_err(|e| Error::InvalidOptions(e.to_string()))?;
    let resid = (a * &xp - &bv).norm();
    if resid > 1e-9 * (1.0 + bv.norm()) {
        return Err(Error::ParameterInfeasible("y is not in the range of U".into()));
    }
    let xp: Vec<f64> = xp.iter().copied().collect();
    if kernel.is_empty() {
        return Ok(OracleSolution {
            objective: xp.iter().map(|v| v.abs()).sum(),
            x: xp,
            exact: None,
            unique: true,
            method: OracleMethod::Injective,
        });
    }
    let h: Vec<f64> = kernel[0].iter().map(|v| v.re).collect();
    let (t, unique) = kernel_line_minimum(&xp, &h);
    let scale = xp.iter().chain(&h).fold(1.0f64, |m, v| m.max(v.abs()));
    let x: Vec<f64> = xp
        .iter()
        .zip(&h)
        .map(|(p, hi)| {
            let v = p + t * hi;
            if v.abs() <= 1e-12 * scale {
                0.0
            } else {
                v
            }
        })
        .collect();
    Ok(OracleSolution {
        objective: x.iter().map(|v| v.abs()).sum(),
        x,
        exact: None,
        unique,
        method: OracleMethod::KernelLine,
    })
}

/// Minimizer of the convex piecewise-linear `t -> sum |p_i + t h_i|` by
/// evaluating every breakpoint, and whether it is the unique minimizer.
pub(crate) fn kernel_line_minimum(p: &[f64], h: &[f64]) -> (f64, bool) {
    let hmax = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let f = |t: f64| p.iter().zip(h).map(|(a, b)| (a + t * b).abs()).sum::<f64>();
    let mut best = (0.0, f(0.0));
    for (pi, hi) in p.iter().zip(h) {
        if hi.abs() <= 1e-14 * hmax {
            continue;
        }
        let t = -pi / hi;
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let t = best.0;
    let scale = p.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let (mut left, mut right) = (0.0, 0.0);
    for (pi, hi) in p.iter().zip(h) {
        let v = pi + t * hi;
        if v.abs() <= 1e-12 * scale {
            left -= hi.abs();
            right += hi.abs();
        } else {
            left += hi * v.signum();
            right += hi * v.signum();
        }
    }
    let tol = 1e-12 * h.iter().map(|v| v.abs()).sum::<f64>();
    (t, left < -tol && right > tol)
}

/// Integer check helper: whether `v` equals `num/den` exactly.
pub(crate) fn rational_eq(v: &Q, num: i64, den: i64) -> bool {
    *v == BigRational::new(BigInt::from(num), BigInt::from(den))
}
