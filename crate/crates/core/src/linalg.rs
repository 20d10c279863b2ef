//! Small dense linear-algebra helpers shared by the certification,
//! solver and construction code.

use nalgebra::DMatrix;

use crate::C64;

pub type CMatrix = DMatrix<C64>;

pub fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); n]
}

pub fn real_vec(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&r| C64::new(r, 0.0)).collect()
}

pub fn norm1(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).sum()
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `<x, y> = sum_i x_i conj(y_i)`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn sub(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn add(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn scale(x: &[C64], s: f64) -> Vec<C64> {
    x.iter().map(|v| v * s).collect()
}

pub fn dist2(x: &[C64], y: &[C64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn dist1(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).sum()
}

pub fn max_abs(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn mat_vec(a: &CMatrix, x: &[C64]) -> Vec<C64> {
    let mut out = zeros(a.nrows());
    for j in 0..a.ncols() {
        let xj = x[j];
        if xj == C64::new(0.0, 0.0) {
            continue;
        }
        let col = a.column(j);
        for (o, &aij) in out.iter_mut().zip(col.iter()) {
            *o += aij * xj;
        }
    }
    out
}

pub fn mat_adjoint_vec(a: &CMatrix, y: &[C64]) -> Vec<C64> {
    (0..a.ncols())
        .map(|j| a.column(j).iter().zip(y).map(|(aij, yi)| aij.conj() * yi).sum())
        .collect()
}

pub fn from_real(a: &DMatrix<f64>) -> CMatrix {
    a.map(|r| C64::new(r, 0.0))
}

/// Eigenvalues of a Hermitian matrix in ascending order. The matrix is
/// symmetrized first so round-off asymmetry does not leak into the solver.
pub fn hermitian_eigenvalues(g: &CMatrix) -> Vec<f64> {
    let sym = (g + g.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `max(lambda_max - 1, 1 - lambda_min)` of a Gram matrix.
pub fn spectral_deviation(gram: &CMatrix) -> f64 {
    if gram.nrows() == 0 {
        return 0.0;
    }
    let ev = hermitian_eigenvalues(gram);
    let lo = ev[0];
    let hi = ev[ev.len() - 1];
    (hi - 1.0).max(1.0 - lo)
}

/// Principal submatrix `g[s, s]`.
pub fn principal_submatrix(g: &CMatrix, s: &[usize]) -> CMatrix {
    CMatrix::from_fn(s.len(), s.len(), |i, j| g[(s[i], s[j])])
}

/// Singular values (descending) and an orthonormal basis of the kernel,
/// returned as column vectors. Rank is decided against
/// `rel_tol * max(1, sigma_max)`.
pub fn kernel_basis(a: &CMatrix, rel_tol: f64) -> (Vec<f64>, Vec<Vec<C64>>) {
    let (m, n) = a.shape();
    // Pad with zero rows so the decomposition returns a full right basis.
    let padded = if m < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let tol = rel_tol * smax.max(1.0);
    let mut kernel = Vec::new();
    for (k, &s) in sv.iter().enumerate() {
        if s <= tol {
            kernel.push(v_t.row(k).iter().map(|v| v.conj()).collect());
        }
    }
    let mut sorted = sv;
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.truncate(m.min(n));
    (sorted, kernel)
}

pub fn numerical_rank(a: &CMatrix, rel_tol: f64) -> usize {
    let (_, kernel) = kernel_basis(a, rel_tol);
    a.ncols() - kernel.len()
}

/// Householder reflection `H = I - 2 w w* / (w* w)` with `w = e_0 - u`, so
/// that `H e_0 = u` for a unit vector `u` with real first entry. The columns
/// of `H` form an orthonormal basis whose first element is `u`.
pub fn householder_basis(u: &[C64]) -> CMatrix {
    let n = u.len();
    let mut w: Vec<C64> = u.iter().map(|v| -v).collect();
    w[0] += C64::new(1.0, 0.0);
    let ww: f64 = w.iter().map(|v| v.norm_sqr()).sum();
    let mut h = CMatrix::identity(n, n);
    if ww < 1e-300 {
        return h;
    }
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= w[i] * w[j].conj() * (2.0 / ww);
        }
    }
    h
}

/// Largest singular value estimate by power iteration on `A* A` from a fixed
/// start vector.
pub fn power_norm<F, G>(n_in: usize, iters: usize, forward: F, adjoint: G) -> f64
where
    F: Fn(&[C64]) -> Vec<C64>,
    G: Fn(&[C64]) -> Vec<C64>,
{
    if n_in == 0 {
        return 0.0;
    }
    // Fixed, non-symmetric start vector so no eigenvector is missed by symmetry.
    let mut v: Vec<C64> = (0..n_in)
        .map(|i| C64::new(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.5 - (i as f64 * 0.414_213_562_37).fract()))
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut est = 0.0;
    for _ in 0..iters {
        let w = adjoint(&forward(&v));
        let nw = norm2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        est = nw.sqrt();
        v = w.iter().map(|x| x / nw).collect();
    }
    est
}
