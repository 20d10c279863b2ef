use super::{SolveOptions, SolveResult};
use crate::linalg::{norm2, power_norm};
use crate::{Error, Result, SensingOperator, Weights, C64};

/// Equality-constrained basis pursuit `min ||x||_1 s.t. Ux = y`.
pub fn solve_bp(u: &SensingOperator, y: &[C64], opts: &SolveOptions) -> Result<SolveResult> {
    run(u, y, None, 0.0, opts)
}

/// Basis pursuit denoising `min ||x||_1 s.t. ||Ux - y||_2 <= eps`.
pub fn solve_bpdn(
    u: &SensingOperator,
    y: &[C64],
    eps: f64,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    run(u, y, None, eps, opts)
}

/// Weighted variant `min sum_j w_j |x_j| s.t. ||Ux - y||_2 <= eps`.
pub fn solve_weighted_l1(
    u: &SensingOperator,
    y: &[C64],
    weights: &Weights,
    eps: f64,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if weights.len() != u.n_in() {
        return Err(Error::LengthMismatch {
            expected: u.n_in(),
            got: weights.len(),
        });
    }
    run(u, y, Some(weights.as_slice()), eps, opts)
}

fn soft_threshold(v: C64, t: f64) -> C64 {
    let m = v.norm();
    if m <= t {
        C64::new(0.0, 0.0)
    } else {
        v * ((m - t) / m)
    }
}

fn objective(x: &[C64], w: Option<&[f64]>) -> f64 {
    match w {
        Some(w) => x.iter().zip(w).map(|(v, wj)| wj * v.norm()).sum(),
        None => x.iter().map(|v| v.norm()).sum(),
    }
}

fn diff_norm(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

// Chambolle–Pock iteration on the saddle problem
//   min_x max_z <Ux, z> + f(x) - g*(z),
// with f the weighted l1 norm and g the indicator of the ball B(y, eps).
// Residuals follow the optimality conditions of each half step; step sizes
// are rebalanced by the ratio of the residuals while keeping tau*sigma fixed.
fn run(
    u: &SensingOperator,
    y: &[C64],
    w: Option<&[f64]>,
    eps: f64,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    opts.validate()?;
    let (n, m) = (u.n_in(), u.n_out());
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "measurement length {} for operator with {} rows",
            y.len(),
            m
        )));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidOptions(format!("eps must be non-negative, got {eps}")));
    }
    let y_norm = norm2(y);
    if y_norm <= eps {
        return Ok(SolveResult {
            x: vec![C64::new(0.0, 0.0); n],
            objective: 0.0,
            feasibility_residual: 0.0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let l = power_norm(n, opts.norm_iters, |v| u.apply(v), |v| u.apply_adjoint(v));
    // The power estimate is a lower bound; the margin keeps tau*sigma*L^2 < 1.
    let l = (l * 1.05).max(f64::MIN_POSITIVE);
    let mut tau = opts.step_ratio.sqrt() / l;
    let mut sigma = 1.0 / (opts.step_ratio.sqrt() * l);
    let mut alpha = 0.5;

    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut ux = vec![C64::new(0.0, 0.0); m];
    let mut z = vec![C64::new(0.0, 0.0); m];
    let mut x_bar_img = ux.clone();

    let mut primal_res = f64::INFINITY;
    let mut dual_res = f64::INFINITY;
    let mut feas = y_norm;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        iterations += 1;

        // Dual step: z <- prox_{sigma g*}(z + sigma U x_bar).
        let z_old = z.clone();
        let mut v: Vec<C64> = z.iter().zip(&x_bar_img).map(|(zi, ui)| zi + ui * sigma).collect();
        // Moreau: prox_{sigma g*}(v) = v - sigma * proj_B(v / sigma).
        let dist = v
            .iter()
            .zip(y)
            .map(|(vi, yi)| (vi / sigma - yi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let shrink = if dist > eps { eps / dist } else { 1.0 };
        for (vi, yi) in v.iter_mut().zip(y) {
            let q = *vi / sigma - yi;
            let proj = yi + q * shrink;
            *vi -= proj * sigma;
        }
        z = v;

        // Primal step: x <- soft(x - tau U* z, tau w).
        let g = u.apply_adjoint(&z);
        let x_old = std::mem::take(&mut x);
        x = x_old
            .iter()
            .zip(&g)
            .enumerate()
            .map(|(j, (xj, gj))| {
                let t = tau * w.map_or(1.0, |w| w[j]);
                soft_threshold(xj - gj * tau, t)
            })
            .collect();

        let ux_new = u.apply(&x);

        // Primal residual (x_old - x)/tau lies in df(x) + U* z.
        let p = diff_norm(&x_old, &x) / tau;
        // Dual residual (z_old - z)/sigma + U(x_bar - x).
        let d = z_old
            .iter()
            .zip(&z)
            .zip(x_bar_img.iter().zip(&ux_new))
            .map(|((zo, zn), (xb, un))| ((zo - zn) / sigma + (xb - un)).norm_sqr())
            .sum::<f64>()
            .sqrt();

        let ux_prev = std::mem::replace(&mut ux, ux_new);
        x_bar_img = ux
            .iter()
            .zip(&ux_prev)
            .map(|(a, b)| a * 2.0 - b)
            .collect();

        let resid = ux.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        feas = (resid - eps).max(0.0);
        let g_norm = norm2(&g);
        primal_res = p / (1.0 + g_norm);
        dual_res = d / (1.0 + y_norm);

        if primal_res <= opts.tol_primal && dual_res <= opts.tol_dual && feas <= opts.tol_feas {
            converged = true;
            break;
        }

        if opts.adaptive {
            const DELTA: f64 = 1.5;
            const DECAY: f64 = 0.95;
            if primal_res > DELTA * dual_res {
                tau /= 1.0 - alpha;
                sigma *= 1.0 - alpha;
                alpha *= DECAY;
            } else if primal_res < dual_res / DELTA {
                tau *= 1.0 - alpha;
                sigma /= 1.0 - alpha;
                alpha *= DECAY;
            }
        }
    }

    Ok(SolveResult {
        objective: objective(&x, w),
        x,
        feasibility_residual: feas,
        primal_residual: primal_res,
        dual_residual: dual_res,
        iterations,
        converged,
    })
}
