use serde::{Deserialize, Serialize};

use crate::{Error, Result, SparsityPattern};

/// Sufficient RIP-in-levels level for uniform recovery of `(s, M)`-sparse
/// vectors: `delta_{2s,M} < 1 / sqrt(l (sqrt(eta) + 1/4)^2 + 1)`.
pub fn recovery_threshold(p: &SparsityPattern) -> Result<f64> {
    let eta = p.ratio_constant();
    if !eta.is_finite() {
        return Err(Error::InfiniteRatio);
    }
    let l = p.levels() as f64;
    let t = eta.value().sqrt() + 0.25;
    Ok(1.0 / (l * t * t + 1.0).sqrt())
}

/// Robust nullspace property constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NspConstants {
    pub rho: f64,
    pub tau: f64,
    /// Constant of the l1 variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_prime: Option<f64>,
}

impl NspConstants {
    pub fn new(rho: f64, tau: f64) -> Result<Self> {
        let c = NspConstants {
            rho,
            tau,
            tau_prime: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::RhoOutOfRange(self.rho));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::TauOutOfRange(self.tau));
        }
        if let Some(t) = self.tau_prime {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::TauOutOfRange(t));
            }
        }
        Ok(())
    }
}

/// Error-bound constants for l1 minimization under the l2 robust nullspace
/// property in levels, and the resulting bounds for given
/// `sigma = sigma_{s,M}(x)_1` and noise level `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ErrorBounds {
    pub A1: f64,
    pub C1: f64,
    pub A2: f64,
    pub B2: f64,
    pub C2: f64,
    pub D2: f64,
    /// `A1 sigma + C1 eps sqrt(s~)`, bounds `||x - x_hat||_1`.
    pub bound_l1: f64,
    /// `(sigma/sqrt(s~)) (A2 + B2 (l eta)^{1/4}) + 2 eps (C2 + D2 (l eta)^{1/4})`,
    /// bounds `||x - x_hat||_2`.
    pub bound_l2: f64,
}

#[allow(non_snake_case)]
pub fn error_bounds(nsp: &NspConstants, p: &SparsityPattern, sigma: f64, eps: f64) -> Result<ErrorBounds> {
    nsp.validate()?;
    let eta = p.ratio_constant();
    if !eta.is_finite() {
        return Err(Error::InfiniteRatio);
    }
    let (rho, tau) = (nsp.rho, nsp.tau);
    let sr = rho.sqrt();
    let A1 = (2.0 + 2.0 * rho) / (1.0 - rho);
    let C1 = 4.0 * tau / (1.0 - rho);
    let A2 = (2.0 * rho + 2.0 * rho * rho) / (1.0 - rho);
    let B2 = (2.0 * sr + 1.0) * (1.0 + rho) / (1.0 - rho);
    let C2 = (rho * tau + tau) / (1.0 - rho);
    let D2 = (4.0 * sr * tau + 3.0 * tau - rho * tau) / (2.0 - 2.0 * rho);
    let s_tilde = p.num_elements() as f64;
    let g = (p.levels() as f64 * eta.value()).powf(0.25);
    let bound_l1 = A1 * sigma + C1 * eps * s_tilde.sqrt();
    let sigma_term = if sigma == 0.0 { 0.0 } else { sigma / s_tilde.sqrt() };
    let bound_l2 = sigma_term * (A2 + B2 * g) + 2.0 * eps * (C2 + D2 * g);
    Ok(ErrorBounds {
        A1,
        C1,
        A2,
        B2,
        C2,
        D2,
        bound_l1,
        bound_l2,
    })
}

/// Both sides of `||v||_2 <= ||v||_1/sqrt(s) + (sqrt(s)/4)(v_1 - v_s)` for a
/// non-increasing, non-negative `v` of length `s`.
pub fn lemma_utilities(v: &[f64]) -> Result<(f64, f64)> {
    if v.iter().any(|x| !(*x >= 0.0)) || v.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotSorted);
    }
    if v.is_empty() {
        return Ok((0.0, 0.0));
    }
    let s = v.len() as f64;
    let l2 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let l1: f64 = v.iter().sum();
    Ok((l2, l1 / s.sqrt() + s.sqrt() / 4.0 * (v[0] - v[v.len() - 1])))
}
