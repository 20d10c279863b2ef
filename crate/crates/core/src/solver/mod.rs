//! Weighted l1 minimization under an l2-ball data constraint,
//! `min sum_j w_j |x_j|  s.t.  ||Ux - y||_2 <= eps`,
//! plus an exact small-scale oracle for the real equality-constrained case.

mod oracle;
mod primal_dual;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub use oracle::{oracle_bp, OracleMethod, OracleSolution, ORACLE_MAX_SIMPLEX};
pub(crate) use oracle::rational_eq;
pub use primal_dual::{solve_bp, solve_bpdn, solve_weighted_l1};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Primal optimality residual tolerance (relative).
    pub tol_primal: f64,
    /// Dual optimality residual tolerance (relative).
    pub tol_dual: f64,
    /// Absolute tolerance on `max(0, ||Ux - y|| - eps)`.
    pub tol_feas: f64,
    /// Initial ratio `tau / sigma` of the primal and dual step sizes.
    pub step_ratio: f64,
    /// Rebalance the step sizes from the residual ratio.
    pub adaptive: bool,
    /// Power iterations for the operator norm estimate.
    pub norm_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iters: 50_000,
            tol_primal: 1e-8,
            tol_dual: 1e-8,
            tol_feas: 1e-8,
            step_ratio: 1.0,
            adaptive: true,
            norm_iters: 20,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let tols = [self.tol_primal, self.tol_dual, self.tol_feas];
        if tols.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidOptions("tolerances must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidOptions("max_iters must be at least 1".into()));
        }
        if !(self.step_ratio.is_finite() && self.step_ratio > 0.0) {
            return Err(Error::InvalidOptions("step_ratio must be positive".into()));
        }
        if self.norm_iters == 0 {
            return Err(Error::InvalidOptions("norm_iters must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol_primal = tol;
        self.tol_dual = tol;
        self.tol_feas = tol;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub x: Vec<C64>,
    /// Weighted l1 norm of `x`.
    pub objective: f64,
    /// `max(0, ||Ux - y||_2 - eps)`.
    pub feasibility_residual: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}
