//! RIP and RIP-in-levels constants, recovery thresholds, nullspace checks
//! and explicit error-bound constants.

mod bounds;
mod nsp;
mod ripl;

use serde::{Deserialize, Serialize};

use crate::C64;

pub use bounds::{error_bounds, lemma_utilities, recovery_threshold, ErrorBounds, NspConstants};
pub use nsp::{
    kernel_exact_recovery_check, kernel_exact_recovery_check_with, nsp_falsify, nsp_violation,
    KernelCheckOptions,
};
pub use ripl::{
    check_recovery_condition, enumeration_count, rip_exact, ripl_deflation_analytic, ripl_exact,
    ripl_exact_with_cap, ripl_lower_bound, support_deviation, RecoveryCheck, ENUMERATION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Rip,
    RipL,
    NspL2,
    NspL1,
    KernelExactRecovery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnumeration,
    RandomizedSearch,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertValue {
    Scalar(f64),
    Bound { lower: f64, upper: f64 },
}

impl CertValue {
    /// The scalar, or the lower end of a bound pair.
    pub fn lower(&self) -> f64 {
        match *self {
            CertValue::Scalar(v) => v,
            CertValue::Bound { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            CertValue::Scalar(v) => v,
            CertValue::Bound { upper, .. } => upper,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<C64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub value: CertValue,
    pub witness: Witness,
    pub method: Method,
    /// Number of subproblems (supports, trials) examined.
    pub work: u64,
    /// Verdict for checks; `None` when inconclusive or not a check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CertificateReport {
    fn new(kind: CertificateKind, value: CertValue, method: Method, work: u64) -> Self {
        CertificateReport {
            kind,
            value,
            witness: Witness::default(),
            method,
            work,
            holds: None,
            note: None,
        }
    }

    fn with_support(mut self, s: Vec<usize>) -> Self {
        self.witness.support = Some(s);
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}
