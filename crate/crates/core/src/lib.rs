//! Sparsity-in-levels compressed sensing.
//!
//! The crate is organised around the objects that appear when one asks
//! whether a sensing matrix recovers *structured* sparse vectors rather than
//! all sparse vectors:
//!
//! * [`sparsity`]: sparsity patterns `(s, M)`, ratio constants, best
//!   structured approximations, relative sparsity `s_k(eps)` and weighted
//!   sparsity norms.
//! * [`operators`]: Fourier, Walsh-Hadamard and Daubechies wavelet
//!   transforms as composable linear operators, row subsampling and
//!   multilevel sampling schemes.
//! * [`solver`]: basis pursuit, basis pursuit denoising and weighted l1
//!   minimisation by a primal-dual splitting, plus an exact rational LP
//!   oracle for small real instances.
//! * [`certify`]: exact and randomized RIP / RIP-in-levels constants,
//!   recovery thresholds, nullspace-property checks and error-bound
//!   constants.
//! * [`fliptest`]: the flip test, the flip test in levels, permutation
//!   sweeps and the generalised flip test for weighted sparsity.
//! * [`counterexamples`]: executable constructions showing that the
//!   dependence of the recovery guarantees on the number of levels and on
//!   the ratio constant cannot be removed, with automated verifiers.
//!
//! All indices are 0-based. Level `i` of a pattern covers the half-open
//! index range `M[i]..M[i+1]`.

pub mod certify;
pub mod counterexamples;
pub mod error;
pub mod fliptest;
pub mod io;
pub mod linalg;
pub mod operators;
pub mod rng;
pub mod solver;
pub mod sparsity;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use operators::{SamplingScheme, SensingOperator};
pub use sparsity::{LevelSupport, RatioConstant, SparsityPattern, Weights};
