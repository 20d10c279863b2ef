use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sparsity pattern needs at least one level and len(M) = len(s) + 1 (got {budgets} budgets, {boundaries} boundaries)")]
    MalformedPattern { budgets: usize, boundaries: usize },
    #[error("first level boundary must be 0, got {0}")]
    M0NotZero(usize),
    #[error("level boundaries must be strictly increasing (M[{index}] = {value} after {previous})")]
    BoundaryNotIncreasing {
        index: usize,
        previous: usize,
        value: usize,
    },
    #[error("budget {budget} of level {level} exceeds the level width {width}")]
    BudgetExceedsLevelWidth {
        level: usize,
        budget: usize,
        width: usize,
    },
    #[error("sparsity pattern does not cover a vector of length {n}")]
    PatternDoesNotCover { n: usize },
    #[error("ratio constant is infinite")]
    InfiniteRatio,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("epsilon {0} outside [0, 1]")]
    EpsilonOutOfRange(f64),
    #[error("weights must be finite and >= 1 (index {index} has {value})")]
    InvalidWeight { index: usize, value: f64 },
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("signal length {n} is not divisible by 2^{levels}")]
    LengthNotDivisible { n: usize, levels: usize },
    #[error("unsupported wavelet: {0}")]
    UnsupportedWavelet(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("band {band} asks for {requested} samples but has width {width}")]
    BandOverflow {
        band: usize,
        requested: usize,
        width: usize,
    },
    #[error("operator of size {rows}x{cols} exceeds the materialization cap {cap}")]
    TooLarge { rows: usize, cols: usize, cap: usize },
    #[error("enumeration of {count} supports exceeds the cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },
    #[error("kernel dimension {0} is too large for an exact check")]
    KernelTooLarge(usize),
    #[error("rho must lie in (0, 1), got {0}")]
    RhoOutOfRange(f64),
    #[error("tau must be positive, got {0}")]
    TauOutOfRange(f64),
    #[error("vector is not sorted in non-increasing order of non-negative values")]
    NotSorted,
    #[error("construction needs C > a (got a = {a}, C = {c})")]
    ParameterOrder { a: usize, c: usize },
    #[error("construction infeasible: {0}")]
    ParameterInfeasible(String),
    #[error("mover cannot satisfy the weighted budget: {0}")]
    MoverInfeasible(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt file: {0}")]
    CorruptFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
