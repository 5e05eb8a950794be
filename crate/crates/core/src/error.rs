use thiserror::Error;

/// Errors raised by the evaluation and audit routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure space must contain at least one point")]
    EmptySpace,

    #[error("weight {index} is {value}; weights must be strictly positive and finite")]
    InvalidWeight { index: usize, value: f64 },

    #[error("value {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("function has {found} values but the measure space has {expected} points")]
    MisalignedFunction { expected: usize, found: usize },

    #[error("value {index} is {value}; negative exponents need strictly positive values")]
    NonpositiveValueForNegativeP { index: usize, value: f64 },

    #[error("value {index} is {value}; exponents in (1,2) need strictly positive values")]
    NonpositiveValueInReverseRegion { index: usize, value: f64 },

    #[error("exponent must be nonzero")]
    ZeroExponent,

    #[error("f + g vanishes at point {index}")]
    ZeroSumPoint { index: usize },

    #[error("value {index} is negative ({value})")]
    NegativeInput { index: usize, value: f64 },

    #[error("a norm in the denominator is zero")]
    ZeroNorm,

    #[error("both functions vanish identically")]
    ZeroPair,

    #[error("weights sum to {sum}, not 1")]
    NotProbabilitySpace { sum: f64 },

    #[error("alpha value {index} is {value}, outside the admissible range")]
    OutOfRangeAlpha { index: usize, value: f64 },

    #[error("argument {0} must be strictly positive")]
    NonpositiveArgument(f64),

    #[error("exponent {p} out of range: {reason}")]
    ExponentOutOfRange { p: f64, reason: &'static str },

    #[error("endpoint a in {{0, 1}} with a negative exponent")]
    EndpointWithNegativeP,

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("target {target} outside the range of b on [1/2, 1) for p = {p}")]
    TargetOutOfRange { target: f64, p: f64 },

    #[error("singular point at x = {x}")]
    SingularPoint { x: f64 },

    #[error("t = {t} outside (0, 1]")]
    DomainError { t: f64 },

    #[error("{name} is undefined at c = {c}")]
    NameRequiresC { name: &'static str, c: f64 },

    #[error("sign scan too coarse: {0}")]
    TooCoarse(String),

    #[error("dimension {dim} outside [1, 64]")]
    DimOutOfRange { dim: usize },

    #[error("matrix is not Hermitian (residue {residue})")]
    NotHermitian { residue: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrices have different dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("exponent {p} is not a power of two; only p = 2^k is supported")]
    UnsupportedExponent { p: f64 },

    #[error("unknown precision mode {0:?} (expected \"double\" or \"high\")")]
    UnknownPrecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
