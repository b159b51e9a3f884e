use thiserror::Error;

/// Every fallible operation in this crate reports one of these.
///
/// The split matters to callers: input problems (bad descriptors, mismatched
/// rings, oversized requests) are recoverable usage errors, while things like
/// `IntegralityViolation` or `DSquaredNonzero` mean a mathematical check
/// failed on data that parsed fine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("no irreducible polynomial of degree {degree} found over F_{p}")]
    IrreduciblePolyNotFound { p: u64, degree: usize },
    #[error("coefficient e_{0} violates the Eisenstein condition")]
    NotEisenstein(usize),
    #[error("result known to 0 digits")]
    PrecisionExhausted,
    #[error("division by an element that is zero to working precision")]
    DivisionByZeroToPrecision,
    #[error("operands belong to different rings: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("series use different variable sets: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("substituted series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("leading coefficient is not a unit")]
    LeadingCoefficientNotUnit,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element is not integral (valuation {0})")]
    NotIntegral(String),
    #[error("coefficient of degree {degree} has valuation {ord}; expected an integral series")]
    IntegralityViolation { degree: usize, ord: String },
    #[error("logarithm is not p-typical: unexpected term at degree {0}")]
    NotPTypical(usize),
    #[error("degree cap {cap} is too small for this check (need at least {need})")]
    DegreeCapTooSmall { cap: usize, need: usize },
    #[error("height scan hit a leading term at degree {0}, which is not a power of p")]
    HeightNotPPower(usize),
    #[error("no solution at degree {degree}; residual {residual}")]
    Obstruction { degree: usize, residual: String },
    #[error("uniqueness failed at degree {0}; this is a bug")]
    NonUniqueSolution(usize),
    #[error("multiplication table is not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("multiplication table is not commutative at basis pair ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("multiplication table has no unit row matching the declared unit")]
    UnitMissing,
    #[error("d^2 != 0 in assembled Koszul complex at degree {0}; this is a bug")]
    DSquaredNonzero(usize),
    #[error("matrix of size {rows}x{cols} exceeds the homology size limit")]
    SizeLimit { rows: usize, cols: usize },
    #[error("operation not supported over base {0}")]
    UnsupportedBase(String),
    #[error("regularity criteria disagree: homological={homological}, direct={direct}")]
    RegularityCriteriaDisagree { homological: bool, direct: bool },
    #[error("search space of size {0} exceeds the enumeration guard")]
    SearchSpaceTooLarge(u128),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
