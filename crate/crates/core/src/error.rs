use thiserror::Error;

/// Errors raised by the exact algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series has no nonzero leading term")]
    ZeroLeadingTerm,
    #[error("leading coefficient {0} has no canonical power in the scalar field")]
    NonComputablePower(String),
    #[error("exponent grid overflow: {0}")]
    GridOverflow(String),
    #[error("exponent {exponent} does not fit grid 1/{grid}")]
    GridMismatch { exponent: String, grid: u64 },
    #[error("insufficient truncation: need O(q^{needed}), have O(q^{available})")]
    InsufficientTruncation { needed: String, available: String },
    #[error("input is not homogeneous")]
    NotHomogeneous,
    #[error("series does not match any modular form of weight {0}")]
    NoFit(i64),
    #[error("not enough coefficients to recognize a form of weight {weight}: have {available}, need {needed}")]
    UnderDetermined {
        weight: i64,
        available: usize,
        needed: usize,
    },
    #[error("divisor does not have top coefficient 1")]
    NotMonicTop,
    #[error("order of dividend ({dividend}) is below order of divisor ({divisor})")]
    OrderMismatch { dividend: usize, divisor: usize },
    #[error("{0} does not divide both top coefficients")]
    NotACommonDivisor(String),
    #[error("operator is not divisible")]
    NotDivisible,
    #[error("operator is zero")]
    ZeroOperator,
    #[error("both operators are zero")]
    BothZero,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("weight {0} is not realizable by a form with constant term 1")]
    WeightNotRealizable(i64),
    #[error("root sum {actual} differs from the required {expected}")]
    RootSumMismatch { expected: String, actual: String },
    #[error("characteristic roots do not share {0} common rational roots")]
    EmptyIntersection(usize),
    #[error("weight bound l + 2n - 2N = {0} exceeds 8")]
    WeightBoundViolated(i64),
    #[error("characteristic polynomial has non-rational roots")]
    IrrationalRoots,
    #[error("characteristic roots {0} and {1} differ by a positive integer")]
    ResonantRoots(String, String),
    #[error("characteristic root {0} is repeated")]
    RepeatedRoots(String),
    #[error("leading exponents are not distinct")]
    ExponentsNotDistinct,
    #[error("recognition failed: {0}")]
    RecognitionFailed(String),
    #[error("unsupported weight {0}")]
    UnsupportedWeight(String),
    #[error("form has a pole at the cusp")]
    NotEvaluable,
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("weight error: {0}")]
    WeightError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
