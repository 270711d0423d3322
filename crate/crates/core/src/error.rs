use thiserror::Error;

use crate::curve::CurvePoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("field of size {size} exceeds the enumeration bound {cap}")]
    FieldTooLarge { size: u64, cap: u64 },
    #[error("curve is singular (discriminant is zero)")]
    SingularCurve,
    #[error("point {0} is not on the curve")]
    PointNotOnCurve(String),
    #[error("the zero function has no valuation")]
    ZeroFunction,
    #[error("function has a pole at {0}")]
    PoleAtPoint(String),
    #[error("expansion precision {requested} does not reach the leading term")]
    PrecisionTooLow { requested: i64 },
    #[error("divisor is not principal")]
    NotPrincipal,
    #[error("rank {0} is too small (need at least 2)")]
    RankTooSmall(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("rank {r} / twist {m} outside supported range (r <= {max_r}, |m| <= {max_m})")]
    RankOrTwistTooLarge {
        r: usize,
        m: i64,
        max_r: usize,
        max_m: i64,
    },
    #[error("space of {size} states exceeds the enumeration cap {cap}")]
    SpaceTooLarge { size: u128, cap: u64 },
    #[error("evaluation point coincides with Q = O")]
    PointAtQ,
    #[error("evaluation points are not pairwise distinct")]
    DuplicatePoints,
    #[error("no configuration found after {explored} candidates (exhaustive: {exhaustive}, depth cap {depth_cap})")]
    NotFound {
        explored: u64,
        exhaustive: bool,
        depth_cap: u64,
    },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn not_on_curve(p: &CurvePoint) -> Self {
        Error::PointNotOnCurve(format!("{p:?}"))
    }
}
