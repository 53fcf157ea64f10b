use thiserror::Error;

/// Errors raised by the exact and numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("polynomial {poly} does not split into linear factors over Q(i)")]
    NotSplit { poly: String },
    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(i64),
    #[error("map is constant")]
    ConstantMap,
    #[error("fiber over {point} is not Q(i)-rational")]
    IrrationalFiber { point: String },
    #[error("supports collide at {point}")]
    SupportCollision { point: String },
    #[error("points are not pairwise distinct")]
    RepeatedPoints,
    #[error("degenerate Moebius map (ad - bc = 0)")]
    DegenerateMobius,
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty cycle is not admissible here")]
    EmptyCycle,
    #[error("no witness found within {budget} candidates")]
    WitnessBudgetExhausted { budget: usize },
    #[error("invalid curve configuration: {0}")]
    Configuration(String),
    #[error("family template requires m = n (got m = {m}, n = {n})")]
    FamilyRequiresEqual { m: i64, n: i64 },
    #[error("invalid template parameters: {0}")]
    Template(String),
    #[error("point {0} is a zero or pole of an input function")]
    SingularPoint(String),
    #[error("inputs are not in general position: {0}")]
    GeneralPosition(String),
    #[error("multiplicity mismatch on curve {curve}: {detail}")]
    Multiplicity { curve: String, detail: String },
    #[error("quadrature did not converge (best estimate {best}, error estimate {error_estimate})")]
    NonConvergence { best: f64, error_estimate: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
