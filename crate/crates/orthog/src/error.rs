use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature order {order} outside supported range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("tridiagonal eigenvalue iteration failed to converge (order {order})")]
    EigenNonConvergence { order: usize },

    #[error("quadrature rule (measure {rule}) does not match family measure {family}")]
    MeasureMismatch { rule: String, family: String },

    #[error("rule order {order} too small: need at least {needed}")]
    RuleOrderTooSmall { order: usize, needed: usize },

    #[error("non-finite integrand value at node x = {node}")]
    NonFiniteIntegrand { node: f64 },

    #[error("value overflows f64; log value = {log_value}")]
    Overflow { log_value: f64 },

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("negative time t = {0} for semigroup")]
    NegativeTime(f64),

    #[error("evaluation point x = {x} rejected: {reason}")]
    BadEvaluationPoint { x: f64, reason: String },

    #[error("kernel truncation budget not met at N = {n}: |term|/|sum| = {ratio:.3e}")]
    TruncationBudget { n: usize, ratio: f64 },

    #[error("g-function radicand {0:.3e} below clamp tolerance; series or normalization bug")]
    NegativeRadicand(f64),

    #[error("window condition violated: need sqrt(param) > K (param = {param}, K = {k})")]
    WindowCondition { param: f64, k: f64 },

    #[error("series cap M = {m} too small to resolve the tail (last-block share {share:.3e})")]
    TailNotConverged { m: usize, share: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
