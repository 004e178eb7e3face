use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("expected a point of dimension {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("derivative of order {order} is not supported for this family")]
    UnsupportedOrder { order: u8 },
    #[error("Schwarzian undefined at x = {x}: |f'(x)| = {derivative:e}")]
    SingularPoint { x: f64, derivative: f64 },
    #[error("map is not unimodal on the interval: {0}")]
    NotUnimodal(String),
    #[error("no preimage of y = {y} (maximum value {max})")]
    NoPreimage { y: f64, max: f64 },
    #[error("no interior fixed point in [{a}, {b}]")]
    NoInteriorFixedPoint { a: f64, b: f64 },
    #[error("point is not fixed: residual {residual:e}")]
    NotFixed { residual: f64 },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("orbit escaped [0, 1] at step {step} (value {value})")]
    EscapedDomain { step: usize, value: f64 },
    #[error("prehistories belong to different models")]
    ModelMismatch,
    #[error("insufficient depth: need {needed}, have {have}")]
    InsufficientDepth { needed: usize, have: usize },
    #[error("specification spacing {spacing} is below the required {required}")]
    SpacingTooSmall { spacing: i64, required: i64 },
    #[error("sigma = 1 or gamma = 1 is not supported")]
    SigmaOne,
    #[error("power iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },
    #[error("measure and pressure were built for different potentials")]
    MismatchedPotential,
    #[error("inconsistent prehistory at index {index}: residual {residual:e}")]
    Inconsistent { index: usize, residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
