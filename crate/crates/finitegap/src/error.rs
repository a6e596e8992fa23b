use num_complex::Complex64;
use thiserror::Error;

/// Errors shared across the construction pipeline.
///
/// Degenerate *inputs* (coinciding points, zero parameters) are rejected
/// eagerly with `DegenerateConfig` / `InvalidRequest`; numerical breakdown of
/// an otherwise admissible configuration surfaces as `NonGenericDivisor`.
#[derive(Debug, Clone, Error)]
pub enum FgError {
    #[error("evaluation at or too close to a pole: λ = {lambda}, nearest pole {pole}")]
    EvaluationAtPole { lambda: Complex64, pole: Complex64 },

    #[error("expression is unbounded at λ = ∞ (numerator degree {num_degree} exceeds denominator degree {den_degree})")]
    UnboundedAtInfinity { num_degree: usize, den_degree: usize },

    #[error("pole order {actual} at {location} exceeds the allowed order {allowed}")]
    PoleOrderExceeded {
        location: String,
        actual: usize,
        allowed: usize,
    },

    #[error("gluing system is numerically singular for this divisor (condition number {condition:.3e} exceeds cutoff {cutoff:.3e})")]
    NonGenericDivisor { condition: f64, cutoff: f64 },

    #[error("degenerate configuration: {reason}")]
    DegenerateConfig { reason: String },

    #[error("evaluation sample λ = {lambda} is too close to the singular set (distance {distance:.3e})")]
    SampleTooClose { lambda: Complex64, distance: f64 },

    #[error("degenerate sample position x = {x}: {reason}")]
    DegeneratePosition { x: f64, reason: String },

    #[error("invalid request: {reason}")]
    InvalidRequest { reason: String },
}

pub type FgResult<T> = Result<T, FgError>;
