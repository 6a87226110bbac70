use thiserror::Error;

use crate::diffeo::Smoothness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("derivative of order {order} requested from a map of class {smoothness}")]
    OrderUnsupported { order: u8, smoothness: Smoothness },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("point {x} lies outside the interval [0, 1]")]
    OutOfDomain { x: f64 },

    #[error("root finder did not converge after {iterations} iterations (target {target})")]
    ConvergenceFailure { iterations: usize, target: f64 },

    #[error("Möbius matrix has non-positive determinant {det}")]
    DegenerateMatrix { det: f64 },

    #[error("second derivative changes sign on orbit interval {i} (f''({x}) = {value})")]
    SignConditionViolated { i: i64, x: f64, value: f64 },

    #[error("orbit interval [{a}, {b}] is not contained in a fundamental domain")]
    OverlappingOrbit { a: f64, b: f64 },

    #[error("orbit sum tail did not drop below {tol} within {max_terms} terms")]
    NonConvergentTail { tol: f64, max_terms: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("certificate condition `{condition}` failed (last m tried: {m})")]
    ConditionFailure { condition: String, m: u32 },

    #[error("K = {0} is outside (0, 2]")]
    BadK(f64),

    #[error("nonlinearity has mean {mean}, circle maps require mean zero")]
    MeanNotZero { mean: f64 },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("fragmentation step {step} has distance {distance} >= epsilon {epsilon}")]
    StepBoundViolated {
        step: usize,
        distance: f64,
        epsilon: f64,
    },

    #[error("map does not fix 0 (f(0) = {value})")]
    NotStabilizer { value: f64 },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
