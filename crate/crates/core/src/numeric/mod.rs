pub mod extremum;
pub mod quad;
pub mod root;

use serde::{Deserialize, Serialize};

pub use extremum::SupOptions;

/// A numerical estimate with a convergence diagnostic.
///
/// `change` is the difference between the final estimate and the previous
/// refinement level; `converged` records whether it met the requested
/// tolerance. Non-converged estimates are still the best value available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub change: f64,
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            change: 0.0,
            converged: true,
        }
    }
}
