pub mod cli;
pub mod coarse;
pub mod constructions;
pub mod diffeo;
pub mod distortion;
pub mod error;
pub mod families;
pub mod grid;
pub mod metrics;
pub mod numeric;
pub mod output;

pub use diffeo::{DiffeoMap, Domain, Smoothness};
pub use error::{Error, Result};
pub use grid::{GridFunction, Interp};
pub use metrics::MetricId;
pub use numeric::Estimate;
