//! Distortion estimates, periodic orbits and orbit-sum lower bounds.

pub mod lemma;
pub mod periodic;
pub mod report;

use serde::{Deserialize, Serialize};

use crate::constructions::prop2_pair;
use crate::error::{Error, Result};

pub use lemma::{lemma_orbit_sum, lemma_orbit_sum_detailed, LemmaSum};
pub use periodic::{
    classify_c1, periodic_points, rotation_number, rotation_number_default, C1Classification, C1Verdict,
    PeriodicPoint, PeriodicScan, Rational, RotationNumber,
};
pub use report::{asymptotic_distortion, asymptotic_distortion_with, default_schedule, DistortionReport, Verdict};

pub const MAX_WITNESS_N: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteWitness {
    pub n: u32,
    /// Length of the word `gⁿ f g⁻ⁿ`.
    pub word_length: u64,
    pub residual: f64,
    /// `(2n + 1)/2ⁿ`, an upper bound for `ℓ(f^{2ⁿ})/2ⁿ`.
    pub ratio: f64,
}

/// Checks `gⁿ f g⁻ⁿ = f^{2ⁿ}` for the parabolic/hyperbolic Möbius pair.
pub fn discrete_distortion_witness(n: u32) -> Result<DiscreteWitness> {
    if n > MAX_WITNESS_N {
        return Err(Error::BudgetExceeded(format!("witness exponent {n} exceeds {MAX_WITNESS_N}")));
    }
    let residual = prop2_pair().relation_residual(n)?;
    let word_length = 2 * n as u64 + 1;
    Ok(DiscreteWitness {
        n,
        word_length,
        residual,
        ratio: word_length as f64 / (1u64 << n) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_values() {
        let w0 = discrete_distortion_witness(0).unwrap();
        assert_eq!((w0.word_length, w0.residual), (1, 0.0));
        assert!(discrete_distortion_witness(1).unwrap().residual < 1e-9);
        let w8 = discrete_distortion_witness(8).unwrap();
        assert_eq!(w8.word_length, 17);
        assert!((w8.ratio - 17.0 / 256.0).abs() < 1e-15);
        assert!(matches!(discrete_distortion_witness(13), Err(Error::BudgetExceeded(_))));
    }
}
