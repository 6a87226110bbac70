//! Seeded random families of maps for property checks and experiments.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffeo::{DiffeoMap, Domain, Mobius};
use crate::error::Result;
use crate::grid::{GridFunction, Interp};

/// Table size for random nonlinearities; smaller than the default grid
/// because trigonometric polynomials are resolved long before that.
pub const FAMILY_SAMPLES: usize = 1 << 12;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Σ_{k=1}^{terms} a_k cos 2πkx + b_k sin 2πkx` with `|a_k|, |b_k| ≤ amp/k`,
/// so `∫H = 0` up to roundoff.
pub fn random_trig_nonlinearity<R: Rng>(rng: &mut R, terms: u32, amp: f64) -> Result<GridFunction> {
    let coeffs: Vec<(f64, f64)> = (1..=terms)
        .map(|k| {
            let s = amp / k as f64;
            (rng.gen_range(-s..=s), rng.gen_range(-s..=s))
        })
        .collect();
    GridFunction::sample(
        |x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let w = 2.0 * PI * (k + 1) as f64 * x;
                    a * w.cos() + b * w.sin()
                })
                .sum()
        },
        FAMILY_SAMPLES,
        Interp::Linear,
    )
}

/// A circle map fixing 0, built from a random zero-mean nonlinearity.
pub fn random_stabilizer<R: Rng>(rng: &mut R, amp: f64) -> Result<DiffeoMap> {
    let terms = rng.gen_range(1..=3);
    DiffeoMap::from_nonlinearity(Domain::Circle, random_trig_nonlinearity(rng, terms, amp)?)
}

/// A stabilizer whose fixed point 0 has `|log f'(0)| ≥ min_log`.
pub fn random_planted_hyperbolic<R: Rng>(rng: &mut R, amp: f64, min_log: f64) -> Result<DiffeoMap> {
    loop {
        let f = random_stabilizer(rng, amp)?;
        if f.log_deriv(0.0)?.abs() >= min_log {
            return Ok(f);
        }
    }
}

/// An interval map with nonlinearity `c + (trigonometric polynomial)`.
pub fn random_interval_map<R: Rng>(rng: &mut R, amp: f64) -> Result<DiffeoMap> {
    let terms = rng.gen_range(1..=3);
    let trig = random_trig_nonlinearity(rng, terms, amp)?;
    let c = rng.gen_range(-amp..=amp);
    let values = trig.values().iter().map(|v| v + c).collect();
    DiffeoMap::from_nonlinearity(Domain::Interval, GridFunction::new(values, Interp::Linear)?)
}

/// A composition of one to three closed-form sine maps.
pub fn random_sine_composition<R: Rng>(rng: &mut R, domain: Domain, max_amp: f64) -> Result<DiffeoMap> {
    let count = rng.gen_range(1..=3);
    let mut f = DiffeoMap::identity(domain);
    for _ in 0..count {
        let a = rng.gen_range(-max_amp..=max_amp);
        let k = rng.gen_range(1..=3);
        f = DiffeoMap::sine(domain, a, k)?.compose(&f)?;
    }
    Ok(f)
}

/// A random circle map: a sine composition followed by a rotation.
pub fn random_circle_map<R: Rng>(rng: &mut R, max_amp: f64) -> Result<DiffeoMap> {
    let theta = rng.gen_range(0.0..1.0);
    DiffeoMap::rotation(theta).compose(&random_sine_composition(rng, Domain::Circle, max_amp)?)
}

/// A Möbius map with entries in `[-2, 2]` and determinant at least `0.1`.
pub fn random_mobius<R: Rng>(rng: &mut R) -> Result<DiffeoMap> {
    loop {
        let e: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..=2.0));
        if e[0] * e[3] - e[1] * e[2] >= 0.1 {
            return Ok(DiffeoMap::mobius(Mobius::new(e[0], e[1], e[2], e[3])?));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_families_are_reproducible() {
        let a = random_circle_map(&mut rng(7), 0.3).unwrap();
        let b = random_circle_map(&mut rng(7), 0.3).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn stabilizers_fix_zero_and_have_zero_mean() {
        let mut r = rng(1);
        for _ in 0..5 {
            let f = random_stabilizer(&mut r, 1.0).unwrap();
            assert!(f.value(0.0).unwrap().abs() < 1e-15);
            assert!((f.value(1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        let h = random_planted_hyperbolic(&mut r, 1.0, 0.05).unwrap();
        assert!(h.log_deriv(0.0).unwrap().abs() >= 0.05);
    }
}
