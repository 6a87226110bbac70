//! Orbit sums `Σ_i ∫_{fⁱ(a)}^{fⁱ(b)} f''/f'` bounding `lim d_1ac(fⁿ, e)/n` from below.

use serde::{Deserialize, Serialize};

use crate::diffeo::{DiffeoMap, Smoothness};
use crate::error::{Error, Result};

pub const DEFAULT_TAIL_TOL: f64 = 1e-8;
pub const MAX_TERMS: usize = 100_000;
/// Samples of `f''/f'` per orbit interval for the sign check.
pub const SIGN_SAMPLES: usize = 16;
pub const SIGN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSum {
    /// `|Σ_i ∫ f''/f'|`.
    pub value: f64,
    pub signed: f64,
    /// Number of orbit intervals with `i ≥ 0` and `i < 0`.
    pub forward_terms: usize,
    pub backward_terms: usize,
    pub last_increment: f64,
}

pub fn lemma_orbit_sum(f: &DiffeoMap, a: f64, b: f64, tail_tol: f64) -> Result<f64> {
    Ok(lemma_orbit_sum_detailed(f, a, b, tail_tol)?.value)
}

pub fn lemma_orbit_sum_detailed(f: &DiffeoMap, a: f64, b: f64, tail_tol: f64) -> Result<LemmaSum> {
    if f.smoothness() < Smoothness::C1AC {
        return Err(Error::OrderUnsupported {
            order: 2,
            smoothness: f.smoothness(),
        });
    }
    if !(a < b) || !(tail_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need a < b and a positive tail tolerance, got a={a}, b={b}, tol={tail_tol}"
        )));
    }
    let mut sign = 0.0;
    let fwd = walk(f, f, a, b, tail_tol, 0, 1, &mut sign)?;
    let finv = f.invert()?;
    let (ua, ub) = (finv.value(a)?, finv.value(b)?);
    let bwd = walk(f, &finv, ua, ub, tail_tol, -1, -1, &mut sign)?;
    let signed = fwd.0 + bwd.0;
    if signed != 0.0 {
        let (fa, fb) = (f.value(a)?, f.value(b)?);
        if !(fa >= b || fb <= a) {
            return Err(Error::OverlappingOrbit { a, b });
        }
    }
    Ok(LemmaSum {
        value: signed.abs(),
        signed,
        forward_terms: fwd.1,
        backward_terms: bwd.1,
        last_increment: fwd.2.max(bwd.2),
    })
}

/// Sums the orbit intervals `[u, v]`, `[s(u), s(v)]`, ... until an increment
/// falls below `tol`. Returns `(sum, terms, last increment)`.
#[allow(clippy::too_many_arguments)]
fn walk(
    f: &DiffeoMap,
    step: &DiffeoMap,
    mut u: f64,
    mut v: f64,
    tol: f64,
    mut i: i64,
    di: i64,
    sign: &mut f64,
) -> Result<(f64, usize, f64)> {
    let mut sum = 0.0;
    for terms in 1..=MAX_TERMS {
        check_sign(f, u, v, i, sign)?;
        let inc = f.log_deriv(v)? - f.log_deriv(u)?;
        sum += inc;
        if inc.abs() < tol {
            return Ok((sum, terms, inc.abs()));
        }
        u = step.value(u)?;
        v = step.value(v)?;
        i += di;
    }
    Err(Error::NonConvergentTail {
        tol,
        max_terms: MAX_TERMS,
    })
}

fn check_sign(f: &DiffeoMap, u: f64, v: f64, i: i64, sign: &mut f64) -> Result<()> {
    for k in 0..=SIGN_SAMPLES {
        let x = u + (v - u) * k as f64 / SIGN_SAMPLES as f64;
        let value = f.jet(x)?.nonlin;
        if value.abs() <= SIGN_TOL {
            continue;
        }
        if *sign == 0.0 {
            *sign = value.signum();
        } else if value.signum() != *sign {
            return Err(Error::SignConditionViolated { i, x, value });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::Domain;

    #[test]
    fn rotation_sums_to_zero() {
        let r = DiffeoMap::rotation(0.3);
        assert_eq!(lemma_orbit_sum(&r, 0.1, 0.7, DEFAULT_TAIL_TOL).unwrap(), 0.0);
    }

    #[test]
    fn sine_arc_telescopes() {
        // On (0, 1/2) the orbit of [a, f(a)] tiles the arc between the fixed
        // points, so the sum is log f'(1/2) - log f'(0) = log((1-α)/(1+α)).
        let alpha = 0.4;
        let f = DiffeoMap::sine(Domain::Circle, alpha, 1).unwrap();
        let a = 0.2;
        let b = f.value(a).unwrap();
        let s = lemma_orbit_sum_detailed(&f, a, b, 1e-13).unwrap();
        let expect = ((1.0 + alpha) / (1.0 - alpha)).ln();
        assert!((s.value - expect).abs() < 1e-7, "{} vs {}", s.value, expect);
        assert!(s.forward_terms > 1 && s.backward_terms > 1);
    }

    #[test]
    fn sign_changes_are_reported() {
        let f = DiffeoMap::sine(Domain::Circle, 0.3, 1).unwrap();
        assert!(matches!(
            lemma_orbit_sum(&f, 0.1, 0.9, DEFAULT_TAIL_TOL),
            Err(Error::SignConditionViolated { .. })
        ));
    }

    #[test]
    fn overlapping_orbits_are_rejected() {
        let f = DiffeoMap::sine(Domain::Circle, 0.05, 1).unwrap();
        assert!(matches!(
            lemma_orbit_sum(&f, 0.01, 0.2, DEFAULT_TAIL_TOL),
            Err(Error::OverlappingOrbit { .. })
        ));
    }
}
