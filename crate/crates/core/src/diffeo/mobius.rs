//! Real Möbius maps `r ↦ (a r + b)/(c r + d)` carried to the circle by the
//! Cayley chart `r = tan(π x)`.
//!
//! The lift is evaluated without ever forming `r`: writing the matrix action
//! on `(cos πx, sin πx)` as `v ↦ α v + β v̄` gives
//!
//! ```text
//! F(x) = x + (arg α + Arg(1 + w)) / π,   w = (β/α) e^{-2πix},
//! ```
//!
//! and `|β/α| < 1` whenever `ad - bc > 0`, so the branch of `Arg` is the
//! principal one and `F` is smooth on all of ℝ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let det = m.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::DegenerateMatrix { det });
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix product `self · other`, i.e. the map `self ∘ other`.
    pub fn mul(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Adjugate; represents the inverse map.
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn powi(&self, n: i64) -> Mobius {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = Mobius::identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            k >>= 1;
        }
        acc
    }

    /// Action on the projective line in homogeneous coordinates `(num : den)`.
    pub fn act_homogeneous(&self, num: f64, den: f64) -> (f64, f64) {
        (self.a * num + self.b * den, self.c * num + self.d * den)
    }

    fn alpha_beta(&self) -> (Complex64, Complex64) {
        // the matrix acting on (cos θ, sin θ) = (den, num) is [[d, c], [b, a]]
        let (p, q, r, s) = (self.d, self.c, self.b, self.a);
        let alpha = Complex64::new(0.5 * (p + s), 0.5 * (r - q));
        let beta = Complex64::new(0.5 * (p - s), 0.5 * (r + q));
        (alpha, beta)
    }

    /// Circle lift in angle coordinates.
    pub fn lift(&self) -> MobiusLift {
        let (alpha, beta) = self.alpha_beta();
        let ratio = beta / alpha;
        let mut lift = MobiusLift {
            ratio,
            offset: alpha.arg() / PI,
        };
        // canonical lift: displacement at 0 lies in (-1/2, 1/2]
        let d0 = lift.displacement(0.0);
        let shift = -(d0 - 0.5).ceil();
        lift.offset += shift;
        lift
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusLift {
    ratio: Complex64,
    offset: f64,
}

impl MobiusLift {
    fn w(&self, x: f64) -> Complex64 {
        self.ratio * Complex64::from_polar(1.0, -2.0 * PI * x)
    }

    fn displacement(&self, x: f64) -> f64 {
        self.offset + (Complex64::new(1.0, 0.0) + self.w(x)).arg() / PI
    }

    pub fn value(&self, x: f64) -> f64 {
        x + self.displacement(x)
    }

    /// `(F(x), log F'(x), F''(x)/F'(x))`.
    pub fn jet(&self, x: f64) -> (f64, f64, f64) {
        let w = self.w(x);
        let one_w = Complex64::new(1.0, 0.0) + w;
        let value = x + self.offset + one_w.arg() / PI;
        let log_d1 = (1.0 - w.norm_sqr()).ln() - one_w.norm_sqr().ln();
        let d1 = (1.0 - w.norm_sqr()) / one_w.norm_sqr();
        let d2 = -4.0 * PI * (w / (one_w * one_w)).im;
        (value, log_d1, d2 / d1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // independent oracle: push the angle through r = tan(πx), apply the
    // matrix to r, and pull back with atan
    fn chart_oracle(m: &Mobius, x: f64) -> f64 {
        let r = (PI * x).tan();
        let s = (m.a * r + m.b) / (m.c * r + m.d);
        (s.atan() / PI).rem_euclid(1.0)
    }

    fn circle_gap(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(1.0);
        d.min(1.0 - d)
    }

    #[test]
    fn lift_agrees_with_tangent_chart() {
        let m = Mobius::new(1.3, -0.4, 0.7, 0.9).unwrap();
        let lift = m.lift();
        for i in 0..1000 {
            let x = (i as f64 + 0.5) / 1000.0;
            if (x - 0.5).abs() < 1e-3 {
                continue;
            }
            assert!(circle_gap(lift.value(x), chart_oracle(&m, x)) < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let lift = m.lift();
        for i in 0..50 {
            let x = i as f64 / 50.0 + 0.003;
            let h = 1e-6;
            let fd = (lift.value(x + h) - lift.value(x - h)) / (2.0 * h);
            let (_, log_d1, nonlin) = lift.jet(x);
            assert!((fd - log_d1.exp()).abs() < 1e-5);
            let fd2 = (lift.jet(x + h).1.exp() - lift.jet(x - h).1.exp()) / (2.0 * h);
            assert!((fd2 - nonlin * log_d1.exp()).abs() < 1e-4);
        }
    }

    #[test]
    fn equivariance_of_lift() {
        let lift = Mobius::new(1.0, 0.0, 1.0, 1.0).unwrap().lift();
        for i in 0..64 {
            let x = i as f64 / 64.0 - 0.31;
            assert!((lift.value(x + 1.0) - lift.value(x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_matrix_is_rejected() {
        assert!(matches!(Mobius::new(1.0, 2.0, 2.0, 4.0), Err(Error::DegenerateMatrix { .. })));
        assert!(Mobius::new(0.0, 1.0, 1.0, 0.0).is_err());
    }
}
