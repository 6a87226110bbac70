//! Quadrature-defined map families, stored as antiderivative tables.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Interp, DEFAULT_SAMPLES};
use crate::numeric::quad::gauss_legendre5;

/// The bump `ψ(x) = (1 - cos 2πx)/2` and the map with
/// `f'' = K ψ - c_m ψ^m`, `f'(0) = 1`, `f(0) = 0`.
///
/// `c_m` balances the two terms, `c_m ∫ψ^m = K ∫ψ = K/2`, so that `f'` is
/// periodic and `f` closes up to a circle map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    pub k: f64,
    pub m: u32,
    pub c_m: f64,
}

/// `∫_0^1 ψ^m = ∏_{j=1}^m (2j-1)/(2j) = C(2m, m)/4^m`.
pub fn wallis(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, j| acc * (2.0 * j as f64 - 1.0) / (2.0 * j as f64))
}

pub fn psi(x: f64) -> f64 {
    0.5 * (1.0 - (2.0 * PI * x).cos())
}

impl BumpProfile {
    pub fn new(k: f64, m: u32) -> Result<Self> {
        if !(k > 0.0 && k <= 2.0) {
            return Err(Error::BadK(k));
        }
        if m < 2 {
            return Err(Error::InvalidArgument(format!("exponent m must be at least 2, got {m}")));
        }
        Ok(Self { k, m, c_m: 0.5 * k / wallis(m) })
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let s = psi(x);
        self.k * s - self.c_m * s.powi(self.m as i32)
    }

    /// The interior zero of `f''` in `(0, 1/2)`: `ψ(a)^{m-1} = K / c_m`.
    pub fn a_m(&self) -> f64 {
        let s = (self.k / self.c_m).powf(1.0 / (self.m as f64 - 1.0));
        (1.0 - 2.0 * s).acos() / (2.0 * PI)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BumpTables {
    pub profile: BumpProfile,
    /// `f'` with exact slopes `f''` at the nodes.
    pub d1: GridFunction,
    /// `f` with slopes `f'`.
    pub d0: GridFunction,
}

impl BumpTables {
    pub fn build(profile: BumpProfile, samples: usize) -> Result<Self> {
        let n = samples;
        let h = 1.0 / n as f64;
        let f2 = |x: f64| profile.second_derivative(x);
        let mut d1 = Vec::with_capacity(n + 1);
        let mut acc = 1.0;
        d1.push(acc);
        for j in 0..n {
            let a = j as f64 * h;
            acc += gauss_legendre5(f2, a, a + h);
            d1.push(acc);
        }
        let slopes: Vec<f64> = (0..=n).map(|j| f2(j as f64 * h)).collect();
        let d1 = GridFunction::with_slopes(d1, slopes)?;
        let d0 = d1.antiderivative();
        Ok(Self { profile, d1, d0 })
    }

    pub fn build_default(profile: BumpProfile) -> Result<Self> {
        Self::build(profile, DEFAULT_SAMPLES)
    }

    pub fn samples(&self) -> usize {
        self.d1.n_samples()
    }

    /// `(f(t), f'(t), f''(t))` for `t ∈ [0, 1]`.
    pub fn jet(&self, t: f64) -> (f64, f64, f64) {
        (self.d0.eval(t), self.d1.eval(t), self.profile.second_derivative(t))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.d0.eval(t)
    }
}

/// The map `f = (1/C) ∫ exp F`, `F = ∫ H`, whose nonlinearity `f''/f'` is `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityTables {
    pub h: GridFunction,
    /// `x ↦ ∫_0^x exp F / C` with slopes `exp F / C`.
    pub d0: GridFunction,
    pub log_c: f64,
}

impl NonlinearityTables {
    pub fn build(h: GridFunction) -> Result<Self> {
        let n = h.n_samples();
        let step = 1.0 / n as f64;
        let big_f = |x: f64| h.integral_to(x);
        let cells: Vec<f64> = (0..n)
            .map(|j| {
                let a = j as f64 * step;
                gauss_legendre5(|x| big_f(x).exp(), a, a + step)
            })
            .collect();
        let total: f64 = cells.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::QuadratureFailure(format!(
                "normalising constant is {total}"
            )));
        }
        let mut values = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for c in &cells {
            acc += c;
            values.push(acc / total);
        }
        values[n] = 1.0;
        let slopes = (0..=n).map(|j| big_f(j as f64 * step).exp() / total).collect();
        let d0 = GridFunction::with_slopes(values, slopes)?;
        Ok(Self {
            h,
            d0,
            log_c: total.ln(),
        })
    }

    /// `(f(t), log f'(t), f''/f'(t))` for `t ∈ [0, 1]`.
    pub fn jet(&self, t: f64) -> (f64, f64, f64) {
        (self.d0.eval(t), self.h.integral_to(t) - self.log_c, self.h.eval(t))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.d0.eval(t)
    }

    pub fn mean(&self) -> f64 {
        self.h.integral()
    }
}

/// Convenience: sample `H` on `n` cells with the given interpolation.
pub fn sample_nonlinearity(h: impl Fn(f64) -> f64, n: usize, interp: Interp) -> Result<GridFunction> {
    GridFunction::sample(h, n, interp)
}
