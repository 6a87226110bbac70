//! Uniformly sampled functions on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quad::simpson_samples;

pub const DEFAULT_SAMPLES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interp {
    Linear,
    /// Fritsch–Carlson (PCHIP) slopes; preserves monotonicity of the data.
    MonotoneCubic,
    /// Cubic Hermite with caller-supplied exact slopes.
    Hermite,
}

/// Samples `values[j] = f(j / n)` for `j = 0..=n` with a piecewise
/// polynomial interpolant. Evaluation at a node returns the stored value.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
    slopes: Option<Vec<f64>>,
    interp: Interp,
    /// `prefix[j]` is the exact integral of the interpolant over `[0, x_j]`.
    prefix: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>, interp: Interp) -> Result<Self> {
        let n = check_len(values.len())?;
        let slopes = match interp {
            Interp::Linear => None,
            Interp::MonotoneCubic => Some(pchip_slopes(&values, n)),
            Interp::Hermite => {
                return Err(Error::InvalidArgument(
                    "Hermite interpolation needs explicit slopes".into(),
                ))
            }
        };
        Ok(Self::assemble(values, slopes, interp))
    }

    pub fn with_slopes(values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        check_len(values.len())?;
        if slopes.len() != values.len() {
            return Err(Error::InvalidArgument("slope table length mismatch".into()));
        }
        Ok(Self::assemble(values, Some(slopes), Interp::Hermite))
    }

    pub fn sample(f: impl Fn(f64) -> f64, n_samples: usize, interp: Interp) -> Result<Self> {
        let values = (0..=n_samples).map(|j| f(j as f64 / n_samples as f64)).collect();
        Self::new(values, interp)
    }

    fn assemble(values: Vec<f64>, slopes: Option<Vec<f64>>, interp: Interp) -> Self {
        let n = values.len() - 1;
        let h = 1.0 / n as f64;
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for j in 0..n {
            let cell = match &slopes {
                None => 0.5 * h * (values[j] + values[j + 1]),
                Some(m) => h * (0.5 * (values[j] + values[j + 1]) + h * (m[j] - m[j + 1]) / 12.0),
            };
            acc += cell;
            prefix.push(acc);
        }
        Self {
            values,
            slopes,
            interp,
            prefix,
        }
    }

    pub fn n_samples(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> Option<&[f64]> {
        self.slopes.as_deref()
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.n_samples() as f64
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.n_samples();
        let s = x.clamp(0.0, 1.0) * n as f64;
        let j = (s.floor() as usize).min(n - 1);
        (j, s - j as f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (j, t) = self.locate(x);
        if t == 0.0 {
            return self.values[j];
        }
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        match &self.slopes {
            None => y0 + t * (y1 - y0),
            Some(m) => {
                let h = 1.0 / self.n_samples() as f64;
                let (m0, m1) = (m[j] * h, m[j + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                    + (t3 - 2.0 * t2 + t) * m0
                    + (-2.0 * t3 + 3.0 * t2) * y1
                    + (t3 - t2) * m1
            }
        }
    }

    /// Derivative of the interpolant (one-sided at nodes for `Linear`).
    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.n_samples() as f64;
        let (j, t) = self.locate(x);
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        match &self.slopes {
            None => (y1 - y0) * n,
            Some(m) => {
                let h = 1.0 / n;
                let (m0, m1) = (m[j] * h, m[j + 1] * h);
                let t2 = t * t;
                ((6.0 * t2 - 6.0 * t) * y0
                    + (3.0 * t2 - 4.0 * t + 1.0) * m0
                    + (-6.0 * t2 + 6.0 * t) * y1
                    + (3.0 * t2 - 2.0 * t) * m1)
                    * n
            }
        }
    }

    /// Exact integral of the interpolant over `[0, x]`.
    pub fn integral_to(&self, x: f64) -> f64 {
        let (j, t) = self.locate(x);
        if t == 0.0 {
            return self.prefix[j];
        }
        let h = 1.0 / self.n_samples() as f64;
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        let partial = match &self.slopes {
            None => h * (y0 * t + 0.5 * (y1 - y0) * t * t),
            Some(m) => {
                let (m0, m1) = (m[j] * h, m[j + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                let t4 = t3 * t;
                h * ((0.5 * t4 - t3 + t) * y0
                    + (0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2) * m0
                    + (-0.5 * t4 + t3) * y1
                    + (0.25 * t4 - t3 / 3.0) * m1)
            }
        };
        self.prefix[j] + partial
    }

    /// Exact integral of the interpolant over `[0, 1]`.
    pub fn integral(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Composite Simpson on the raw samples, independent of the interpolant.
    pub fn simpson(&self) -> f64 {
        simpson_samples(&self.values, 0.0, 1.0)
    }

    /// Table of `x ↦ ∫_0^x f` on the same nodes, with the samples as slopes.
    pub fn antiderivative(&self) -> GridFunction {
        GridFunction::assemble(self.prefix.clone(), Some(self.values.clone()), Interp::Hermite)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise `self - other` on a common grid.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.n_samples() != other.n_samples() {
            return Err(Error::InvalidArgument("grid sizes differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        let slopes = match (&self.slopes, &other.slopes) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(p, q)| p - q).collect()),
            _ => None,
        };
        let interp = if slopes.is_some() { Interp::Hermite } else { Interp::Linear };
        Ok(GridFunction::assemble(values, slopes, interp))
    }

    /// `∫_0^1 |f|` of the samples by composite Simpson.
    pub fn l1_norm(&self) -> f64 {
        let abs: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        simpson_samples(&abs, 0.0, 1.0)
    }
}

fn check_len(len: usize) -> Result<usize> {
    let n = len.saturating_sub(1);
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "grid needs 2^k + 1 samples with k >= 1, got {len}"
        )));
    }
    Ok(n)
}

fn pchip_slopes(y: &[f64], n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let d: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let mut m = vec![0.0; n + 1];
    for k in 1..n {
        let (a, b) = (d[k - 1], d[k]);
        m[k] = if a * b <= 0.0 { 0.0 } else { 2.0 / (1.0 / a + 1.0 / b) };
    }
    m[0] = pchip_end(d[0], d[1]);
    m[n] = pchip_end(d[n - 1], d[n - 2]);
    m
}

// three-point end slope with the usual shape-preserving clamps
fn pchip_end(d0: f64, d1: f64) -> f64 {
    let m = (3.0 * d0 - d1) / 2.0;
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
