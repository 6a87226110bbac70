//! The nonlinearity map `Φ(f) = f''/f'`, fragmentation paths and the
//! stabilizer quasi-isometry.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diffeo::{circle_gap, DiffeoMap, Domain, Smoothness};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Interp, DEFAULT_SAMPLES};
use crate::metrics::{d_1ac, d_c1_circle, d_c1_interval, distance_to_identity, MetricId, MetricOptions};
use crate::numeric::extremum::sup;
use crate::numeric::Estimate;

/// Circle nonlinearities with `|∫H|` below this are realizable.
pub const MEAN_TOL: f64 = 1e-9;
pub const RESIDUAL_POINTS: usize = 1 << 12;
pub const QI_SAMPLES: usize = 1 << 14;
const STABILIZER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityVector {
    pub h: GridFunction,
    pub mean: f64,
    pub domain: Domain,
}

impl NonlinearityVector {
    pub fn new(h: GridFunction, domain: Domain) -> Self {
        let mean = h.integral();
        Self { h, mean, domain }
    }

    /// Whether `phi_inverse` accepts this vector.
    pub fn realizable(&self) -> bool {
        self.domain == Domain::Interval || self.mean.abs() < MEAN_TOL
    }

    /// Subtracts the mean, landing on the hyperplane `∫H = 0`.
    pub fn project_mean_zero(&self) -> Result<Self> {
        let values = self.h.values().iter().map(|v| v - self.mean).collect();
        Ok(Self::new(GridFunction::new(values, Interp::Linear)?, self.domain))
    }

    /// `∫|H - K|`, the norm in which `Φ` is an isometry.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.h.sub(&other.h)?.l1_norm())
    }
}

pub fn phi(f: &DiffeoMap) -> Result<NonlinearityVector> {
    phi_with(f, DEFAULT_SAMPLES)
}

/// Samples `f''/f'` on `samples` cells with linear interpolation.
pub fn phi_with(f: &DiffeoMap, samples: usize) -> Result<NonlinearityVector> {
    if f.smoothness() < Smoothness::C1AC {
        return Err(Error::OrderUnsupported {
            order: 2,
            smoothness: f.smoothness(),
        });
    }
    let values = (0..=samples)
        .into_par_iter()
        .map(|j| Ok(f.jet(j as f64 / samples as f64)?.nonlin))
        .collect::<Result<Vec<_>>>()?;
    Ok(NonlinearityVector::new(GridFunction::new(values, Interp::Linear)?, f.domain()))
}

/// `f = (1/C) ∫ exp(∫H)`, fixing 0; `H ≡ 0` gives the identity.
pub fn phi_inverse(h: &NonlinearityVector) -> Result<DiffeoMap> {
    if h.h.values().iter().all(|&v| v == 0.0) {
        return Ok(DiffeoMap::identity(h.domain));
    }
    if !h.realizable() {
        return Err(Error::MeanNotZero { mean: h.mean });
    }
    DiffeoMap::from_nonlinearity(h.domain, h.h.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FragmentationKind {
    C1ac,
    C1,
}

/// `f = R_θ ∘ u₁ ∘ ⋯ ∘ u_N` with every `u_i` within `ε` of the identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FragmentationPath {
    pub kind: FragmentationKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// Hashes of `u_i`, each referring to the base map by its own hash.
    pub steps: Vec<String>,
    pub step_distances: Vec<f64>,
    /// A priori bound on every step distance.
    pub step_bound: f64,
    /// Sup-grid distance between the product of steps and `f`.
    pub residual: f64,
    /// `θ = f(0)` for circle maps, 0 on the interval.
    pub rotation: f64,
    pub base_hash: String,
    #[serde(skip)]
    pub step_maps: Vec<DiffeoMap>,
}

/// `f = R_{f(0)} ∘ h` with `h(0) = 0`.
fn stabilizer_split(f: &DiffeoMap) -> Result<(f64, DiffeoMap)> {
    match f.domain() {
        Domain::Interval => Ok((0.0, f.clone())),
        Domain::Circle => {
            let theta = f.value(0.0)?;
            if theta == 0.0 {
                return Ok((0.0, f.clone()));
            }
            Ok((theta, DiffeoMap::rotation(-theta).compose(f)?))
        }
    }
}

/// `⌈x⌉`, ignoring roundoff just above an integer.
fn ceil_tol(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

pub fn fragmentation_n_c1ac(m: f64, epsilon: f64) -> usize {
    ceil_tol(m * (2.0 * m).exp() / epsilon) + 1
}

/// `K(1 − e^{−M})/ε` with `K = e^M` the Lipschitz constant of `log` on `[e^{−M}, ∞)`.
pub fn fragmentation_n_c1(m: f64, epsilon: f64) -> usize {
    ceil_tol(m.exp_m1() / epsilon) + 1
}

pub fn fragmentation_path_c1ac(f: &DiffeoMap, epsilon: f64) -> Result<FragmentationPath> {
    check_epsilon(epsilon)?;
    if f.smoothness() < Smoothness::C1AC {
        return Err(Error::OrderUnsupported {
            order: 2,
            smoothness: f.smoothness(),
        });
    }
    let (theta, h) = stabilizer_split(f)?;
    let m = distance_to_identity(MetricId::C1AC, &h, &MetricOptions::default())?.value;
    let n = fragmentation_n_c1ac(m, epsilon);
    let bound = m * (2.0 * m).exp() / n as f64;
    build_path(FragmentationKind::C1ac, f, theta, &h, m, n, epsilon, bound, d_1ac)
}

pub fn fragmentation_path_c1(f: &DiffeoMap, epsilon: f64) -> Result<FragmentationPath> {
    check_epsilon(epsilon)?;
    let (theta, h) = stabilizer_split(f)?;
    let m = sup(|x| Ok(h.log_deriv(x)?.abs()), h.domain() == Domain::Circle, &MetricOptions::default().sup)?.value;
    let n = fragmentation_n_c1(m, epsilon);
    let bound = m.exp_m1() / n as f64;
    let dist = |a: &DiffeoMap, b: &DiffeoMap| match a.domain() {
        Domain::Circle => d_c1_circle(a, b),
        Domain::Interval => d_c1_interval(a, b),
    };
    build_path(FragmentationKind::C1, f, theta, &h, m, n, epsilon, bound, dist)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn build_path<D>(
    kind: FragmentationKind,
    f: &DiffeoMap,
    theta: f64,
    h: &DiffeoMap,
    m: f64,
    n: usize,
    epsilon: f64,
    step_bound: f64,
    dist: D,
) -> Result<FragmentationPath>
where
    D: Fn(&DiffeoMap, &DiffeoMap) -> Result<Estimate> + Sync,
{
    // f_i = (i/N) id + (1 − i/N) h, so f_0 = h and f_N = id
    let interp = (0..=n)
        .map(|i| {
            if i == n {
                Ok(DiffeoMap::identity(h.domain()))
            } else {
                DiffeoMap::blend(i as f64 / n as f64, h)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    // d(u_i, e) = d(f_{i-1} ∘ f_i⁻¹, e) = d(f_{i-1}, f_i) by right-invariance
    let step_distances = (1..=n)
        .into_par_iter()
        .map(|i| Ok(dist(&interp[i - 1], &interp[i])?.value))
        .collect::<Result<Vec<_>>>()?;
    if let Some((i, &d)) = step_distances.iter().enumerate().find(|(_, &d)| !(d < epsilon)) {
        return Err(Error::StepBoundViolated {
            step: i + 1,
            distance: d,
            epsilon,
        });
    }
    let step_maps = (1..=n)
        .map(|i| interp[i - 1].compose(&interp[i].invert()?))
        .collect::<Result<Vec<_>>>()?;
    let base_hash = h.descriptor_hash();
    let steps = (1..=n).map(|i| step_hash(&base_hash, i, n)).collect();
    let residual = product_residual(f, theta, &step_maps)?;
    Ok(FragmentationPath {
        kind,
        n,
        epsilon,
        m,
        steps,
        step_distances,
        step_bound,
        residual,
        rotation: theta,
        base_hash,
        step_maps,
    })
}

/// Hash of the descriptor of `u_i` with the base map replaced by `{"ref": hash}`.
fn step_hash(base: &str, i: usize, n: usize) -> String {
    let blend = |w: f64| serde_json::json!({"type": "blend", "weight": w, "map": {"ref": base}});
    let outer = blend((i - 1) as f64 / n as f64);
    let inner = if i == n {
        serde_json::json!({"type": "identity"})
    } else {
        serde_json::json!({"type": "inverse", "map": blend(i as f64 / n as f64)})
    };
    let d = serde_json::json!({"type": "compose", "outer": outer, "inner": inner});
    hex::encode(Sha256::digest(d.to_string().as_bytes()))
}

/// `sup_x |R_θ u₁ ⋯ u_N (x) − f(x)|`, applying the steps right to left.
fn product_residual(f: &DiffeoMap, theta: f64, steps: &[DiffeoMap]) -> Result<f64> {
    let errs = (0..=RESIDUAL_POINTS)
        .into_par_iter()
        .map(|j| {
            let x = j as f64 / RESIDUAL_POINTS as f64;
            let mut y = x;
            for u in steps.iter().rev() {
                y = u.value(y)?;
            }
            y += theta;
            let fx = f.value(x)?;
            Ok(match f.domain() {
                Domain::Circle => circle_gap(y, fx),
                Domain::Interval => (y - fx).abs(),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// `sup_{f ∈ family} d(f, e)`.
pub fn coarse_bound_score(family: &[DiffeoMap], metric: MetricId) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let opts = MetricOptions::default();
    family
        .par_iter()
        .map(|f| Ok(distance_to_identity(metric, f, &opts)?.value))
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max))
}

fn require_stabilizer(f: &DiffeoMap) -> Result<()> {
    if f.domain() != Domain::Circle {
        return Err(Error::DomainMismatch("stabilizer elements are circle maps".into()));
    }
    let value = f.value(0.0)?;
    if circle_gap(value, 0.0) > STABILIZER_TOL {
        return Err(Error::NotStabilizer { value });
    }
    Ok(())
}

/// `x ↦ log f'(x) − log f'(0)`, a continuous function vanishing at both ends.
pub fn appendix_qi_map(f: &DiffeoMap) -> Result<GridFunction> {
    require_stabilizer(f)?;
    let l0 = f.log_deriv(0.0)?;
    let values = (0..=QI_SAMPLES)
        .into_par_iter()
        .map(|j| Ok(f.log_deriv(j as f64 / QI_SAMPLES as f64)? - l0))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(values, Interp::Linear)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilipschitzCheck {
    pub sigma: f64,
    pub d: f64,
    pub ok: bool,
}

/// Compares `σ(f, g) = sup|(log f' − log f'(0)) − (log g' − log g'(0))|`
/// with `d_c1_circle(f, g)`; they agree up to a factor 2.
pub fn bilipschitz_check(f: &DiffeoMap, g: &DiffeoMap) -> Result<BilipschitzCheck> {
    require_stabilizer(f)?;
    require_stabilizer(g)?;
    let (f0, g0) = (f.log_deriv(0.0)?, g.log_deriv(0.0)?);
    let opts = MetricOptions::default();
    let sigma = sup(
        |x| Ok((f.log_deriv(x)? - f0 - g.log_deriv(x)? + g0).abs()),
        true,
        &opts.sup,
    )?
    .value;
    let d = d_c1_circle(f, g)?.value;
    Ok(BilipschitzCheck {
        sigma,
        d,
        ok: sigma <= 2.0 * d + 1e-6 && d <= 2.0 * sigma + 1e-6,
    })
}
