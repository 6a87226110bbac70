//! Finite-n evidence for `lim d(fⁿ, e)/n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffeo::DiffeoMap;
use crate::error::{Error, Result};
use crate::metrics::{distance_to_identity, MetricId, MetricOptions};

pub const DEFAULT_N_MAX: u64 = 256;
pub const MAX_N: u64 = 1 << 16;
pub const DISTORTED_THRESHOLD: f64 = 1e-2;
pub const UNDISTORTED_THRESHOLD: f64 = 5e-2;
/// Relative spread of the last three ratios regarded as stable.
pub const STABLE_SPREAD: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    LikelyDistorted,
    LikelyUndistorted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub metric: MetricId,
    pub schedule: Vec<u64>,
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
    pub running_inf: Vec<f64>,
    /// Whether each distance met its estimator tolerance.
    pub converged: Vec<bool>,
    pub limit_estimate: f64,
    pub verdict: Verdict,
    pub distorted_threshold: f64,
    pub undistorted_threshold: f64,
    /// Hash of the map descriptor, empty when built from raw numbers.
    #[serde(default)]
    pub descriptor_hash: String,
    #[serde(default)]
    pub sup_points: usize,
    #[serde(default)]
    pub quad_panels: usize,
}

/// `{1, 2, 4, ..} ∪ {n_max}`.
pub fn default_schedule(n_max: u64) -> Vec<u64> {
    let mut s: Vec<u64> = std::iter::successors(Some(1u64), |n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect();
    if s.last() != Some(&n_max) {
        s.push(n_max);
    }
    s
}

pub fn asymptotic_distortion(f: &DiffeoMap, metric: MetricId, n_max: u64) -> Result<DistortionReport> {
    asymptotic_distortion_with(f, metric, &default_schedule(n_max), &MetricOptions::default())
}

pub fn asymptotic_distortion_with(
    f: &DiffeoMap,
    metric: MetricId,
    schedule: &[u64],
    opts: &MetricOptions,
) -> Result<DistortionReport> {
    if schedule.is_empty() || schedule.contains(&0) {
        return Err(Error::InvalidArgument("schedule needs positive iterate counts".into()));
    }
    if let Some(&n) = schedule.iter().find(|&&n| n > MAX_N) {
        return Err(Error::BudgetExceeded(format!("iterate count {n} exceeds {MAX_N}")));
    }
    if f.smoothness() < metric.required_smoothness() {
        return Err(Error::OrderUnsupported {
            order: 2,
            smoothness: f.smoothness(),
        });
    }
    let estimates = schedule
        .par_iter()
        .map(|&n| distance_to_identity(metric, &f.iterate(n as i64)?, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut rep = build_report(
        metric,
        schedule.to_vec(),
        estimates.iter().map(|e| e.value).collect(),
        estimates.iter().map(|e| e.converged).collect(),
    );
    rep.descriptor_hash = f.descriptor_hash();
    rep.sup_points = opts.sup.points;
    rep.quad_panels = opts.panels;
    Ok(rep)
}

pub(crate) fn build_report(metric: MetricId, schedule: Vec<u64>, distances: Vec<f64>, converged: Vec<bool>) -> DistortionReport {
    let ratios: Vec<f64> = distances.iter().zip(&schedule).map(|(d, &n)| d / n as f64).collect();
    let running_inf: Vec<f64> = ratios
        .iter()
        .scan(f64::INFINITY, |m, &r| {
            *m = m.min(r);
            Some(*m)
        })
        .collect();
    let limit_estimate = *running_inf.last().unwrap();
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let stable = hi > 0.0 && (hi - lo) <= STABLE_SPREAD * hi;
    let verdict = if limit_estimate < DISTORTED_THRESHOLD && non_increasing {
        Verdict::LikelyDistorted
    } else if limit_estimate > UNDISTORTED_THRESHOLD && stable {
        Verdict::LikelyUndistorted
    } else {
        Verdict::Inconclusive
    };
    DistortionReport {
        metric,
        schedule,
        distances,
        ratios,
        running_inf,
        converged,
        limit_estimate,
        verdict,
        distorted_threshold: DISTORTED_THRESHOLD,
        undistorted_threshold: UNDISTORTED_THRESHOLD,
        descriptor_hash: String::new(),
        sup_points: 0,
        quad_panels: 0,
    }
}

impl DistortionReport {
    pub const CSV_HEADER: &'static str = "n,distance,ratio,running_inf";

    /// CSV with `#`-prefixed metadata lines ahead of the header.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# metric={}\n# descriptor_hash={}\n# sup_points={}\n# quad_panels={}\n# limit_estimate={:e}\n# verdict={:?}\n",
            self.metric, self.descriptor_hash, self.sup_points, self.quad_panels, self.limit_estimate, self.verdict
        );
        out.push_str(&self.to_csv_rows());
        out
    }

    pub fn to_csv_rows(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for i in 0..self.schedule.len() {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                self.schedule[i], self.distances[i], self.ratios[i], self.running_inf[i]
            ));
        }
        out
    }
}
