//! The C²-smooth circle map with a single parabolic fixed point that is
//! nevertheless undistorted in the C^{1+AC} metric.

use serde::{Deserialize, Serialize};

use crate::diffeo::{BumpProfile, BumpTables, DiffeoMap};
use crate::diffeo::tables::{psi, wallis};
use crate::distortion::lemma::{lemma_orbit_sum, DEFAULT_TAIL_TOL};
use crate::error::{Error, Result};
use crate::grid::DEFAULT_SAMPLES;
use crate::numeric::quad::{adaptive_simpson, composite_simpson};
use crate::output::{line_plot_svg, PlotSeries};

pub const DEFAULT_M_CAP: u32 = 1 << 20;
const FIRST_M: u32 = 4;
const CHECK_GRID: usize = 1 << 14;
const FIGURE_SAMPLES: usize = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem3Options {
    pub samples: usize,
    pub m_cap: u32,
    pub tail_tol: f64,
}

impl Default for Theorem3Options {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            m_cap: DEFAULT_M_CAP,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Conditions {
    /// Reported only; `f(x) − x` stays far below `1 − 2p`, so this is never met.
    pub f_p_gt_1_minus_p: bool,
    pub a_m_gt_p: bool,
    pub b_m_lt_1_minus_p: bool,
    /// `f(a_m) > b_m`: the arc `(b_m, f(a_m))` and its orbit avoid `(a_m, b_m)`.
    pub orbit_arc_ok: bool,
    pub int_bound_ok: bool,
    pub sup_bound_ok: bool,
    pub positive_lower_bound: bool,
}

impl Theorem3Conditions {
    /// Conditions required before the map is accepted.
    pub fn gating(&self) -> bool {
        self.a_m_gt_p && self.b_m_lt_1_minus_p && self.orbit_arc_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Certificate {
    #[serde(rename = "K")]
    pub k: f64,
    pub m: u32,
    pub c_m: f64,
    pub a_m: f64,
    pub b_m: f64,
    pub p: f64,
    pub f_p: f64,
    pub f_a_m: f64,
    pub sup_fprime: f64,
    pub int_abs_f2: f64,
    /// `∫ψ^m` in closed form and by quadrature.
    pub wallis: f64,
    pub wallis_quadrature: f64,
    /// `c_m ∫ψ^m`, equal to `K ∫ψ = K/2`.
    pub c_m_times_wallis: f64,
    /// Largest of `|f(0)|, |f(1) − 1|, |f'(0) − 1|, |f'(1) − 1|, |f''(0)|`.
    pub closure_error: f64,
    /// `sup |f'(x) − 1 + f'(1 − x) − 1|` on the check grid.
    pub symmetry_error: f64,
    pub min_fprime: f64,
    pub zero_clusters: Vec<f64>,
    pub lower_bound: f64,
    pub samples: usize,
    pub conditions: Theorem3Conditions,
}

/// Cheap closed-form part of the gating test.
fn profile_gate(profile: &BumpProfile) -> (bool, bool) {
    let p = (20.0 - profile.k) / 40.0;
    let a = profile.a_m();
    (a > p, 1.0 - a < 1.0 - p)
}

pub fn theorem3_build(k: f64, m: Option<u32>) -> Result<(DiffeoMap, Theorem3Certificate)> {
    theorem3_build_with(k, m, &Theorem3Options::default())
}

/// Builds the map for the given `m`, or for the first `m = 4, 8, 16, ...`
/// passing the gating conditions.
pub fn theorem3_build_with(k: f64, m: Option<u32>, opts: &Theorem3Options) -> Result<(DiffeoMap, Theorem3Certificate)> {
    BumpProfile::new(k, 2)?;
    let candidates: Vec<u32> = match m {
        Some(m) => vec![m],
        None => std::iter::successors(Some(FIRST_M), |m| m.checked_mul(2))
            .take_while(|&m| m <= opts.m_cap)
            .collect(),
    };
    let mut last_failure = None;
    for &m in &candidates {
        let profile = BumpProfile::new(k, m)?;
        let (a_ok, b_ok) = profile_gate(&profile);
        if !a_ok || !b_ok {
            let which = if !a_ok { "a_m_gt_p" } else { "b_m_lt_1_minus_p" };
            last_failure = Some(Error::ConditionFailure { condition: which.into(), m });
            continue;
        }
        let tables = BumpTables::build(profile, opts.samples)?;
        let a = profile.a_m();
        if !(tables.value(a) > 1.0 - a) {
            last_failure = Some(Error::ConditionFailure {
                condition: "orbit_arc_ok".into(),
                m,
            });
            continue;
        }
        return certify(tables, opts);
    }
    Err(last_failure.unwrap_or_else(|| Error::InvalidArgument("empty exponent schedule".into())))
}

fn certify(tables: BumpTables, opts: &Theorem3Options) -> Result<(DiffeoMap, Theorem3Certificate)> {
    let profile = tables.profile;
    let (k, m) = (profile.k, profile.m);
    let a = profile.a_m();
    let b = 1.0 - a;
    let p = (20.0 - k) / 40.0;
    let map = DiffeoMap::from_tables(tables.clone());
    let f_p = tables.value(p);
    let f_a_m = tables.value(a);

    let mut sup_fprime = tables.d1.eval(a);
    let mut min_fprime = f64::INFINITY;
    let mut symmetry_error: f64 = 0.0;
    for j in 0..=CHECK_GRID {
        let x = j as f64 / CHECK_GRID as f64;
        let d = tables.d1.eval(x);
        sup_fprime = sup_fprime.max(d);
        min_fprime = min_fprime.min(d);
        symmetry_error = symmetry_error.max((d - 1.0 + tables.d1.eval(1.0 - x) - 1.0).abs());
    }
    let (f0, d0, s0) = tables.jet(0.0);
    let (f1, d1, _) = tables.jet(1.0);
    let closure_error = [f0.abs(), (f1 - 1.0).abs(), (d0 - 1.0).abs(), (d1 - 1.0).abs(), s0.abs()]
        .into_iter()
        .fold(0.0, f64::max);

    let abs_f2 = |x: f64| Ok(profile.second_derivative(x).abs());
    let panels = 1 << 10;
    let mut int_abs_f2 = 0.0;
    for (lo, hi) in [(0.0, a), (a, b), (b, 1.0)] {
        int_abs_f2 += adaptive_simpson(abs_f2, lo, hi, panels, 1e-12)?.value;
    }
    let wallis_quadrature = composite_simpson(|x| Ok(psi(x).powi(m as i32)), 0.0, 1.0, 1 << 16)?;
    let w = wallis(m);
    if (w - wallis_quadrature).abs() > 1e-9 {
        return Err(Error::QuadratureFailure(format!(
            "Wallis integral {w} disagrees with quadrature {wallis_quadrature}"
        )));
    }

    let lower_bound = lemma_orbit_sum(&map, b, f_a_m, opts.tail_tol)?;
    let conditions = Theorem3Conditions {
        f_p_gt_1_minus_p: f_p > 1.0 - p,
        a_m_gt_p: a > p,
        b_m_lt_1_minus_p: b < 1.0 - p,
        orbit_arc_ok: f_a_m > b,
        int_bound_ok: int_abs_f2 <= 2.0 * k + 1e-6,
        sup_bound_ok: sup_fprime <= 1.0 + k / 2.0 + 1e-9,
        positive_lower_bound: lower_bound > 0.0,
    };
    let cert = Theorem3Certificate {
        k,
        m,
        c_m: profile.c_m,
        a_m: a,
        b_m: b,
        p,
        f_p,
        f_a_m,
        sup_fprime,
        int_abs_f2,
        wallis: w,
        wallis_quadrature,
        c_m_times_wallis: profile.c_m * w,
        closure_error,
        symmetry_error,
        min_fprime,
        zero_clusters: second_derivative_zero_clusters(&profile, CHECK_GRID),
        lower_bound,
        samples: tables.samples(),
        conditions,
    };
    Ok((map, cert))
}

/// The orbit-sum lower bound on the arc `(b_m, f(a_m))`.
pub fn theorem3_lower_bound(map: &DiffeoMap, cert: &Theorem3Certificate) -> Result<f64> {
    lemma_orbit_sum(map, cert.b_m, map.value(cert.a_m)?, DEFAULT_TAIL_TOL)
}

/// Zeros of `f''` on `[0, 1]`: grid nodes where it vanishes to `1e-9` and
/// bisected sign changes, merged when closer than one grid cell.
pub fn second_derivative_zero_clusters(profile: &BumpProfile, grid: usize) -> Vec<f64> {
    let h = 1.0 / grid as f64;
    let f2 = |x: f64| profile.second_derivative(x);
    let mut zeros = Vec::new();
    for j in 0..=grid {
        let x = j as f64 * h;
        let v = f2(x);
        if v.abs() <= 1e-9 {
            zeros.push(x);
            continue;
        }
        if j < grid {
            let w = f2(x + h);
            if w.abs() > 1e-9 && v.signum() != w.signum() {
                let (mut lo, mut hi) = (x, x + h);
                while hi - lo > 1e-15 {
                    let mid = 0.5 * (lo + hi);
                    if f2(mid).signum() == v.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                zeros.push(0.5 * (lo + hi));
            }
        }
    }
    let mut clusters: Vec<f64> = Vec::new();
    for z in zeros {
        match clusters.last() {
            Some(&c) if z - c <= h => {}
            _ => clusters.push(z),
        }
    }
    clusters
}

/// `x,f2` at `2¹⁰ + 1` points.
pub fn figure_csv(profile: &BumpProfile) -> String {
    let mut out = String::from("x,f2\n");
    for j in 0..=FIGURE_SAMPLES {
        let x = j as f64 / FIGURE_SAMPLES as f64;
        out.push_str(&format!("{x},{:e}\n", profile.second_derivative(x)));
    }
    out
}

pub fn figure_svg(profile: &BumpProfile) -> String {
    let xs: Vec<f64> = (0..=FIGURE_SAMPLES).map(|j| j as f64 / FIGURE_SAMPLES as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| profile.second_derivative(x)).collect();
    line_plot_svg(
        &format!("f'' for K = {}, m = {}", profile.k, profile.m),
        "x",
        "f''(x)",
        &[PlotSeries { label: "f''".into(), xs, ys }],
    )
}
