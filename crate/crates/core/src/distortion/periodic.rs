//! Rotation numbers, periodic orbits and the C¹ classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffeo::{circle_gap, DiffeoMap, Domain};
use crate::error::{Error, Result};
use crate::numeric::root::bisect;

pub const DEFAULT_N_ITER: u64 = 10_000;
pub const DEFAULT_ROT_TOL: f64 = 1e-7;
pub const MAX_DENOMINATOR: u64 = 1000;
pub const SCAN_POINTS: usize = 1 << 12;
/// Threshold on `|log multiplier|` for hyperbolicity.
pub const TOL_HYP: f64 = 1e-6;
const CONFIRM_TOL: f64 = 1e-8;
const TOUCH_TOL: f64 = 1e-10;
const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub p: i64,
    pub q: u64,
}

impl Rational {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationNumber {
    /// `Fⁿ(0)/n` for the lift (not reduced mod 1).
    pub estimate: f64,
    pub rational: Option<Rational>,
}

/// Continued-fraction convergents of `x` with denominator at most `q_max`.
pub fn convergents(x: f64, q_max: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 as u64 > q_max {
            break;
        }
        out.push(Rational { p: h2, q: k2 as u64 });
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}

fn displacement(f: &DiffeoMap, q: u64, x: f64) -> Result<f64> {
    let mut y = x;
    for _ in 0..q {
        y = f.value(y)?;
    }
    Ok(y - x)
}

/// Whether `F^q(x) - x - p` has a zero, found by sign change or by minimising
/// its modulus near a touching point.
fn has_periodic_orbit(f: &DiffeoMap, r: Rational, points: usize) -> Result<bool> {
    let g = |x: f64| -> Result<f64> { Ok(displacement(f, r.q, x)? - r.p as f64) };
    let vals = (0..points)
        .into_par_iter()
        .map(|j| g(j as f64 / points as f64))
        .collect::<Result<Vec<_>>>()?;
    if vals.iter().any(|v| v.abs() < CONFIRM_TOL) {
        return Ok(true);
    }
    for j in 0..points {
        let (a, b) = (vals[j], vals[(j + 1) % points]);
        if a.signum() != b.signum() {
            return Ok(true);
        }
    }
    for j in smallest_minima(&vals, true, 8) {
        let x = j as f64 / points as f64;
        let h = 1.0 / points as f64;
        if golden_min(&|x| Ok(g(x)?.abs()), x - h, x + h)? < CONFIRM_TOL {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Estimates the rotation number of a circle map from `n_iter` iterates of 0.
///
/// A rational `p/q` (`q ≤ 1000`) is reported when a convergent of the estimate
/// lies within `tol + 1/n_iter` of it and `F^q(x) = x + p` has a solution.
pub fn rotation_number(f: &DiffeoMap, n_iter: u64, tol: f64) -> Result<RotationNumber> {
    if f.domain() != Domain::Circle {
        return Err(Error::DomainMismatch("rotation numbers are defined for circle maps".into()));
    }
    let n_iter = n_iter.max(1);
    let estimate = displacement(f, n_iter, 0.0)? / n_iter as f64;
    let window = tol + 1.0 / n_iter as f64;
    let mut rational = None;
    for r in convergents(estimate, MAX_DENOMINATOR) {
        if (r.value() - estimate).abs() > window {
            continue;
        }
        if has_periodic_orbit(f, r, 1024)? {
            rational = Some(r);
            break;
        }
    }
    Ok(RotationNumber { estimate, rational })
}

pub fn rotation_number_default(f: &DiffeoMap) -> Result<RotationNumber> {
    rotation_number(f, DEFAULT_N_ITER, DEFAULT_ROT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub x: f64,
    pub period: u64,
    /// `(f^q)'(x)`.
    pub multiplier: f64,
    pub hyperbolic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicScan {
    pub points: Vec<PeriodicPoint>,
    /// Every scanned point satisfies `f^q(x) = x` (e.g. a rational rotation).
    pub continuum_of_fixed_points: bool,
}

fn local_minima(vals: &[f64], periodic: bool) -> Vec<usize> {
    let n = vals.len();
    (0..n)
        .filter(|&j| {
            let l = if j == 0 {
                if periodic { Some(vals[n - 1]) } else { None }
            } else {
                Some(vals[j - 1])
            };
            let r = if j + 1 == n {
                if periodic { Some(vals[0]) } else { None }
            } else {
                Some(vals[j + 1])
            };
            let v = vals[j].abs();
            let strict = l.is_some_and(|l| v < l.abs()) || r.is_some_and(|r| v < r.abs());
            strict && l.is_none_or(|l| v <= l.abs()) && r.is_none_or(|r| v <= r.abs())
        })
        .collect()
}

/// The `k` smallest strict local minima of `|vals|`.
fn smallest_minima(vals: &[f64], periodic: bool, k: usize) -> Vec<usize> {
    let mut m = local_minima(vals, periodic);
    m.sort_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs()).then(a.cmp(&b)));
    m.truncate(k);
    m
}

fn golden_min<G: Fn(f64) -> Result<f64>>(g: &G, lo: f64, hi: f64) -> Result<f64> {
    Ok(golden_argmin(g, lo, hi)?.1)
}

fn golden_argmin<G: Fn(f64) -> Result<f64>>(g: &G, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let inv_phi = 0.618_033_988_749_894_8;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1)?, g(x2)?);
    for _ in 0..100 {
        if hi - lo < 1e-15 {
            break;
        }
        if g1 > g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1)?;
        }
    }
    Ok(if g1 < g2 { (x1, g1) } else { (x2, g2) })
}

/// Points with `f^q(x) = x` (mod 1 on the circle), with their multipliers.
pub fn periodic_points(f: &DiffeoMap, q: u64) -> Result<PeriodicScan> {
    periodic_points_with(f, q, SCAN_POINTS)
}

pub fn periodic_points_with(f: &DiffeoMap, q: u64, scan: usize) -> Result<PeriodicScan> {
    if q == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let periodic = f.domain() == Domain::Circle;
    let count = if periodic { scan } else { scan + 1 };
    let xs: Vec<f64> = (0..count).map(|j| j as f64 / scan as f64).collect();
    let disp = xs
        .par_iter()
        .map(|&x| displacement(f, q, x))
        .collect::<Result<Vec<_>>>()?;

    let shifts: Vec<i64> = if periodic {
        let lo = disp.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = disp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ((lo - 1.0).floor() as i64..=(hi + 1.0).ceil() as i64).collect()
    } else {
        vec![0]
    };

    let mut roots: Vec<f64> = Vec::new();
    for p in shifts {
        let vals: Vec<f64> = disp.iter().map(|d| d - p as f64).collect();
        if vals.iter().all(|v| v.abs() < TOUCH_TOL) {
            return Ok(PeriodicScan {
                points: Vec::new(),
                continuum_of_fixed_points: true,
            });
        }
        let g = |x: f64| -> Result<f64> { Ok(displacement(f, q, x)? - p as f64) };
        let cells = if periodic { count } else { count - 1 };
        for j in 0..cells {
            let k = (j + 1) % count;
            let (a, b) = (vals[j], vals[k]);
            if a == 0.0 {
                roots.push(xs[j]);
            } else if b != 0.0 && a.signum() != b.signum() {
                let hi = xs[j] + 1.0 / scan as f64;
                roots.push(bisect(g, xs[j], hi, 1e-12)?);
            }
        }
        if !periodic && vals[count - 1] == 0.0 {
            roots.push(xs[count - 1]);
        }
        // zeros where the graph touches without crossing
        let h = 1.0 / scan as f64;
        for j in smallest_minima(&vals, periodic, 16) {
            if vals[j] == 0.0 {
                continue;
            }
            let prev = if j == 0 { if periodic { Some(vals[count - 1]) } else { None } } else { Some(vals[j - 1]) };
            let next = if j + 1 == count { if periodic { Some(vals[0]) } else { None } } else { Some(vals[j + 1]) };
            let crossing = prev.is_some_and(|v| v.signum() != vals[j].signum()) || next.is_some_and(|v| v.signum() != vals[j].signum());
            if crossing {
                continue;
            }
            let (lo, hi) = if periodic { (xs[j] - h, xs[j] + h) } else { ((xs[j] - h).max(0.0), (xs[j] + h).min(1.0)) };
            let (x, v) = golden_argmin(&|x| Ok(g(x)?.abs()), lo, hi)?;
            if v < TOUCH_TOL {
                roots.push(x);
            }
        }
    }

    let mut points: Vec<PeriodicPoint> = Vec::new();
    for x in roots {
        let x = if periodic { x.rem_euclid(1.0) } else { x.clamp(0.0, 1.0) };
        let close = |a: f64, b: f64| if periodic { circle_gap(a, b) } else { (a - b).abs() } < MERGE_TOL;
        if points.iter().any(|p| close(p.x, x)) {
            continue;
        }
        let log_mult = f.log_deriv_iterate(q, x)?;
        points.push(PeriodicPoint {
            x,
            period: q,
            multiplier: log_mult.exp(),
            hyperbolic: log_mult.abs() > TOL_HYP,
        });
    }
    points.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(PeriodicScan {
        points,
        continuum_of_fixed_points: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum C1Verdict {
    Distorted,
    Undistorted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C1Classification {
    pub verdict: C1Verdict,
    pub rotation: RotationNumber,
    pub witness: Option<PeriodicPoint>,
}

/// A circle diffeomorphism is C¹-undistorted exactly when it has a
/// hyperbolic periodic point; irrational rotation numbers give distortion.
pub fn classify_c1(f: &DiffeoMap, q_max: u64) -> Result<C1Classification> {
    let rotation = rotation_number_default(f)?;
    let Some(r) = rotation.rational else {
        return Ok(C1Classification {
            verdict: C1Verdict::Distorted,
            rotation,
            witness: None,
        });
    };
    if r.q > q_max {
        return Err(Error::BudgetExceeded(format!(
            "rotation number {r} has denominator above q_max = {q_max}"
        )));
    }
    let scan = periodic_points(f, r.q)?;
    let witness = scan
        .points
        .iter()
        .filter(|p| p.hyperbolic)
        .max_by(|a, b| a.multiplier.ln().abs().total_cmp(&b.multiplier.ln().abs()))
        .copied();
    Ok(C1Classification {
        verdict: if witness.is_some() { C1Verdict::Undistorted } else { C1Verdict::Distorted },
        rotation,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::Mobius;

    #[test]
    fn convergents_of_simple_fractions() {
        let c = convergents(0.25, 1000);
        assert_eq!(c.last(), Some(&Rational { p: 1, q: 4 }));
        let g = convergents((5f64.sqrt() - 1.0) / 2.0, 1000);
        assert_eq!(g.last(), Some(&Rational { p: 610, q: 987 }));
    }

    #[test]
    fn rotation_by_quarter() {
        let r = rotation_number_default(&DiffeoMap::rotation(0.25)).unwrap();
        assert!((r.estimate - 0.25).abs() < 1e-12);
        assert_eq!(r.rational, Some(Rational { p: 1, q: 4 }));
    }

    #[test]
    fn golden_rotation_has_no_rational() {
        let r = rotation_number_default(&DiffeoMap::rotation((5f64.sqrt() - 1.0) / 2.0)).unwrap();
        assert!(r.rational.is_none());
    }

    #[test]
    fn hyperbolic_fixed_points() {
        let g = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0).unwrap());
        let scan = periodic_points(&g, 1).unwrap();
        assert_eq!(scan.points.len(), 2);
        assert!(scan.points[0].x.abs() < 1e-12);
        assert!((scan.points[0].multiplier - 0.5).abs() < 1e-6);
        assert!((scan.points[1].x - 0.5).abs() < 1e-12);
        assert!((scan.points[1].multiplier - 2.0).abs() < 1e-6);
    }

    #[test]
    fn half_rotation_is_a_continuum() {
        let scan = periodic_points(&DiffeoMap::rotation(0.5), 2).unwrap();
        assert!(scan.continuum_of_fixed_points);
    }

    #[test]
    fn touching_fixed_point_is_found() {
        // parabolic map conjugated away from the grid
        let f = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 1.0, 1.0).unwrap());
        let r = DiffeoMap::rotation(0.123_456_7);
        let h = r.compose(&f).unwrap().compose(&r.invert().unwrap()).unwrap();
        let scan = periodic_points(&h, 1).unwrap();
        assert_eq!(scan.points.len(), 1, "{:?}", scan.points);
        assert!(circle_gap(scan.points[0].x, 0.123_456_7) < 1e-6);
        assert!(!scan.points[0].hyperbolic);
    }

    #[test]
    fn interval_rejected_for_rotation_number() {
        assert!(matches!(
            rotation_number_default(&DiffeoMap::identity(Domain::Interval)),
            Err(Error::DomainMismatch(_))
        ));
    }
}
