//! Safeguarded root finding for monotone scalar functions.

use crate::error::{Error, Result};

pub const BISECTION_WIDTH: f64 = 1e-8;
pub const NEWTON_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

/// Solves `g(y) = target` for an increasing `g` bracketed by `[lo, hi]`.
///
/// `g` returns `(value, derivative)`. The bracket is bisected down to
/// [`BISECTION_WIDTH`], then Newton steps polish the root to [`NEWTON_TOL`];
/// a Newton step that leaves the bracket falls back to bisection.
pub fn solve_increasing<G>(g: G, target: f64, mut lo: f64, mut hi: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<(f64, f64)>,
{
    let mut iterations = 0;
    while hi - lo > BISECTION_WIDTH {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::ConvergenceFailure { iterations, target });
        }
        let mid = 0.5 * (lo + hi);
        let (v, _) = g(mid)?;
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut y = 0.5 * (lo + hi);
    loop {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::ConvergenceFailure { iterations, target });
        }
        let (v, d) = g(y)?;
        let r = v - target;
        if r.abs() <= 1e-3 * NEWTON_TOL {
            return Ok(y);
        }
        if r < 0.0 {
            lo = lo.max(y);
        } else {
            hi = hi.min(y);
        }
        let mut next = y - r / d;
        if !(next.is_finite() && next >= lo && next <= hi) || d <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        let step = (next - y).abs();
        y = next;
        if step <= 4.0 * f64::EPSILON * (1.0 + y.abs()) || hi - lo <= 4.0 * f64::EPSILON * (1.0 + y.abs()) {
            return Ok(y);
        }
    }
}

/// Plain bisection for a sign change of `g` on `[lo, hi]` down to width `tol`.
pub fn bisect<G>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut glo = g(lo)?;
    if glo == 0.0 {
        return Ok(lo);
    }
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::ConvergenceFailure { iterations, target: 0.0 });
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_polish_reaches_tolerance() {
        let y = solve_increasing(|x| Ok((x * x * x + x, 3.0 * x * x + 1.0)), 2.0, -5.0, 5.0).unwrap();
        assert!((y - 1.0).abs() < 1e-13);
    }

    #[test]
    fn flat_region_still_converges() {
        // derivative vanishes at the root
        let y = solve_increasing(|x| Ok((x.powi(3), 3.0 * x * x)), 0.0, -1.0, 2.0).unwrap();
        assert!(y.abs() < 1e-4);
        assert!(y.powi(3).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_sign_change() {
        let r = bisect(|x| Ok(x.cos() - x), 0.0, 1.0, 1e-13).unwrap();
        assert!((r - 0.739_085_133_215_160_6).abs() < 1e-12);
    }
}
