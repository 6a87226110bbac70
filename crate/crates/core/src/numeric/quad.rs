//! Quadrature rules: composite and adaptive Simpson, and a fixed
//! five-point Gauss–Legendre rule used to build antiderivative tables.

use rayon::prelude::*;

use crate::error::Result;
use crate::numeric::Estimate;

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_08,
];

/// Five-point Gauss–Legendre rule on `[a, b]`; exact for polynomials of degree 9.
pub fn gauss_legendre5(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL5_NODES
        .iter()
        .zip(GL5_WEIGHTS.iter())
        .map(|(t, w)| w * f(mid + half * t))
        .sum::<f64>()
        * half
}

/// Composite Simpson rule over equally spaced samples. `values.len()` must be odd.
pub fn simpson_samples(values: &[f64], a: f64, b: f64) -> f64 {
    let n = values.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "Simpson needs an even number of panels");
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[n] + 4.0 * odd + 2.0 * even)
}

/// Composite Simpson with `panels` panels (each panel uses its midpoint).
pub fn composite_simpson<F>(f: F, a: f64, b: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let values = (0..=n)
        .into_par_iter()
        .map(|i| f(a + i as f64 * h))
        .collect::<Result<Vec<_>>>()?;
    Ok(simpson_samples(&values, a, b))
}

const MAX_DEPTH: u32 = 24;

struct Panel {
    sum: f64,
    /// Error estimate left over where refinement hit the depth cap.
    unresolved: f64,
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(f: &F, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    // the second test stops refinement once the difference is pure roundoff
    if diff.abs() <= 15.0 * tol || diff.abs() <= 64.0 * f64::EPSILON * (left.abs() + right.abs()) {
        return Ok((left + right + diff / 15.0, 0.0));
    }
    if depth >= MAX_DEPTH || (b - a) < 1e-15 {
        return Ok((left + right, diff.abs() / 15.0));
    }
    let (l, le) = adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)?;
    let (r, re) = adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)?;
    Ok((l + r, le + re))
}

/// Adaptive Simpson quadrature seeded with `panels` equal panels.
///
/// `tol` is scaled by `max(1, |I₀|)`, where `I₀` is the plain Simpson sum over
/// the seed panels, and split evenly between panels. Subintervals that reach
/// the depth cap keep their error estimate; the result counts as converged
/// when those estimates add up to less than the scaled tolerance. Panels are refined in
/// parallel but summed in index order, so the result does not depend on
/// scheduling.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, panels: usize, tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let width = (b - a) / panels as f64;
    let seeds = (0..panels)
        .into_par_iter()
        .map(|k| {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == panels { b } else { lo + width };
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo)?, f(mid)?, f(hi)?);
            Ok([lo, flo, mid, fmid, hi, fhi])
        })
        .collect::<Result<Vec<_>>>()?;
    let coarse_of = |s: &[f64; 6]| (s[4] - s[0]) / 6.0 * (s[1] + 4.0 * s[3] + s[5]);
    let coarse: f64 = seeds.iter().map(coarse_of).sum();
    let per_panel = tol * coarse.abs().max(1.0) / panels as f64;
    let results = seeds
        .par_iter()
        .map(|s| {
            let whole = coarse_of(s);
            let (sum, unresolved) = adapt(&f, s[0], s[1], s[2], s[3], s[4], s[5], whole, per_panel, 0)?;
            Ok(Panel { sum, unresolved })
        })
        .collect::<Result<Vec<_>>>()?;
    let value: f64 = results.iter().map(|p| p.sum).sum();
    Ok(Estimate {
        value,
        change: (value - coarse).abs(),
        converged: results.iter().map(|p| p.unresolved).sum::<f64>() <= per_panel * panels as f64,
    })
}
