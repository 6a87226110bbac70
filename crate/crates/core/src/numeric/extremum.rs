//! Sup-norm estimation: a uniform grid scan, one refinement doubling, and a
//! golden-section polish around the largest local maxima.

use rayon::prelude::*;

use crate::error::Result;
use crate::numeric::Estimate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupOptions {
    /// Number of grid cells on `[0, 1]` for the first scan.
    pub points: usize,
    /// Successive estimates closer than this count as converged.
    pub tol: f64,
    /// How many local maxima are polished by golden-section search.
    pub polish: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        Self {
            points: 1 << 12,
            tol: 1e-6,
            polish: 8,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximisation of `g` on `[lo, hi]`. Returns the best value seen.
pub fn golden_max<G>(g: &G, mut lo: f64, mut hi: f64, floor: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut best = floor;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    for _ in 0..80 {
        best = best.max(g1).max(g2);
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1)?;
        }
    }
    Ok(best.max(g1).max(g2))
}

fn scan<G>(g: &G, n: usize, periodic: bool) -> Result<Vec<f64>>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let count = if periodic { n } else { n + 1 };
    (0..count)
        .into_par_iter()
        .map(|j| g(j as f64 / n as f64))
        .collect()
}

fn polished_max<G>(g: &G, values: &[f64], n: usize, periodic: bool, polish: usize) -> Result<f64>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let len = values.len();
    let grid_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if polish == 0 {
        return Ok(grid_max);
    }
    let at = |j: isize| -> Option<f64> {
        if periodic {
            Some(values[j.rem_euclid(len as isize) as usize])
        } else if j < 0 || j >= len as isize {
            None
        } else {
            Some(values[j as usize])
        }
    };
    let mut peaks: Vec<usize> = (0..len)
        .filter(|&j| {
            let v = values[j];
            let l = at(j as isize - 1).unwrap_or(f64::NEG_INFINITY);
            let r = at(j as isize + 1).unwrap_or(f64::NEG_INFINITY);
            v >= l && v >= r
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(polish);
    let h = 1.0 / n as f64;
    let polished = peaks
        .par_iter()
        .map(|&j| {
            let x = j as f64 * h;
            let (lo, hi) = if periodic {
                (x - h, x + h)
            } else {
                ((x - h).max(0.0), (x + h).min(1.0))
            };
            golden_max(g, lo, hi, values[j])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(polished.into_iter().fold(grid_max, f64::max))
}

/// Estimates `sup_{x in [0,1]} g(x)`. `g` should already be non-negative
/// (callers pass `|h|`). With `periodic` the point `x = 1` is identified with 0.
pub fn sup<G>(g: G, periodic: bool, opts: &SupOptions) -> Result<Estimate>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let n = opts.points;
    let coarse_vals = scan(&g, n, periodic)?;
    let coarse = polished_max(&g, &coarse_vals, n, periodic, opts.polish)?;
    let fine_vals = scan(&g, 2 * n, periodic)?;
    let fine = polished_max(&g, &fine_vals, 2 * n, periodic, opts.polish)?;
    let value = coarse.max(fine);
    let change = (fine - coarse).abs();
    Ok(Estimate {
        value,
        change,
        converged: change < opts.tol,
    })
}
