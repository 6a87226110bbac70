//! Rotation numbers of `R_θ ∘ f` along a grid of `θ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffeo::{DiffeoMap, Domain};
use crate::distortion::periodic::{rotation_number, Rational, DEFAULT_N_ITER, DEFAULT_ROT_TOL};
use crate::error::{Error, Result};

/// Consecutive equal rationals reported as a mode-locked plateau.
pub const PLATEAU_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub rotation: f64,
    pub rational: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub theta_start: f64,
    pub theta_end: f64,
    pub rational: Rational,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationSweep {
    pub rows: Vec<SweepRow>,
    pub plateaus: Vec<Plateau>,
    /// Largest drop between consecutive estimates (0 when monotone).
    pub max_decrease: f64,
}

impl RotationSweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,rotation,rational\n");
        for r in &self.rows {
            let q = r.rational.map(|q| q.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", r.theta, r.rotation, q));
        }
        out
    }
}

/// Rows come back sorted by `θ`. Rationals are confirmed by the existence of
/// a periodic orbit, so every plateau is backed by one.
pub fn rotation_sweep(f: &DiffeoMap, thetas: &[f64]) -> Result<RotationSweep> {
    if f.domain() != Domain::Circle {
        return Err(Error::DomainMismatch("rotation sweeps need a circle map".into()));
    }
    let mut thetas = thetas.to_vec();
    thetas.sort_by(f64::total_cmp);
    let rows = thetas
        .par_iter()
        .map(|&theta| {
            let g = DiffeoMap::rotation(theta).compose(f)?;
            let r = rotation_number(&g, DEFAULT_N_ITER, DEFAULT_ROT_TOL)?;
            Ok(SweepRow {
                theta,
                rotation: r.estimate,
                rational: r.rational,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_decrease = rows
        .windows(2)
        .map(|w| w[0].rotation - w[1].rotation)
        .fold(0.0, f64::max);
    Ok(RotationSweep {
        plateaus: plateaus(&rows),
        rows,
        max_decrease,
    })
}

fn plateaus(rows: &[SweepRow]) -> Vec<Plateau> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let mut end = start + 1;
        if let Some(q) = rows[start].rational {
            while end < rows.len() && rows[end].rational == Some(q) {
                end += 1;
            }
            if end - start >= PLATEAU_RUN {
                out.push(Plateau {
                    theta_start: rows[start].theta,
                    theta_end: rows[end - 1].theta,
                    rational: q,
                    rows: end - start,
                });
            }
        }
        start = end;
    }
    out
}
