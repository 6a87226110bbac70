//! Concrete maps with checkable certificates.

mod sweep;
mod theorem3;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::diffeo::{circle_gap, DiffeoMap, Mobius};
use crate::error::Result;

pub use sweep::{rotation_sweep, Plateau, RotationSweep, SweepRow, PLATEAU_RUN};
pub use theorem3::{
    figure_csv, figure_svg, second_derivative_zero_clusters, theorem3_build, theorem3_build_with,
    theorem3_lower_bound, Theorem3Certificate, Theorem3Conditions, Theorem3Options, DEFAULT_M_CAP,
};

/// Points used for sup-grid comparisons of circle maps.
pub const RESIDUAL_GRID: usize = 1 << 12;

/// `x ↦ x + θ`; integer `θ` gives the identity of the circle.
pub fn rotation(theta: f64) -> DiffeoMap {
    if theta.fract() == 0.0 {
        DiffeoMap::identity(crate::diffeo::Domain::Circle)
    } else {
        DiffeoMap::rotation(theta)
    }
}

/// The circle map induced by `r ↦ (ar + b)/(cr + d)`; scalar matrices give the identity.
pub fn mobius_circle(a: f64, b: f64, c: f64, d: f64) -> Result<DiffeoMap> {
    let m = Mobius::new(a, b, c, d)?;
    if b == 0.0 && c == 0.0 && a == d {
        return Ok(DiffeoMap::identity(crate::diffeo::Domain::Circle));
    }
    Ok(DiffeoMap::mobius(m))
}

/// `F(r) = r/(r+1)` and `G(r) = r/2` on the circle, with `G F G⁻¹ = F²`.
#[derive(Debug, Clone)]
pub struct MobiusPair {
    pub f: DiffeoMap,
    pub g: DiffeoMap,
    pub f_matrix: Mobius,
    pub g_matrix: Mobius,
    /// Angle of the unique fixed point of `f` (`r = 0`).
    pub fixed_angle: f64,
}

pub fn prop2_pair() -> MobiusPair {
    let f_matrix = Mobius::new(1.0, 0.0, 1.0, 1.0).expect("unimodular");
    let g_matrix = Mobius::new(1.0, 0.0, 0.0, 2.0).expect("positive determinant");
    MobiusPair {
        f: DiffeoMap::mobius(f_matrix),
        g: DiffeoMap::mobius(g_matrix),
        f_matrix,
        g_matrix,
        fixed_angle: 0.0,
    }
}

/// Sup over a uniform grid of the circle distance between two maps.
pub fn sup_grid_distance(a: &DiffeoMap, b: &DiffeoMap, points: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..points {
        let x = j as f64 / points as f64;
        worst = worst.max(circle_gap(a.value(x)?, b.value(x)?));
    }
    Ok(worst)
}

impl MobiusPair {
    /// `gⁿ f g⁻ⁿ` evaluated as a composition, never collapsed to a matrix.
    pub fn conjugated_word(&self, n: u32) -> Result<DiffeoMap> {
        let gn = self.g.iterate(n as i64)?;
        let gm = self.g.iterate(-(n as i64))?;
        gn.compose(&self.f)?.compose(&gm)
    }

    /// `sup_x |gⁿ f g⁻ⁿ(x) − f^{2ⁿ}(x)|` on the residual grid.
    pub fn relation_residual(&self, n: u32) -> Result<f64> {
        let lhs = self.conjugated_word(n)?;
        let rhs = self.f.iterate(1i64 << n)?;
        sup_grid_distance(&lhs, &rhs, RESIDUAL_GRID)
    }
}

/// Second derivative at the fixed point of `f` conjugated into the chart
/// `t = -i log z` on the unit circle, from the change-of-chart rule for
/// `N = h''/h'`:
///
/// `N_T(t) = [N_ψ(f(z)) f'(z) + N_f(z) − N_ψ(z)] / ψ'(z)`, `ψ(z) = −i log z`.
///
/// Since `T'(0) = 1`, `T''(0) = N_T(0)`.
pub fn chart_second_derivative(pair: &MobiusPair) -> f64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    // φ(z) = i(1 − z)/(1 + z) and its adjugate
    let phi = [[-i, i], [one, one]];
    let phi_inv = [[one, -i], [-one, -i]];
    let m = &pair.f_matrix;
    let fm = [[Complex64::new(m.a, 0.0), Complex64::new(m.b, 0.0)], [Complex64::new(m.c, 0.0), Complex64::new(m.d, 0.0)]];
    let k = mat_mul(&phi_inv, &mat_mul(&fm, &phi));
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    let z = Complex64::from_polar(1.0, 2.0 * PI * pair.fixed_angle);
    let den = k[1][0] * z + k[1][1];
    let fz = (k[0][0] * z + k[0][1]) / den;
    let d1 = det / (den * den);
    let d2 = -2.0 * k[1][0] * det / (den * den * den);
    let n_psi = |w: Complex64| -one / w;
    let d_psi = |w: Complex64| -i / w;
    let n_t = (n_psi(fz) * d1 + d2 / d1 - n_psi(z)) / d_psi(z);
    let t1 = d_psi(fz) * d1 / d_psi(z);
    (n_t * t1).re
}

/// The same quantity in the angle coordinate `x = t/2π`.
pub fn chart_second_derivative_angle(pair: &MobiusPair) -> f64 {
    2.0 * PI * chart_second_derivative(pair)
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::periodic::{periodic_points, rotation_number_default, Rational};

    #[test]
    fn rotations() {
        assert!(rotation(0.0).is_identity());
        assert!(rotation(1.0).is_identity());
        let r = rotation_number_default(&rotation(0.3)).unwrap();
        assert!((r.estimate - 0.3).abs() < 1e-12);
    }

    #[test]
    fn mobius_is_a_homomorphism() {
        let m1 = Mobius::new(2.0, 1.0, 0.5, 1.0).unwrap();
        let m2 = Mobius::new(1.0, -0.3, 0.2, 0.7).unwrap();
        let lhs = DiffeoMap::mobius(m1).compose(&DiffeoMap::mobius(m2)).unwrap();
        let rhs = DiffeoMap::mobius(m1.mul(&m2));
        assert!(sup_grid_distance(&lhs, &rhs, 1000).unwrap() < 1e-10);
        assert!(mobius_circle(3.0, 0.0, 0.0, 3.0).unwrap().is_identity());
    }

    #[test]
    fn pair_relation_holds() {
        let pair = prop2_pair();
        assert_eq!(pair.relation_residual(0).unwrap(), 0.0);
        assert!(pair.relation_residual(1).unwrap() < 1e-9);
        assert!(pair.relation_residual(6).unwrap() < 1e-6);
        let r = rotation_number_default(&pair.f).unwrap();
        assert_eq!(r.rational, Some(Rational { p: 0, q: 1 }));
        let scan = periodic_points(&pair.f, 1).unwrap();
        assert_eq!(scan.points.len(), 1);
        assert!(circle_gap(scan.points[0].x, 0.0) < 1e-6);
    }

    #[test]
    fn chart_value_matches_finite_differences() {
        let pair = prop2_pair();
        // T(t) = 2π F(t/2π) near the fixed point; central differences of T.
        let h = 1e-3;
        let t = |s: f64| 2.0 * PI * pair.f.value(s / (2.0 * PI)).unwrap();
        let fd2 = (t(h) - 2.0 * t(0.0) + t(-h)) / (h * h);
        let fd1 = (t(h) - t(-h)) / (2.0 * h);
        let v = chart_second_derivative(&pair);
        assert!((v - fd2).abs() < 1e-5, "{v} vs {fd2}");
        assert!((fd1 - 1.0).abs() < 1e-5);
        let angle = chart_second_derivative_angle(&pair);
        let jet = pair.f.jet(0.0).unwrap();
        assert!((angle - jet.d2()).abs() < 1e-9, "{angle} vs {}", jet.d2());
    }
}
