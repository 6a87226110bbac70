//! `f ↦ f''/f'` and back, on the interval and on the circle (where the
//! round trip loses the rotation part `f(0)`).

use circle_distortion::coarse::{phi, phi_inverse};
use circle_distortion::families::{random_circle_map, random_sine_composition, rng};
use circle_distortion::Domain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut r = rng(11);
    let f = random_sine_composition(&mut r, Domain::Interval, 0.3)?;
    let g = phi_inverse(&phi(&f)?)?;
    let err = (0..=100).map(|j| (f.value(j as f64 / 100.0).unwrap() - g.value(j as f64 / 100.0).unwrap()).abs()).fold(0.0, f64::max);
    println!("interval: mean of H = {:.3e}, sup |f − Φ⁻¹Φf| = {err:.3e}", phi(&f)?.mean);

    let c = random_circle_map(&mut r, 0.3)?;
    let h = phi(&c)?;
    let back = phi_inverse(&h)?;
    println!("circle: mean of H = {:.3e}, f(0) = {:.6}, Φ⁻¹Φf(0) = {:.6}", h.mean, c.value(0.0)?, back.value(0.0)?);
    let shifted = h.project_mean_zero()?;
    println!("projected mean: {:.3e}", shifted.mean);
    Ok(())
}
