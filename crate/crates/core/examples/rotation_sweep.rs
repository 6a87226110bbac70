//! `θ ↦ rot(R_θ ∘ f)` for the hyperbolic Möbius map (mode locking at 0) and
//! for the bump map, whose only fixed point is parabolic.

use circle_distortion::constructions::{rotation_sweep, theorem3_build};
use circle_distortion::diffeo::Mobius;
use circle_distortion::DiffeoMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let thetas: Vec<f64> = (0..=40).map(|j| 0.5 * j as f64 / 40.0).collect();
    let hyperbolic = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0)?);
    let (bump, _) = theorem3_build(2.0, None)?;
    for (name, f) in [("r ↦ r/2", &hyperbolic), ("bump K=2", &bump)] {
        let sweep = rotation_sweep(f, &thetas)?;
        println!("{name}");
        print!("{}", sweep.to_csv());
        for p in &sweep.plateaus {
            println!("plateau {} on [{:.4}, {:.4}]", p.rational, p.theta_start, p.theta_end);
        }
        println!();
    }
    Ok(())
}
