//! Writes a map as `R_θ ∘ u₁ ∘ ⋯ ∘ u_N` with each `u_i` within ε of the identity.

use circle_distortion::coarse::{fragmentation_path_c1, fragmentation_path_c1ac};
use circle_distortion::diffeo::Mobius;
use circle_distortion::families::{random_circle_map, rng};
use circle_distortion::DiffeoMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hyperbolic = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0)?);
    let small = random_circle_map(&mut rng(2), 0.05)?;
    for eps in [0.1, 0.2] {
        // M e^{2M}/ε steps is already in the thousands for r ↦ r/2
        let paths = [
            ("r ↦ r/2", fragmentation_path_c1(&hyperbolic, eps)?),
            ("random circle map", fragmentation_path_c1ac(&small, eps)?),
            ("random circle map", fragmentation_path_c1(&small, eps)?),
        ];
        for (name, p) in paths {
            let worst = p.step_distances.iter().copied().fold(0.0, f64::max);
            println!(
                "{name:<18} {:?} ε = {eps}: M = {:.4}, N = {}, worst step {worst:.4}, residual {:.1e}",
                p.kind, p.m, p.n, p.residual
            );
        }
    }
    Ok(())
}
