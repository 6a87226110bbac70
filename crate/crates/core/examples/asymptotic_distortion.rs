//! Estimates `lim d(fⁿ, e)/n` for a hyperbolic Möbius map, the parabolic
//! one, and the K = 2 bump map.

use circle_distortion::constructions::{prop2_pair, theorem3_build};
use circle_distortion::diffeo::Mobius;
use circle_distortion::distortion::asymptotic_distortion;
use circle_distortion::{DiffeoMap, MetricId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hyperbolic = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0)?);
    let parabolic = prop2_pair().f;
    let (bump, cert) = theorem3_build(2.0, None)?;
    for (name, f, metric, n_max) in [
        ("hyperbolic", &hyperbolic, MetricId::C1Circle, 64),
        ("parabolic", &parabolic, MetricId::C1Circle, 256),
        ("bump K=2", &bump, MetricId::C1AC, 256),
    ] {
        let t = std::time::Instant::now();
        let rep = asymptotic_distortion(f, metric, n_max)?;
        println!("{name} ({metric}), {:.2?}", t.elapsed());
        print!("{}", rep.to_csv_rows());
        println!("limit ≈ {:.6}  verdict {:?}\n", rep.limit_estimate, rep.verdict);
    }
    println!("orbit-sum lower bound for the bump map: {:.6}", cert.lower_bound);
    Ok(())
}
