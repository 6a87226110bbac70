//! C¹ distortion verdicts from rotation numbers and periodic points.

use circle_distortion::constructions::{prop2_pair, theorem3_build};
use circle_distortion::diffeo::Mobius;
use circle_distortion::distortion::classify_c1;
use circle_distortion::families::{random_planted_hyperbolic, rng};
use circle_distortion::DiffeoMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let maps = [
        ("rotation 2/7", DiffeoMap::rotation(2.0 / 7.0)),
        ("golden rotation", DiffeoMap::rotation((5f64.sqrt() - 1.0) / 2.0)),
        ("r ↦ r/2", DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0)?)),
        ("r ↦ r/(r+1)", prop2_pair().f),
        ("bump K=1", theorem3_build(1.0, None)?.0),
        ("planted hyperbolic", random_planted_hyperbolic(&mut rng(3), 1.0, 0.1)?),
    ];
    for (name, f) in &maps {
        let c = classify_c1(f, 1000)?;
        let rot = c.rotation.rational.map(|r| r.to_string()).unwrap_or_else(|| format!("{:.9}", c.rotation.estimate));
        let witness = c
            .witness
            .map(|w| format!("x = {:.6}, period {}, multiplier {:.6}", w.x, w.period, w.multiplier))
            .unwrap_or_default();
        println!("{name:<20} rot {rot:<12} {:?} {witness}", c.verdict);
    }
    Ok(())
}
