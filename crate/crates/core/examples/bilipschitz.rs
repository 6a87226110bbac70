//! Compares `σ(f, g)` with the C¹ distance on random stabilizers of 0.

use circle_distortion::coarse::bilipschitz_check;
use circle_distortion::families::{random_stabilizer, rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut r = rng(4);
    println!("sigma, d, sigma/d, ok");
    for _ in 0..10 {
        let f = random_stabilizer(&mut r, 1.0)?;
        let g = random_stabilizer(&mut r, 1.0)?;
        let c = bilipschitz_check(&f, &g)?;
        println!("{:.6}, {:.6}, {:.4}, {}", c.sigma, c.d, c.sigma / c.d, c.ok);
    }
    Ok(())
}
