//! Builds a few maps, composes and inverts them, and prints jets and the
//! JSON descriptor.

use circle_distortion::diffeo::Mobius;
use circle_distortion::{DiffeoMap, Domain};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = DiffeoMap::sine(Domain::Circle, 0.4, 2)?;
    let g = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0)?);
    let f = DiffeoMap::rotation(0.1).compose(&s)?.compose(&g)?;
    let inv = f.invert()?;
    println!("x, f(x), f'(x), f''(x), f⁻¹(f(x))");
    for j in 0..8 {
        let x = j as f64 / 8.0;
        let jet = f.jet(x)?;
        println!("{x:.3}, {:.9}, {:.9}, {:.9}, {:.9}", f.value(x)?, jet.d1(), jet.d2(), inv.value(f.value(x)?)?);
    }
    let f5 = f.iterate(5)?;
    println!("f⁵(0.2) = {:.12}", f5.value(0.2)?);
    println!("log (f⁵)'(0.2) = {:.12}", f.log_deriv_iterate(5, 0.2)?);
    println!("descriptor: {}", f.to_json());
    println!("hash: {}", f.descriptor_hash());
    Ok(())
}
