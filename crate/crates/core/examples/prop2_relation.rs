//! The Möbius pair with `g f g⁻¹ = f²`: relation residuals, word lengths and
//! the second derivative at the parabolic fixed point.

use circle_distortion::constructions::{chart_second_derivative, chart_second_derivative_angle, prop2_pair};
use circle_distortion::distortion::discrete_distortion_witness;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("n, word length, residual, (2n+1)/2ⁿ");
    for n in 0..=10 {
        let w = discrete_distortion_witness(n)?;
        println!("{n}, {}, {:.3e}, {:.6}", w.word_length, w.residual, w.ratio);
    }
    let pair = prop2_pair();
    println!("f'' at the fixed point, chart t = -i log z: {:.12}", chart_second_derivative(&pair));
    println!("f'' at the fixed point, angle chart:       {:.12}", chart_second_derivative_angle(&pair));
    Ok(())
}
