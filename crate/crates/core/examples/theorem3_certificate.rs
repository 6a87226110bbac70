//! Builds the parabolic-but-undistorted circle map and prints its certificate.
//!
//! Usage: cargo run --release --example theorem3_certificate -- [K]

use circle_distortion::constructions::theorem3_build;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2.0);
    let t = std::time::Instant::now();
    let (_map, cert) = theorem3_build(k, None)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    eprintln!("built in {:.2?}", t.elapsed());
    Ok(())
}
