//! Every metric on one pair of circle maps and one pair of interval maps.

use circle_distortion::metrics::{distance, MetricOptions};
use circle_distortion::{DiffeoMap, Domain, MetricId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = MetricOptions::default();
    let pairs = [
        ("circle", DiffeoMap::sine(Domain::Circle, 0.3, 1)?, DiffeoMap::sine(Domain::Circle, -0.2, 3)?),
        ("interval", DiffeoMap::sine(Domain::Interval, 0.5, 1)?, DiffeoMap::identity(Domain::Interval)),
    ];
    for (name, f, g) in &pairs {
        println!("{name}");
        for id in MetricId::ALL {
            match distance(id, f, g, &opts) {
                Ok(e) => println!("  {:<12} {:.10}  converged {}", id.as_str(), e.value, e.converged),
                Err(err) => println!("  {:<12} n/a ({err})", id.as_str()),
            }
        }
    }
    Ok(())
}
