//! Right-invariant pseudometrics on diffeomorphism groups and the two
//! classical distortion functionals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diffeo::{circle_gap, DiffeoMap, Domain, Smoothness};
use crate::error::{Error, Result};
use crate::numeric::extremum::sup;
use crate::numeric::quad::adaptive_simpson;
use crate::numeric::{Estimate, SupOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "c1-circle")]
    C1Circle,
    #[serde(rename = "c1-interval")]
    C1Interval,
    #[serde(rename = "c1ac")]
    C1AC,
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "polish-rho")]
    PolishRho,
    #[serde(rename = "demelo-dist")]
    DemeloDist,
    #[serde(rename = "navas-tv")]
    NavasTV,
}

impl MetricId {
    pub const ALL: [MetricId; 7] = [
        MetricId::C1Circle,
        MetricId::C1Interval,
        MetricId::C1AC,
        MetricId::Uniform,
        MetricId::PolishRho,
        MetricId::DemeloDist,
        MetricId::NavasTV,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricId::C1Circle => "c1-circle",
            MetricId::C1Interval => "c1-interval",
            MetricId::C1AC => "c1ac",
            MetricId::Uniform => "uniform",
            MetricId::PolishRho => "polish-rho",
            MetricId::DemeloDist => "demelo-dist",
            MetricId::NavasTV => "navas-tv",
        }
    }

    /// Least smoothness a map needs for this functional.
    pub fn required_smoothness(&self) -> Smoothness {
        match self {
            MetricId::C1AC | MetricId::PolishRho | MetricId::NavasTV => Smoothness::C1AC,
            _ => Smoothness::C1,
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricId::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOptions {
    pub sup: SupOptions,
    /// Initial Simpson panels for integral functionals.
    pub panels: usize,
    pub quad_tol: f64,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self {
            sup: SupOptions::default(),
            panels: 1 << 14,
            quad_tol: 1e-10,
        }
    }
}

fn same_domain(f: &DiffeoMap, g: &DiffeoMap) -> Result<Domain> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch(format!("{} map vs {} map", f.domain(), g.domain())));
    }
    Ok(f.domain())
}

fn require(f: &DiffeoMap, need: Smoothness) -> Result<()> {
    if f.smoothness() < need {
        return Err(Error::OrderUnsupported {
            order: 2,
            smoothness: f.smoothness(),
        });
    }
    Ok(())
}

fn require_domain(f: &DiffeoMap, dom: Domain) -> Result<()> {
    if f.domain() != dom {
        let article = |d: Domain| if d == Domain::Interval { "an" } else { "a" };
        return Err(Error::DomainMismatch(format!(
            "expected {} {dom} map, got {} {} map",
            article(dom),
            article(f.domain()),
            f.domain()
        )));
    }
    Ok(())
}

/// `sup_x |log f'(x) - log g'(x)|` over the circle.
pub fn d_c1_circle(f: &DiffeoMap, g: &DiffeoMap) -> Result<Estimate> {
    d_c1_circle_with(f, g, &MetricOptions::default())
}

pub fn d_c1_circle_with(f: &DiffeoMap, g: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    require_domain(f, Domain::Circle)?;
    require_domain(g, Domain::Circle)?;
    sup(|x| Ok((f.log_deriv(x)? - g.log_deriv(x)?).abs()), true, &opts.sup)
}

/// `sup_x |(log f'(x) - log f'(0)) - (log g'(x) - log g'(0))|` on `[0, 1]`.
pub fn d_c1_interval(f: &DiffeoMap, g: &DiffeoMap) -> Result<Estimate> {
    d_c1_interval_with(f, g, &MetricOptions::default())
}

pub fn d_c1_interval_with(f: &DiffeoMap, g: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    require_domain(f, Domain::Interval)?;
    require_domain(g, Domain::Interval)?;
    let (f0, g0) = (f.log_deriv(0.0)?, g.log_deriv(0.0)?);
    sup(
        |x| Ok(((f.log_deriv(x)? - f0) - (g.log_deriv(x)? - g0)).abs()),
        false,
        &opts.sup,
    )
}

/// `∫ |f''/f' - g''/g'|` over the domain.
pub fn d_1ac(f: &DiffeoMap, g: &DiffeoMap) -> Result<Estimate> {
    d_1ac_with(f, g, &MetricOptions::default())
}

pub fn d_1ac_with(f: &DiffeoMap, g: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    same_domain(f, g)?;
    require(f, Smoothness::C1AC)?;
    require(g, Smoothness::C1AC)?;
    if f.is_identity() && g.is_identity() {
        return Ok(Estimate::exact(0.0));
    }
    adaptive_simpson(
        |x| Ok((f.jet(x)?.nonlin - g.jet(x)?.nonlin).abs()),
        0.0,
        1.0,
        opts.panels,
        opts.quad_tol,
    )
}

/// `sup_x |f(x) - g(x)|`, measured in `ℝ/ℤ` for circle maps.
pub fn uniform_distance(f: &DiffeoMap, g: &DiffeoMap) -> Result<Estimate> {
    uniform_distance_with(f, g, &MetricOptions::default())
}

pub fn uniform_distance_with(f: &DiffeoMap, g: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    let dom = same_domain(f, g)?;
    match dom {
        Domain::Circle => sup(|x| Ok(circle_gap(f.value(x)?, g.value(x)?)), true, &opts.sup),
        Domain::Interval => sup(|x| Ok((f.value(x)? - g.value(x)?).abs()), false, &opts.sup),
    }
}

/// `sup|f - g| + sup|f' - g'| + ∫|f'' - g''|`.
pub fn polish_rho(f: &DiffeoMap, g: &DiffeoMap) -> Result<Estimate> {
    polish_rho_with(f, g, &MetricOptions::default())
}

pub fn polish_rho_with(f: &DiffeoMap, g: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    let dom = same_domain(f, g)?;
    require(f, Smoothness::C1AC)?;
    require(g, Smoothness::C1AC)?;
    let periodic = dom == Domain::Circle;
    let u = uniform_distance_with(f, g, opts)?;
    let d1 = sup(|x| Ok((f.jet(x)?.d1() - g.jet(x)?.d1()).abs()), periodic, &opts.sup)?;
    let d2 = adaptive_simpson(
        |x| Ok((f.jet(x)?.d2() - g.jet(x)?.d2()).abs()),
        0.0,
        1.0,
        opts.panels,
        opts.quad_tol,
    )?;
    Ok(Estimate {
        value: u.value + d1.value + d2.value,
        change: u.change + d1.change + d2.change,
        converged: u.converged && d1.converged && d2.converged,
    })
}

/// `sup_{x,y} (log f'(x) - log f'(y))` for a circle map.
pub fn demelo_dist(f: &DiffeoMap) -> Result<Estimate> {
    demelo_dist_with(f, &MetricOptions::default())
}

pub fn demelo_dist_with(f: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    require_domain(f, Domain::Circle)?;
    let hi = sup(|x| f.log_deriv(x), true, &opts.sup)?;
    let lo = sup(|x| Ok(-f.log_deriv(x)?), true, &opts.sup)?;
    Ok(Estimate {
        value: hi.value + lo.value,
        change: hi.change + lo.change,
        converged: hi.converged && lo.converged,
    })
}

/// `∫|f''/f'|`, the total variation of `log f'`.
pub fn navas_tv(f: &DiffeoMap) -> Result<Estimate> {
    navas_tv_with(f, &MetricOptions::default())
}

pub fn navas_tv_with(f: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    d_1ac_with(f, &DiffeoMap::identity(f.domain()), opts)
}

/// `d_c1_circle + uniform_distance`: a genuine metric on circle maps.
pub fn c1_circle_metric(f: &DiffeoMap, g: &DiffeoMap) -> Result<Estimate> {
    let opts = MetricOptions::default();
    let a = d_c1_circle_with(f, g, &opts)?;
    let b = uniform_distance_with(f, g, &opts)?;
    Ok(Estimate {
        value: a.value + b.value,
        change: a.change + b.change,
        converged: a.converged && b.converged,
    })
}

/// `d(f, g)` for the binary metrics; the unary functionals are applied to
/// `f ∘ g⁻¹` unless `g` is the identity.
pub fn distance(id: MetricId, f: &DiffeoMap, g: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    match id {
        MetricId::C1Circle => d_c1_circle_with(f, g, opts),
        MetricId::C1Interval => d_c1_interval_with(f, g, opts),
        MetricId::C1AC => d_1ac_with(f, g, opts),
        MetricId::Uniform => uniform_distance_with(f, g, opts),
        MetricId::PolishRho => polish_rho_with(f, g, opts),
        MetricId::DemeloDist | MetricId::NavasTV => {
            let h = if g.is_identity() { f.clone() } else { f.compose(&g.invert()?)? };
            match id {
                MetricId::DemeloDist => demelo_dist_with(&h, opts),
                _ => navas_tv_with(&h, opts),
            }
        }
    }
}

/// `d(f, e)`.
pub fn distance_to_identity(id: MetricId, f: &DiffeoMap, opts: &MetricOptions) -> Result<Estimate> {
    distance(id, f, &DiffeoMap::identity(f.domain()), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::Mobius;

    fn hyperbolic() -> DiffeoMap {
        DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0).unwrap())
    }

    #[test]
    fn metric_names_round_trip() {
        for id in MetricId::ALL {
            assert_eq!(id.as_str().parse::<MetricId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
        assert!("c2".parse::<MetricId>().is_err());
    }

    #[test]
    fn rotations_are_invisible_to_derivative_metrics() {
        let r = DiffeoMap::rotation(0.37);
        let e = DiffeoMap::identity(Domain::Circle);
        assert_eq!(d_c1_circle(&r, &e).unwrap().value, 0.0);
        assert_eq!(d_1ac(&r, &e).unwrap().value, 0.0);
        assert!((uniform_distance(&DiffeoMap::rotation(0.5), &e).unwrap().value - 0.5).abs() < 1e-15);
        assert!(c1_circle_metric(&r, &e).unwrap().value > 0.3);
    }

    #[test]
    fn hyperbolic_distances() {
        let g = hyperbolic();
        let e = DiffeoMap::identity(Domain::Circle);
        let dense = (0..1_000_000)
            .map(|i| g.log_deriv(i as f64 / 1e6).unwrap().abs())
            .fold(0.0, f64::max);
        let d = d_c1_circle(&g, &e).unwrap().value;
        assert!((d - dense).abs() < 1e-9);
        assert!((d - 2f64.ln()).abs() < 2e-3);
        assert!((demelo_dist(&g).unwrap().value - 2.0 * 2f64.ln()).abs() < 5e-3);
    }

    #[test]
    fn smoothness_is_enforced() {
        let f = hyperbolic().with_smoothness(Smoothness::C1).unwrap();
        assert!(matches!(navas_tv(&f), Err(Error::OrderUnsupported { .. })));
        assert!(d_c1_circle(&f, &f).is_ok());
    }

    #[test]
    fn domains_are_checked() {
        let i = DiffeoMap::identity(Domain::Interval);
        let c = DiffeoMap::identity(Domain::Circle);
        assert!(matches!(d_1ac(&i, &c), Err(Error::DomainMismatch(_))));
        assert!(matches!(d_c1_circle(&i, &i), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn navas_equals_d1ac_to_identity() {
        let f = DiffeoMap::sine(Domain::Circle, 0.5, 3).unwrap();
        let a = navas_tv(&f).unwrap().value;
        let b = d_1ac(&f, &DiffeoMap::identity(Domain::Circle)).unwrap().value;
        assert_eq!(a, b);
    }
}
