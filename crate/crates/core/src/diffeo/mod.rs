//! Orientation-preserving diffeomorphisms of the circle and the interval,
//! represented by lifts and evaluated through an expression tree.
//!
//! Every node evaluates a *jet* `(F(x), log F'(x), F''(x)/F'(x))`. Working
//! with `log F'` and the nonlinearity `F''/F'` keeps compositions additive:
//!
//! ```text
//! log (f∘g)' = log f'∘g + log g'
//! N(f∘g)     = (N f ∘ g)·g' + N g
//! ```

mod descriptor;
pub mod mobius;
pub mod tables;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::numeric::root::solve_increasing;

pub use descriptor::{MapDescriptor, NodeDescriptor};
pub use mobius::{Mobius, MobiusLift};
pub use tables::{BumpProfile, BumpTables, NonlinearityTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `[0, 1]` with endpoints identified; maps are lifts to ℝ.
    Circle,
    Interval,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Circle => "circle",
            Domain::Interval => "interval",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Smoothness {
    C1,
    C1AC,
    C2,
    Analytic,
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothness::C1 => "C1",
            Smoothness::C1AC => "C1+AC",
            Smoothness::C2 => "C2",
            Smoothness::Analytic => "analytic",
        })
    }
}

/// `(F(x), log F'(x), F''(x)/F'(x))` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub log_d1: f64,
    pub nonlin: f64,
}

impl Jet {
    pub fn d1(&self) -> f64 {
        self.log_d1.exp()
    }

    pub fn d2(&self) -> f64 {
        self.nonlin * self.d1()
    }

    /// Jet of `outer ∘ inner` given `outer` evaluated at `inner.value`.
    pub fn chain(outer: Jet, inner: Jet) -> Jet {
        Jet {
            value: outer.value,
            log_d1: outer.log_d1 + inner.log_d1,
            nonlin: outer.nonlin * inner.d1() + inner.nonlin,
        }
    }

    fn identity(x: f64) -> Jet {
        Jet {
            value: x,
            log_d1: 0.0,
            nonlin: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Identity,
    Rotation(f64),
    Mobius(Mobius, MobiusLift),
    /// `x + a sin(2πkx)/(2πk)`, a diffeomorphism for `|a| < 1`.
    Sine { amplitude: f64, frequency: u32 },
    Theorem3(Arc<BumpTables>),
    FromNonlinearity(Arc<NonlinearityTables>),
    /// `w·x + (1 - w)·F(x)`.
    Blend { weight: f64, map: Arc<Node> },
    Compose(Arc<Node>, Arc<Node>),
    /// `shift` is `F(0)`, used to bracket the root on the circle.
    Inverse { map: Arc<Node>, shift: f64 },
    /// For negative `n` the orbit runs through `inverse`.
    Power {
        map: Arc<Node>,
        n: i64,
        inverse: Option<Arc<Node>>,
    },
}

impl Node {
    fn native_smoothness(&self) -> Smoothness {
        match self {
            Node::Identity | Node::Rotation(_) | Node::Mobius(..) | Node::Sine { .. } => Smoothness::Analytic,
            Node::Theorem3(_) => Smoothness::C2,
            Node::FromNonlinearity(_) => Smoothness::C1AC,
            Node::Blend { map, .. } | Node::Inverse { map, .. } | Node::Power { map, .. } => map.native_smoothness(),
            Node::Compose(a, b) => a.native_smoothness().min(b.native_smoothness()),
        }
    }

    fn jet(&self, dom: Domain, x: f64) -> Result<Jet> {
        match self {
            Node::Identity => Ok(Jet::identity(x)),
            Node::Rotation(t) => Ok(Jet {
                value: x + t,
                log_d1: 0.0,
                nonlin: 0.0,
            }),
            Node::Mobius(_, lift) => {
                let (value, log_d1, nonlin) = lift.jet(x);
                Ok(Jet { value, log_d1, nonlin })
            }
            Node::Sine { amplitude, frequency } => {
                let w = 2.0 * std::f64::consts::PI * *frequency as f64;
                let (s, c) = (w * x).sin_cos();
                let d1 = 1.0 + amplitude * c;
                Ok(Jet {
                    value: x + amplitude * s / w,
                    log_d1: d1.ln(),
                    nonlin: -w * amplitude * s / d1,
                })
            }
            Node::Theorem3(t) => {
                let (base, u) = split(dom, x);
                let (v, d1, d2) = t.jet(u);
                Ok(Jet {
                    value: base + v,
                    log_d1: d1.ln(),
                    nonlin: d2 / d1,
                })
            }
            Node::FromNonlinearity(t) => {
                let (base, u) = split(dom, x);
                let (v, log_d1, nonlin) = t.jet(u);
                Ok(Jet {
                    value: base + v,
                    log_d1,
                    nonlin,
                })
            }
            Node::Blend { weight, map } => {
                let j = map.jet(dom, x)?;
                let g = (1.0 - weight) * j.d1();
                let d1 = weight + g;
                Ok(Jet {
                    value: weight * x + (1.0 - weight) * j.value,
                    log_d1: d1.ln(),
                    nonlin: g * j.nonlin / d1,
                })
            }
            Node::Compose(outer, inner) => {
                let ji = inner.jet(dom, x)?;
                let jo = outer.jet(dom, ji.value)?;
                Ok(Jet::chain(jo, ji))
            }
            Node::Inverse { map, shift } => {
                let y = invert_point(map, dom, *shift, x)?;
                let j = map.jet(dom, y)?;
                Ok(Jet {
                    value: y,
                    log_d1: -j.log_d1,
                    nonlin: -j.nonlin * (-j.log_d1).exp(),
                })
            }
            Node::Power { map, n, inverse } => {
                let step: &Node = if *n >= 0 { map } else { inverse.as_deref().expect("inverse node") };
                let mut acc = Jet::identity(x);
                for _ in 0..n.unsigned_abs() {
                    let j = step.jet(dom, acc.value)?;
                    acc = Jet::chain(j, acc);
                }
                Ok(acc)
            }
        }
    }

    fn value(&self, dom: Domain, x: f64) -> Result<f64> {
        match self {
            Node::Identity => Ok(x),
            Node::Rotation(t) => Ok(x + t),
            Node::Mobius(_, lift) => Ok(lift.value(x)),
            Node::Sine { amplitude, frequency } => {
                let w = 2.0 * std::f64::consts::PI * *frequency as f64;
                Ok(x + amplitude * (w * x).sin() / w)
            }
            Node::Theorem3(t) => {
                let (base, u) = split(dom, x);
                Ok(base + t.value(u))
            }
            Node::FromNonlinearity(t) => {
                let (base, u) = split(dom, x);
                Ok(base + t.value(u))
            }
            Node::Blend { weight, map } => Ok(weight * x + (1.0 - weight) * map.value(dom, x)?),
            Node::Compose(outer, inner) => outer.value(dom, inner.value(dom, x)?),
            Node::Inverse { map, shift } => invert_point(map, dom, *shift, x),
            Node::Power { map, n, inverse } => {
                let step: &Node = if *n >= 0 { map } else { inverse.as_deref().expect("inverse node") };
                let mut y = x;
                for _ in 0..n.unsigned_abs() {
                    y = step.value(dom, y)?;
                }
                Ok(y)
            }
        }
    }
}

// tables are stored on [0, 1]; circle lifts extend them by F(x + 1) = F(x) + 1
fn split(dom: Domain, x: f64) -> (f64, f64) {
    match dom {
        Domain::Circle => {
            let base = x.floor();
            (base, x - base)
        }
        Domain::Interval => (0.0, x.clamp(0.0, 1.0)),
    }
}

fn invert_point(map: &Node, dom: Domain, shift: f64, x: f64) -> Result<f64> {
    let (target, lo, hi) = match dom {
        // |F(y) - y - F(0)| < 1 for any lift of a circle homeomorphism
        Domain::Circle => (x, x - shift - 1.5, x - shift + 1.5),
        Domain::Interval => (x.clamp(0.0, 1.0), 0.0, 1.0),
    };
    solve_increasing(
        |y| {
            let j = map.jet(dom, y)?;
            Ok((j.value, j.d1()))
        },
        target,
        lo,
        hi,
    )
}

fn inverse_node(map: &Arc<Node>, dom: Domain) -> Result<Node> {
    let shift = match dom {
        Domain::Circle => map.value(dom, 0.0)?,
        Domain::Interval => 0.0,
    };
    Ok(Node::Inverse {
        map: map.clone(),
        shift,
    })
}

fn power_node(map: Arc<Node>, n: i64, dom: Domain) -> Result<Node> {
    let inverse = if n < 0 { Some(Arc::new(inverse_node(&map, dom)?)) } else { None };
    Ok(Node::Power { map, n, inverse })
}

/// An immutable orientation-preserving diffeomorphism of the circle or interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffeoMap {
    domain: Domain,
    smoothness: Smoothness,
    node: Arc<Node>,
}

impl DiffeoMap {
    fn from_node(domain: Domain, node: Node) -> Self {
        let smoothness = node.native_smoothness();
        Self {
            domain,
            smoothness,
            node: Arc::new(node),
        }
    }

    pub fn identity(domain: Domain) -> Self {
        Self::from_node(domain, Node::Identity)
    }

    /// Rigid rotation `x ↦ x + θ` of the circle.
    pub fn rotation(theta: f64) -> Self {
        Self::from_node(Domain::Circle, Node::Rotation(theta))
    }

    pub fn mobius(m: Mobius) -> Self {
        Self::from_node(Domain::Circle, Node::Mobius(m, m.lift()))
    }

    pub fn sine(domain: Domain, amplitude: f64, frequency: u32) -> Result<Self> {
        if !(amplitude.abs() < 1.0) || frequency == 0 {
            return Err(Error::InvalidArgument(format!(
                "sine map needs |amplitude| < 1 and frequency >= 1 (got {amplitude}, {frequency})"
            )));
        }
        Ok(Self::from_node(domain, Node::Sine { amplitude, frequency }))
    }

    /// Circle map with `f'' = Kψ - c_m ψ^m` on `samples` table cells.
    pub fn theorem3(k: f64, m: u32, samples: usize) -> Result<Self> {
        let tables = BumpTables::build(BumpProfile::new(k, m)?, samples)?;
        Ok(Self::from_tables(tables))
    }

    pub fn from_tables(tables: BumpTables) -> Self {
        Self::from_node(Domain::Circle, Node::Theorem3(Arc::new(tables)))
    }

    /// The map with nonlinearity `H`, fixing 0, with `f'(0) = 1/∫exp(∫H)`.
    pub fn from_nonlinearity(domain: Domain, h: GridFunction) -> Result<Self> {
        let tables = NonlinearityTables::build(h)?;
        if domain == Domain::Circle && tables.mean().abs() >= 1e-9 {
            return Err(Error::MeanNotZero { mean: tables.mean() });
        }
        Ok(Self::from_node(domain, Node::FromNonlinearity(Arc::new(tables))))
    }

    /// Convex combination `w·id + (1 - w)·f` of lifts.
    pub fn blend(weight: f64, f: &DiffeoMap) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidArgument(format!("blend weight {weight} outside [0, 1]")));
        }
        Ok(Self {
            domain: f.domain,
            smoothness: f.smoothness,
            node: Arc::new(Node::Blend {
                weight,
                map: f.node.clone(),
            }),
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Declares a weaker smoothness class (e.g. to treat a map as merely C¹).
    pub fn with_smoothness(&self, smoothness: Smoothness) -> Result<Self> {
        if smoothness > self.node.native_smoothness() {
            return Err(Error::InvalidArgument(format!(
                "cannot upgrade a {} map to {smoothness}",
                self.node.native_smoothness()
            )));
        }
        Ok(Self {
            smoothness,
            ..self.clone()
        })
    }

    pub fn is_identity(&self) -> bool {
        matches!(*self.node, Node::Identity)
    }

    fn require_order(&self, order: u8) -> Result<()> {
        if order > 2 {
            return Err(Error::InvalidArgument(format!("derivative order {order} not in 0..=2")));
        }
        if order == 2 && self.smoothness < Smoothness::C1AC {
            return Err(Error::OrderUnsupported {
                order,
                smoothness: self.smoothness,
            });
        }
        Ok(())
    }

    /// Lift value (order 0), derivative (1) or second derivative (2).
    pub fn evaluate(&self, x: f64, order: u8) -> Result<f64> {
        self.require_order(order)?;
        if self.domain == Domain::Interval && !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain { x });
        }
        match order {
            0 => self.value(x),
            1 => Ok(self.jet(x)?.d1()),
            _ => Ok(self.jet(x)?.d2()),
        }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.node.value(self.domain, x)
    }

    /// Full jet without domain or smoothness checks.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.node.jet(self.domain, x)
    }

    pub fn log_deriv(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.log_d1)
    }

    /// `f''/f'` at `x`.
    pub fn nonlinearity(&self, x: f64) -> Result<f64> {
        self.require_order(2)?;
        Ok(self.jet(x)?.nonlin)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &DiffeoMap) -> Result<Self> {
        if self.domain != g.domain {
            return Err(Error::DomainMismatch(format!(
                "cannot compose a {} map with a {} map",
                self.domain, g.domain
            )));
        }
        let smoothness = self.smoothness.min(g.smoothness);
        let node = match (&*self.node, &*g.node) {
            (Node::Identity, _) => g.node.clone(),
            (_, Node::Identity) => self.node.clone(),
            _ => Arc::new(Node::Compose(self.node.clone(), g.node.clone())),
        };
        Ok(Self {
            domain: self.domain,
            smoothness,
            node,
        })
    }

    pub fn invert(&self) -> Result<Self> {
        let node = self.invert_node(&self.node)?;
        Ok(Self {
            domain: self.domain,
            smoothness: self.smoothness,
            node,
        })
    }

    fn invert_node(&self, node: &Arc<Node>) -> Result<Arc<Node>> {
        Ok(match &**node {
            Node::Identity => node.clone(),
            Node::Rotation(t) => Arc::new(Node::Rotation(-t)),
            Node::Mobius(m, _) => {
                let inv = m.inverse();
                Arc::new(Node::Mobius(inv, inv.lift()))
            }
            Node::Inverse { map, .. } => map.clone(),
            Node::Compose(a, b) => Arc::new(Node::Compose(self.invert_node(b)?, self.invert_node(a)?)),
            Node::Power { map, n, .. } => Arc::new(power_node(map.clone(), -n, self.domain)?),
            _ => Arc::new(inverse_node(node, self.domain)?),
        })
    }

    /// `fⁿ`, evaluated lazily by running the orbit.
    pub fn iterate(&self, n: i64) -> Result<Self> {
        let node = match (&*self.node, n) {
            (_, 0) | (Node::Identity, _) => Arc::new(Node::Identity),
            (_, 1) => self.node.clone(),
            (Node::Power { map, n: k, .. }, _) => Arc::new(power_node(map.clone(), k * n, self.domain)?),
            _ => Arc::new(power_node(self.node.clone(), n, self.domain)?),
        };
        Ok(Self {
            domain: self.domain,
            smoothness: self.smoothness,
            node,
        })
    }

    /// `Σ_{k<n} log f'(fᵏ x)`.
    pub fn log_deriv_iterate(&self, n: u64, x: f64) -> Result<f64> {
        let mut y = x;
        let mut acc = 0.0;
        for _ in 0..n {
            let j = self.jet(y)?;
            acc += j.log_d1;
            y = j.value;
        }
        Ok(acc)
    }

    /// `Σ_{k<n} (f''/f')(fᵏ x)·(fᵏ)'(x)`, the nonlinearity of `fⁿ`.
    pub fn nonlinearity_iterate(&self, n: u64, x: f64) -> Result<f64> {
        self.require_order(2)?;
        let mut y = x;
        let mut log_dk = 0.0_f64;
        let mut acc = 0.0;
        for _ in 0..n {
            let j = self.jet(y)?;
            acc += j.nonlin * log_dk.exp();
            log_dk += j.log_d1;
            y = j.value;
        }
        Ok(acc)
    }

    /// Jet of `fⁿ` at `x` by running the orbit once.
    pub fn orbit_jet(&self, n: u64, x: f64) -> Result<Jet> {
        let mut acc = Jet::identity(x);
        for _ in 0..n {
            let j = self.jet(acc.value)?;
            acc = Jet::chain(j, acc);
        }
        Ok(acc)
    }
}

pub fn evaluate(f: &DiffeoMap, x: f64, order: u8) -> Result<f64> {
    f.evaluate(x, order)
}

pub fn compose(f: &DiffeoMap, g: &DiffeoMap) -> Result<DiffeoMap> {
    f.compose(g)
}

pub fn invert(f: &DiffeoMap) -> Result<DiffeoMap> {
    f.invert()
}

pub fn iterate(f: &DiffeoMap, n: i64) -> Result<DiffeoMap> {
    f.iterate(n)
}

pub fn log_deriv_iterate(f: &DiffeoMap, n: u64, x: f64) -> Result<f64> {
    f.log_deriv_iterate(n, x)
}

pub fn nonlinearity_iterate(f: &DiffeoMap, n: u64, x: f64) -> Result<f64> {
    f.nonlinearity_iterate(n, x)
}

/// Distance on the circle `ℝ/ℤ` between two lift values.
pub fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}
