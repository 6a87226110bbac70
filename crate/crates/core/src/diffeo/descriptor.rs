//! JSON descriptors: `{"domain": "circle"|"interval", "node": {"type": ..}}`.
//!
//! Parsing builds nodes literally (no simplification), so serializing a
//! parsed descriptor reproduces it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{inverse_node, power_node, BumpProfile, BumpTables, DiffeoMap, Domain, Mobius, Node, NonlinearityTables, Smoothness};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Interp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDescriptor {
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<Smoothness>,
    pub node: NodeDescriptor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeDescriptor {
    Identity {},
    Rotation {
        theta: f64,
    },
    Mobius {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    Sine {
        amplitude: f64,
        frequency: u32,
    },
    Theorem3 {
        #[serde(rename = "K")]
        k: f64,
        m: u32,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    FromNonlinearity {
        samples: Vec<f64>,
        interp: Interp,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slopes: Option<Vec<f64>>,
    },
    Blend {
        weight: f64,
        map: Box<NodeDescriptor>,
    },
    Compose {
        outer: Box<NodeDescriptor>,
        inner: Box<NodeDescriptor>,
    },
    Inverse {
        map: Box<NodeDescriptor>,
    },
    Power {
        map: Box<NodeDescriptor>,
        n: i64,
    },
}

fn default_samples() -> usize {
    crate::grid::DEFAULT_SAMPLES
}

impl NodeDescriptor {
    fn from_node(node: &Node) -> Self {
        match node {
            Node::Identity => NodeDescriptor::Identity {},
            Node::Rotation(theta) => NodeDescriptor::Rotation { theta: *theta },
            Node::Mobius(m, _) => NodeDescriptor::Mobius {
                a: m.a,
                b: m.b,
                c: m.c,
                d: m.d,
            },
            Node::Sine { amplitude, frequency } => NodeDescriptor::Sine {
                amplitude: *amplitude,
                frequency: *frequency,
            },
            Node::Theorem3(t) => NodeDescriptor::Theorem3 {
                k: t.profile.k,
                m: t.profile.m,
                samples: t.samples(),
            },
            Node::FromNonlinearity(t) => NodeDescriptor::FromNonlinearity {
                samples: t.h.values().to_vec(),
                interp: t.h.interp(),
                slopes: match t.h.interp() {
                    Interp::Hermite => t.h.slopes().map(<[f64]>::to_vec),
                    _ => None,
                },
            },
            Node::Blend { weight, map } => NodeDescriptor::Blend {
                weight: *weight,
                map: Box::new(Self::from_node(map)),
            },
            Node::Compose(a, b) => NodeDescriptor::Compose {
                outer: Box::new(Self::from_node(a)),
                inner: Box::new(Self::from_node(b)),
            },
            Node::Inverse { map, .. } => NodeDescriptor::Inverse {
                map: Box::new(Self::from_node(map)),
            },
            Node::Power { map, n, .. } => NodeDescriptor::Power {
                map: Box::new(Self::from_node(map)),
                n: *n,
            },
        }
    }

    fn build(&self, dom: Domain) -> Result<Node> {
        let circle_only = |what: &str| -> Result<()> {
            if dom != Domain::Circle {
                return Err(Error::DomainMismatch(format!("{what} maps live on the circle")));
            }
            Ok(())
        };
        Ok(match self {
            NodeDescriptor::Identity {} => Node::Identity,
            NodeDescriptor::Rotation { theta } => {
                circle_only("rotation")?;
                Node::Rotation(*theta)
            }
            NodeDescriptor::Mobius { a, b, c, d } => {
                circle_only("Möbius")?;
                let m = Mobius::new(*a, *b, *c, *d)?;
                Node::Mobius(m, m.lift())
            }
            NodeDescriptor::Sine { amplitude, frequency } => {
                DiffeoMap::sine(dom, *amplitude, *frequency)?;
                Node::Sine {
                    amplitude: *amplitude,
                    frequency: *frequency,
                }
            }
            NodeDescriptor::Theorem3 { k, m, samples } => {
                circle_only("theorem3")?;
                Node::Theorem3(Arc::new(BumpTables::build(BumpProfile::new(*k, *m)?, *samples)?))
            }
            NodeDescriptor::FromNonlinearity { samples, interp, slopes } => {
                let h = match (interp, slopes) {
                    (Interp::Hermite, Some(s)) => GridFunction::with_slopes(samples.clone(), s.clone())?,
                    (_, None) => GridFunction::new(samples.clone(), *interp)?,
                    (_, Some(_)) => {
                        return Err(Error::InvalidDescriptor("slopes are only valid with hermite interpolation".into()))
                    }
                };
                let t = NonlinearityTables::build(h)?;
                if dom == Domain::Circle && t.mean().abs() >= 1e-9 {
                    return Err(Error::MeanNotZero { mean: t.mean() });
                }
                Node::FromNonlinearity(Arc::new(t))
            }
            NodeDescriptor::Blend { weight, map } => {
                if !(0.0..=1.0).contains(weight) {
                    return Err(Error::InvalidDescriptor(format!("blend weight {weight} outside [0, 1]")));
                }
                Node::Blend {
                    weight: *weight,
                    map: Arc::new(map.build(dom)?),
                }
            }
            NodeDescriptor::Compose { outer, inner } => {
                Node::Compose(Arc::new(outer.build(dom)?), Arc::new(inner.build(dom)?))
            }
            NodeDescriptor::Inverse { map } => inverse_node(&Arc::new(map.build(dom)?), dom)?,
            NodeDescriptor::Power { map, n } => power_node(Arc::new(map.build(dom)?), *n, dom)?,
        })
    }
}

impl DiffeoMap {
    pub fn descriptor(&self) -> MapDescriptor {
        let native = self.node.native_smoothness();
        MapDescriptor {
            domain: self.domain,
            smoothness: (self.smoothness != native).then_some(self.smoothness),
            node: NodeDescriptor::from_node(&self.node),
        }
    }

    pub fn from_descriptor(d: &MapDescriptor) -> Result<Self> {
        let node = d.node.build(d.domain)?;
        let map = DiffeoMap::from_node(d.domain, node);
        match d.smoothness {
            Some(s) => map.with_smoothness(s),
            None => Ok(map),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.descriptor()).expect("descriptor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: MapDescriptor = serde_json::from_str(s).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
        Self::from_descriptor(&d)
    }

    /// SHA-256 of the compact JSON descriptor, hex encoded.
    pub fn descriptor_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}
