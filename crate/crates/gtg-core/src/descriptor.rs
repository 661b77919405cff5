//! JSON descriptors for groups, sets and sequence certificates.
//!
//! Integers are serialized as decimal strings and rationals as
//! `"num/den"` strings so certificates stay exact at any magnitude.

use num::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{parse_ratio, ratio_string, Element, GroupInstance, GroupKind, OrderFormula};
use crate::independence::{GrowthCheck, MetricSequence};
use crate::metric::{MetricGroup, SeminormKind};
use crate::symset::SymSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeminormName {
    #[serde(rename = "2adic")]
    TwoAdic,
    #[serde(rename = "weighted_circle")]
    WeightedCircle,
    #[serde(rename = "discrete")]
    Discrete,
}

impl SeminormName {
    pub fn kind(&self) -> SeminormKind {
        match self {
            SeminormName::TwoAdic => SeminormKind::Dyadic,
            SeminormName::WeightedCircle => SeminormKind::WeightedCircle,
            SeminormName::Discrete => SeminormKind::Discrete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderFormulaName {
    #[serde(rename = "pow2_plus3")]
    Pow2Plus3,
}

/// Group descriptor: `{"kind": ..., "orders": [...], "dimension": n,
/// "seminorm": ..., "order_formula": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDescriptor {
    FiniteDirectSum {
        orders: Vec<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        seminorm: Option<SeminormName>,
    },
    Integers {
        #[serde(skip_serializing_if = "Option::is_none")]
        seminorm: Option<SeminormName>,
    },
    RationalVector {
        dimension: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        seminorm: Option<SeminormName>,
    },
    RestrictedDirectSum {
        order_formula: OrderFormulaName,
        #[serde(skip_serializing_if = "Option::is_none")]
        seminorm: Option<SeminormName>,
    },
}

impl GroupDescriptor {
    pub fn to_group(&self) -> Result<GroupInstance> {
        match self {
            GroupDescriptor::FiniteDirectSum { orders, .. } => {
                GroupInstance::finite_direct_sum(orders.clone())
            }
            GroupDescriptor::Integers { .. } => Ok(GroupInstance::integers()),
            GroupDescriptor::RationalVector { dimension, .. } => {
                GroupInstance::rational_vector(*dimension)
            }
            GroupDescriptor::RestrictedDirectSum { order_formula, .. } => {
                Ok(GroupInstance::restricted_direct_sum(match order_formula {
                    OrderFormulaName::Pow2Plus3 => OrderFormula::Pow2Plus3,
                }))
            }
        }
    }

    pub fn seminorm(&self) -> Option<SeminormName> {
        match self {
            GroupDescriptor::FiniteDirectSum { seminorm, .. }
            | GroupDescriptor::Integers { seminorm }
            | GroupDescriptor::RationalVector { seminorm, .. }
            | GroupDescriptor::RestrictedDirectSum { seminorm, .. } => *seminorm,
        }
    }

    pub fn to_metric(&self) -> Result<MetricGroup> {
        let seminorm = self.seminorm().ok_or_else(|| {
            Error::Descriptor("this operation needs a \"seminorm\" in the group descriptor".into())
        })?;
        MetricGroup::new(self.to_group()?, seminorm.kind())
    }

    /// Reconstructs a descriptor for an existing metric group.
    pub fn from_metric(metric: &MetricGroup) -> GroupDescriptor {
        let seminorm = Some(match metric.seminorm_kind() {
            SeminormKind::Dyadic => SeminormName::TwoAdic,
            SeminormKind::WeightedCircle => SeminormName::WeightedCircle,
            SeminormKind::Discrete => SeminormName::Discrete,
        });
        match metric.group().kind() {
            GroupKind::FiniteDirectSum(orders) => GroupDescriptor::FiniteDirectSum {
                orders: orders.clone(),
                seminorm,
            },
            GroupKind::Integers => GroupDescriptor::Integers { seminorm },
            GroupKind::RationalVector(d) => GroupDescriptor::RationalVector {
                dimension: *d,
                seminorm,
            },
            GroupKind::RestrictedDirectSum(OrderFormula::Pow2Plus3) => {
                GroupDescriptor::RestrictedDirectSum {
                    order_formula: OrderFormulaName::Pow2Plus3,
                    seminorm,
                }
            }
        }
    }
}

/// Set descriptor: `{"builder": ..., "params": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "builder", content = "params", rename_all = "snake_case")]
pub enum SetDescriptor {
    Explicit { elements: Vec<Value> },
    UP { p: u64 },
    Cross,
    Ball { radius: String },
    Subgroup { generators: Vec<Value> },
    BoxProduct { factors: Vec<FactorDescriptor> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDescriptor {
    pub group: GroupDescriptor,
    pub set: SetDescriptor,
}

impl SetDescriptor {
    /// Realizes the set over the described group. `BoxProduct` determines
    /// its own carrier and `group` is ignored for it.
    pub fn to_symset(&self, group: &GroupDescriptor) -> Result<SymSet> {
        match self {
            SetDescriptor::Explicit { elements } => {
                let g = group.to_group()?;
                let parsed = elements
                    .iter()
                    .map(|v| element_from_json(&g, v))
                    .collect::<Result<Vec<_>>>()?;
                SymSet::explicit(g, parsed)
            }
            SetDescriptor::UP { p } => {
                if !matches!(group.to_group()?.kind(), GroupKind::Integers) {
                    return Err(Error::Descriptor("u_p sets live over the integers".into()));
                }
                SymSet::u_p(*p)
            }
            SetDescriptor::Cross => match group.to_group()?.kind() {
                GroupKind::RationalVector(2) => Ok(SymSet::cross()),
                _ => Err(Error::Descriptor(
                    "the cross lives over the rational plane (dimension 2)".into(),
                )),
            },
            SetDescriptor::Ball { radius } => {
                let metric = group.to_metric()?;
                SymSet::ball(metric, parse_ratio(radius)?)
            }
            SetDescriptor::Subgroup { generators } => {
                let g = group.to_group()?;
                let gens = generators
                    .iter()
                    .map(|v| element_from_json(&g, v))
                    .collect::<Result<Vec<_>>>()?;
                SymSet::subgroup_generated(g, gens)
            }
            SetDescriptor::BoxProduct { factors } => {
                let sets = factors
                    .iter()
                    .map(|f| f.set.to_symset(&f.group))
                    .collect::<Result<Vec<_>>>()?;
                crate::symset::product_set(sets, &crate::window::Window::default())
            }
        }
    }
}

/// Canonical JSON form of an element of the given group.
pub fn element_to_json(group: &GroupInstance, x: &Element) -> Value {
    let _ = group;
    match x {
        Element::Tuple(c) => json!(c),
        Element::Int(n) => json!(n.to_string()),
        Element::Vector(v) => json!(v.iter().map(ratio_string).collect::<Vec<_>>()),
        Element::Supported(s) => json!(s.iter().map(|&(i, v)| json!([i, v])).collect::<Vec<_>>()),
    }
}

pub fn element_from_json(group: &GroupInstance, v: &Value) -> Result<Element> {
    let bad = |msg: &str| Error::Descriptor(format!("bad element {v}: {msg}"));
    let element = match group.kind() {
        GroupKind::FiniteDirectSum(_) => {
            let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
            let mut c = Vec::with_capacity(arr.len());
            for item in arr {
                c.push(
                    item.as_u64()
                        .ok_or_else(|| bad("expected a component in [0, n)"))?,
                );
            }
            Element::Tuple(c)
        }
        GroupKind::Integers => match v {
            Value::String(s) => Element::Int(
                s.parse::<BigInt>()
                    .map_err(|_| bad("expected a decimal integer string"))?,
            ),
            Value::Number(n) => Element::Int(BigInt::from(
                n.as_i64()
                    .ok_or_else(|| bad("integer out of range; use a string"))?,
            )),
            _ => return Err(bad("expected an integer")),
        },
        GroupKind::RationalVector(_) => {
            let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
            let mut coords = Vec::with_capacity(arr.len());
            for item in arr {
                let s = item
                    .as_str()
                    .ok_or_else(|| bad("expected \"num/den\" strings"))?;
                coords.push(parse_ratio(s)?);
            }
            Element::Vector(coords)
        }
        GroupKind::RestrictedDirectSum(_) => {
            let arr = v
                .as_array()
                .ok_or_else(|| bad("expected [[index, value], ...]"))?;
            let mut s = Vec::with_capacity(arr.len());
            for item in arr {
                let pair = item.as_array().filter(|p| p.len() == 2);
                let pair = pair.ok_or_else(|| bad("expected [index, value] pairs"))?;
                let i = pair[0].as_u64().ok_or_else(|| bad("bad index"))? as usize;
                let val = pair[1].as_u64().ok_or_else(|| bad("bad value"))?;
                s.push((i, val));
            }
            Element::Supported(s)
        }
    };
    group.validate(&element)?;
    Ok(element)
}

/// Serialized sequence certificate: group, prefix, exact epsilon values and
/// the growth records, all rationals as `"num/den"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceCertificate {
    pub group: GroupDescriptor,
    pub prefix: Vec<Value>,
    pub epsilon: Vec<String>,
    pub checks: Vec<GrowthCheckDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthCheckDoc {
    pub n: usize,
    pub lhs: String,
    pub eps: String,
    pub vxn: String,
}

impl SequenceCertificate {
    pub fn from_sequence(seq: &MetricSequence) -> SequenceCertificate {
        let group = GroupDescriptor::from_metric(seq.metric());
        SequenceCertificate {
            group,
            prefix: seq
                .prefix()
                .iter()
                .map(|x| element_to_json(seq.group(), x))
                .collect(),
            epsilon: seq.stored_epsilon().iter().map(ratio_string).collect(),
            checks: seq
                .stored_checks()
                .iter()
                .map(|c| GrowthCheckDoc {
                    n: c.n,
                    lhs: ratio_string(&c.lhs),
                    eps: ratio_string(&c.eps),
                    vxn: ratio_string(&c.vxn),
                })
                .collect(),
        }
    }

    /// Rebuilds the in-memory sequence. Stored certificates are carried
    /// over verbatim; call `reverify_stored` to re-derive them.
    pub fn to_sequence(&self) -> Result<MetricSequence> {
        let metric = self.group.to_metric()?;
        let group = metric.group().clone();
        let prefix = self
            .prefix
            .iter()
            .map(|v| element_from_json(&group, v))
            .collect::<Result<Vec<_>>>()?;
        let epsilon = self
            .epsilon
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()?;
        let checks = self
            .checks
            .iter()
            .map(|c| {
                Ok(GrowthCheck {
                    n: c.n,
                    lhs: parse_ratio(&c.lhs)?,
                    eps: parse_ratio(&c.eps)?,
                    vxn: parse_ratio(&c.vxn)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MetricSequence::with_stored(metric, prefix, epsilon, checks)
    }
}
