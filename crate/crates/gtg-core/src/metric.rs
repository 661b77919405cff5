//! Metric wrappers: a group seminorm `v` with `v(x) = d(x, 0)` and an
//! ordered stream of nonzero candidate elements for search procedures.
//!
//! Shipped seminorms:
//! * `Dyadic` on the integers: `v(x) = 2^(-val_2(x))`, `v(0) = 0`;
//! * `WeightedCircle` on direct sums: `sum_i 2^-i * min(x_i/n_i, 1 - x_i/n_i)`,
//!   computed exactly over the finite support;
//! * `Discrete`: `v(x) = 1` for `x != 0`.

use num::{BigInt, BigRational, One, Zero};

use crate::coeff::pow2;
use crate::error::{Error, Result};
use crate::group::{Element, GroupInstance, GroupKind, OrderFormula};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeminormKind {
    Dyadic,
    WeightedCircle,
    Discrete,
}

/// A group instance together with its seminorm and candidate stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGroup {
    group: GroupInstance,
    seminorm: SeminormKind,
}

impl MetricGroup {
    pub fn new(group: GroupInstance, seminorm: SeminormKind) -> Result<Self> {
        match (seminorm, group.kind()) {
            (SeminormKind::Dyadic, GroupKind::Integers) => {}
            (SeminormKind::WeightedCircle, GroupKind::FiniteDirectSum(_))
            | (SeminormKind::WeightedCircle, GroupKind::RestrictedDirectSum(_)) => {}
            (SeminormKind::Discrete, _) => {}
            _ => {
                return Err(Error::Descriptor(
                    "seminorm is not defined on this carrier".into(),
                ))
            }
        }
        Ok(MetricGroup { group, seminorm })
    }

    pub fn group(&self) -> &GroupInstance {
        &self.group
    }

    pub fn seminorm_kind(&self) -> SeminormKind {
        self.seminorm
    }

    /// Exact seminorm value of a valid element.
    pub fn value(&self, x: &Element) -> BigRational {
        match (self.seminorm, x) {
            (SeminormKind::Dyadic, Element::Int(n)) => {
                if n.is_zero() {
                    BigRational::zero()
                } else {
                    let val = n.trailing_zeros().expect("nonzero integer");
                    pow2(-(val as i64))
                }
            }
            (SeminormKind::WeightedCircle, Element::Tuple(c)) => {
                let orders = match self.group.kind() {
                    GroupKind::FiniteDirectSum(orders) => orders,
                    _ => unreachable!(),
                };
                let mut acc = BigRational::zero();
                for (i, (&v, &n)) in c.iter().zip(orders).enumerate() {
                    if v != 0 {
                        acc += pow2(-(i as i64)) * circle_dist(v, n);
                    }
                }
                acc
            }
            (SeminormKind::WeightedCircle, Element::Supported(s)) => {
                let formula = match self.group.kind() {
                    GroupKind::RestrictedDirectSum(f) => f,
                    _ => unreachable!(),
                };
                let mut acc = BigRational::zero();
                for &(i, v) in s {
                    acc += pow2(-(i as i64)) * circle_dist(v, formula.order_at(i));
                }
                acc
            }
            (SeminormKind::Discrete, x) => {
                if self.group.is_zero(x) {
                    BigRational::zero()
                } else {
                    BigRational::one()
                }
            }
            _ => panic!("seminorm/element mismatch"),
        }
    }

    /// Ordered stream of distinct nonzero elements. For the integers it is
    /// `1, -1, 2, -2, 4, -4, ...` (powers of two); finite direct sums are
    /// exhausted in canonical order; restricted direct sums enumerate
    /// standard generators and then small combinations, stage by stage.
    pub fn candidates(&self) -> Box<dyn Iterator<Item = Element>> {
        match self.group.kind() {
            GroupKind::Integers => Box::new((0u32..).flat_map(|k| {
                let p = BigInt::one() << k;
                [Element::Int(p.clone()), Element::Int(-p)]
            })),
            GroupKind::FiniteDirectSum(_) => {
                let group = self.group.clone();
                let all = group.enumerate().expect("finite carrier");
                Box::new(all.into_iter().filter(move |x| !group.is_zero(x)))
            }
            GroupKind::RestrictedDirectSum(formula) => Box::new(RestrictedStream::new(*formula)),
            GroupKind::RationalVector(_) => Box::new(std::iter::empty()),
        }
    }
}

/// Circle distance of the residue `v` in `Z(n)`: `min(v/n, (n-v)/n)`, exact.
fn circle_dist(v: u64, n: u64) -> BigRational {
    let d = v.min(n - v);
    BigRational::new(BigInt::from(d), BigInt::from(n))
}

/// Stage `s` yields every nonzero element with support in `[0, s)` and
/// components in `{0, 1, n_i - 1}` whose last coordinate `s-1` is nonzero,
/// in canonical order. Generators `e_i` therefore appear first in their
/// stage, followed by the small combinations.
struct RestrictedStream {
    formula: OrderFormula,
    stage: usize,
    pending: std::vec::IntoIter<Element>,
}

impl RestrictedStream {
    fn new(formula: OrderFormula) -> Self {
        RestrictedStream {
            formula,
            stage: 0,
            pending: Vec::new().into_iter(),
        }
    }

    fn fill_stage(&mut self) {
        self.stage += 1;
        let s = self.stage;
        let mut out: Vec<Element> = Vec::new();
        // Odometer over component choices 0 / 1 / n-1 for indices 0..s-1,
        // with index s-1 forced nonzero.
        let mut choice = vec![0u8; s];
        'outer: loop {
            if choice[s - 1] != 0 {
                let support: Vec<(usize, u64)> = choice
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &c)| match c {
                        0 => None,
                        1 => Some((i, 1)),
                        _ => Some((i, self.formula.order_at(i) - 1)),
                    })
                    .collect();
                out.push(Element::Supported(support));
            }
            let mut i = s;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < 3 {
                    break;
                }
                choice[i] = 0;
            }
        }
        out.sort();
        out.dedup();
        self.pending = out.into_iter();
    }
}

impl Iterator for RestrictedStream {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        loop {
            if let Some(e) = self.pending.next() {
                return Some(e);
            }
            self.fill_stage();
        }
    }
}
