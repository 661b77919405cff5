//! Group homomorphism descriptors: images of standard generators for
//! finite sources, or an exact formula (integer reduction mod n,
//! coordinate projections).

use num::{BigInt, Integer};

use crate::error::{Error, Result};
use crate::group::{Element, GroupInstance, GroupKind, Order};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomKind {
    /// Source is a finite direct sum; `images[i]` is the image of `e_i`.
    FiniteByImages {
        images: Vec<Element>,
    },
    /// Integers onto `Z(n)` (target must be the one-summand sum `[n]`).
    ModReduction,
    /// Coordinate selection between finite direct sums.
    Projection {
        coords: Vec<usize>,
    },
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: GroupInstance,
    target: GroupInstance,
    kind: HomKind,
}

impl Homomorphism {
    pub fn finite_by_images(
        source: GroupInstance,
        target: GroupInstance,
        images: Vec<Element>,
    ) -> Result<Self> {
        let orders = match source.kind() {
            GroupKind::FiniteDirectSum(orders) => orders.clone(),
            _ => {
                return Err(Error::Descriptor(
                    "generator-image homomorphisms need a finite source".into(),
                ))
            }
        };
        if images.len() != orders.len() {
            return Err(Error::Descriptor(format!(
                "expected {} generator images, got {}",
                orders.len(),
                images.len()
            )));
        }
        for (i, (img, &a)) in images.iter().zip(&orders).enumerate() {
            target.validate(img)?;
            match target.element_order(img)? {
                Order::Finite(o) if a % o == 0 => {}
                o => return Err(Error::Descriptor(format!(
                    "image of generator {i} has order {o:?} not dividing {a}: not a homomorphism"
                ))),
            }
        }
        Ok(Homomorphism {
            source,
            target,
            kind: HomKind::FiniteByImages { images },
        })
    }

    pub fn mod_reduction(n: u64) -> Result<Self> {
        Ok(Homomorphism {
            source: GroupInstance::integers(),
            target: GroupInstance::finite_direct_sum(vec![n])?,
            kind: HomKind::ModReduction,
        })
    }

    pub fn projection(source: GroupInstance, coords: Vec<usize>) -> Result<Self> {
        let orders = match source.kind() {
            GroupKind::FiniteDirectSum(orders) => orders.clone(),
            _ => {
                return Err(Error::Descriptor(
                    "projection needs a finite direct sum".into(),
                ))
            }
        };
        if coords.iter().any(|&c| c >= orders.len()) {
            return Err(Error::Descriptor(
                "projection coordinate out of range".into(),
            ));
        }
        let target = GroupInstance::finite_direct_sum(coords.iter().map(|&c| orders[c]).collect())?;
        Ok(Homomorphism {
            source,
            target,
            kind: HomKind::Projection { coords },
        })
    }

    pub fn identity(group: GroupInstance) -> Self {
        Homomorphism {
            source: group.clone(),
            target: group,
            kind: HomKind::Identity,
        }
    }

    pub fn source(&self) -> &GroupInstance {
        &self.source
    }

    pub fn target(&self) -> &GroupInstance {
        &self.target
    }

    pub fn apply(&self, x: &Element) -> Element {
        match (&self.kind, x) {
            (HomKind::FiniteByImages { images }, Element::Tuple(c)) => {
                let mut acc = self.target.zero();
                for (&v, img) in c.iter().zip(images) {
                    if v != 0 {
                        acc = self
                            .target
                            .add(&acc, &self.target.scalar_mul_i64(v as i64, img));
                    }
                }
                acc
            }
            (HomKind::ModReduction, Element::Int(n)) => {
                let modulus = match self.target.kind() {
                    GroupKind::FiniteDirectSum(orders) => orders[0],
                    _ => unreachable!(),
                };
                let r = n.mod_floor(&BigInt::from(modulus));
                Element::Tuple(vec![u64::try_from(&r).expect("reduced residue fits u64")])
            }
            (HomKind::Projection { coords }, Element::Tuple(c)) => {
                Element::Tuple(coords.iter().map(|&i| c[i]).collect())
            }
            (HomKind::Identity, x) => x.clone(),
            _ => panic!("homomorphism applied to mismatched element"),
        }
    }

    /// Image of a finite source, as a sorted element list.
    pub fn image(&self) -> Result<Vec<Element>> {
        let mut out: Vec<Element> = self
            .source
            .enumerate()?
            .iter()
            .map(|x| self.apply(x))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_map_is_a_homomorphism() {
        let z4 = GroupInstance::finite_direct_sum(vec![4]).unwrap();
        let z8 = GroupInstance::finite_direct_sum(vec![8]).unwrap();
        let phi = Homomorphism::finite_by_images(z4, z8, vec![Element::tuple(vec![2])]).unwrap();
        assert_eq!(phi.apply(&Element::tuple(vec![3])), Element::tuple(vec![6]));
        assert_eq!(
            phi.image().unwrap(),
            vec![
                Element::tuple(vec![0]),
                Element::tuple(vec![2]),
                Element::tuple(vec![4]),
                Element::tuple(vec![6]),
            ]
        );
    }

    #[test]
    fn invalid_generator_image_is_rejected() {
        let z4 = GroupInstance::finite_direct_sum(vec![4]).unwrap();
        let z8 = GroupInstance::finite_direct_sum(vec![8]).unwrap();
        // e_1 in Z(4) has order 4; the image 1 in Z(8) has order 8.
        assert!(Homomorphism::finite_by_images(z4, z8, vec![Element::tuple(vec![1])]).is_err());
    }

    #[test]
    fn mod_reduction_wraps_negatives() {
        let phi = Homomorphism::mod_reduction(4).unwrap();
        assert_eq!(phi.apply(&Element::int(-1)), Element::tuple(vec![3]));
        assert_eq!(phi.apply(&Element::int(12)), Element::tuple(vec![0]));
    }

    #[test]
    fn projection_drops_coordinates() {
        let g = GroupInstance::finite_direct_sum(vec![2, 3, 4]).unwrap();
        let phi = Homomorphism::projection(g, vec![2, 0]).unwrap();
        assert_eq!(
            phi.apply(&Element::tuple(vec![1, 2, 3])),
            Element::tuple(vec![3, 1])
        );
    }

    #[test]
    fn homomorphism_property_on_samples() {
        let z12 = GroupInstance::finite_direct_sum(vec![12]).unwrap();
        let phi = Homomorphism::finite_by_images(
            z12.clone(),
            GroupInstance::finite_direct_sum(vec![4]).unwrap(),
            vec![Element::tuple(vec![1])],
        )
        .unwrap();
        for x in z12.enumerate().unwrap() {
            for y in z12.enumerate().unwrap() {
                let lhs = phi.apply(&z12.add(&x, &y));
                let rhs = phi.target().add(&phi.apply(&x), &phi.apply(&y));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
