//! Seeded random corpora of finite groups, symmetric subsets and
//! homomorphisms. Seeding makes every corpus reproducible bit for bit.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use gtg_core::group::{Element, GroupInstance, Order};
use gtg_core::hom::Homomorphism;
use gtg_core::symset::SymSet;

/// Orders drawn from the divisors of 24, so every sampled group has
/// exponent dividing 24.
const ORDER_POOL: &[u64] = &[2, 3, 4, 6, 8, 12, 24];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random finite direct sum with at most `max_size` elements.
pub fn random_group(rng: &mut ChaCha8Rng, max_size: u64) -> GroupInstance {
    loop {
        let factors = rng.gen_range(1..=3);
        let orders: Vec<u64> = (0..factors)
            .map(|_| ORDER_POOL[rng.gen_range(0..ORDER_POOL.len())])
            .collect();
        if orders.iter().product::<u64>() <= max_size {
            return GroupInstance::finite_direct_sum(orders).unwrap();
        }
    }
}

/// A random symmetric subset containing zero: each `{x, -x}` class is
/// included with probability 1/2.
pub fn random_symmetric_set(rng: &mut ChaCha8Rng, group: &GroupInstance) -> SymSet {
    let mut elements = vec![group.zero()];
    let mut seen = std::collections::BTreeSet::new();
    for x in group.enumerate().unwrap() {
        if group.is_zero(&x) || seen.contains(&x) {
            continue;
        }
        let neg = group.neg(&x);
        seen.insert(x.clone());
        seen.insert(neg.clone());
        if rng.gen_bool(0.5) {
            elements.push(x.clone());
            if neg != x {
                elements.push(neg);
            }
        }
    }
    SymSet::explicit(group.clone(), elements).unwrap()
}

/// `count` random (group, symmetric set) pairs.
pub fn set_corpus(seed: u64, count: usize, max_size: u64) -> Vec<(GroupInstance, SymSet)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let g = random_group(&mut rng, max_size);
            let u = random_symmetric_set(&mut rng, &g);
            (g, u)
        })
        .collect()
}

/// A random homomorphism between random finite groups, with a random
/// symmetric target set. When `inside_image` is set the target set is
/// sampled from the image of the map.
pub fn random_homomorphism_case(
    rng: &mut ChaCha8Rng,
    inside_image: bool,
) -> (Homomorphism, SymSet) {
    let source = random_group(rng, 48);
    let target = random_group(rng, 48);
    let target_elements = target.enumerate().unwrap();
    let orders: Vec<u64> = match source.kind() {
        gtg_core::group::GroupKind::FiniteDirectSum(orders) => orders.clone(),
        _ => unreachable!(),
    };
    let images: Vec<Element> = orders
        .iter()
        .map(|&a| {
            let pick = &target_elements[rng.gen_range(0..target_elements.len())];
            let o = match target.element_order(pick).unwrap() {
                Order::Finite(o) => o,
                Order::Infinite => unreachable!(),
            };
            // Scale so the image order divides the generator order.
            let g = num::integer::gcd(o, a);
            target.scalar_mul_i64((o / g) as i64, pick)
        })
        .collect();
    let phi = Homomorphism::finite_by_images(source, target.clone(), images).unwrap();
    let set = if inside_image {
        let image = phi.image().unwrap();
        let mut elements = vec![target.zero()];
        for x in &image {
            if !target.is_zero(x) && rng.gen_bool(0.5) {
                elements.push(x.clone());
                elements.push(target.neg(x));
            }
        }
        SymSet::explicit(target, elements).unwrap()
    } else {
        random_symmetric_set(rng, &target)
    };
    (phi, set)
}

/// Rejection-samples a random set of finite degree over a random group.
pub fn random_generating_set(rng: &mut ChaCha8Rng, max_size: u64) -> (GroupInstance, SymSet, u64) {
    use gtg_core::symset::{gamma, GammaOutcome};
    use gtg_core::window::Window;
    let w = Window::default();
    loop {
        let g = random_group(rng, max_size);
        let u = random_symmetric_set(rng, &g);
        if let GammaOutcome::Finite { m, .. } = gamma(&u, &w).unwrap() {
            return (g, u, m);
        }
    }
}
