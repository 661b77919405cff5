//! Symmetric subsets containing zero, and the calculus on them:
//! divided sets `(1/n)U`, the core `U_oo`, sumsets, the degree
//! `gamma(U) = min { m : (1/m)U + (1/m)U subset of U }`, subgroup and
//! small-subgroup probes, preimages, and box products.
//!
//! Membership is exact for every shipped representation; enumeration is
//! exact for finite groups and window-restricted otherwise.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Element, Exponent, GroupInstance, GroupKind};
use crate::hom::Homomorphism;
use crate::metric::MetricGroup;
use crate::window::{Status, Verdict, Window, Witness};

#[derive(Debug)]
enum SetExpr {
    /// Finite element list in canonical form.
    Explicit(BTreeSet<Element>),
    /// The whole group.
    FullGroup,
    /// Over the integers: zero together with the p-smooth numbers and their
    /// negatives.
    Smooth { p: u64 },
    /// The coordinate cross `([-1,1] x {0}) u ({0} x [-1,1])` over the
    /// rational plane.
    Cross,
    /// Closed seminorm ball `{ x : v(x) <= radius }`.
    Ball {
        metric: MetricGroup,
        radius: BigRational,
    },
    /// Componentwise box product of the factor sets.
    BoxProduct { factors: Vec<SymSet> },
    /// `(1/n)` of the base set, kept lazy on infinite carriers.
    Div { base: SymSet, n: u64 },
    /// Intersection of sets over one group.
    Intersection(Vec<SymSet>),
    /// `phi^{-1}(target)` over the source of `phi`.
    Preimage { hom: Homomorphism, target: SymSet },
}

/// A symmetric subset of an abelian group containing zero.
#[derive(Debug, Clone)]
pub struct SymSet {
    group: GroupInstance,
    expr: Arc<SetExpr>,
}

/// How much of the set an enumeration captured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// The entire set (finite carriers, explicit lists).
    Total,
    /// Every member within the window bound.
    WithinWindow,
    /// A membership-true sample only.
    Sample,
}

/// Canonically sorted enumeration of a set.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub elements: Vec<Element>,
    pub completeness: Completeness,
}

/// Result of the degree computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaOutcome {
    /// The degree, with one escape pair recorded for every level below it.
    Finite {
        m: u64,
        exact: bool,
        escapes_below: Vec<(u64, Element, Element)>,
    },
    /// No level works: one escape pair per probed level. On finite groups
    /// this is a complete certificate; on infinite carriers it is backed by
    /// a parametric witness family checked up to the window depth.
    InfinityCertified {
        escapes: Vec<(u64, Element, Element)>,
        family_note: Option<String>,
    },
    Unknown {
        probed_to: u64,
    },
}

/// Exactness of a computed core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreExactness {
    Exact,
    /// `(1/depth)U`, an upper approximation of the true core.
    UpperApproximation {
        depth: u64,
    },
}

impl SymSet {
    fn make(group: GroupInstance, expr: SetExpr) -> SymSet {
        SymSet {
            group,
            expr: Arc::new(expr),
        }
    }

    /// Builds an explicit set, checking zero membership, symmetry and
    /// canonical element forms.
    pub fn explicit(group: GroupInstance, elements: Vec<Element>) -> Result<SymSet> {
        let mut set = BTreeSet::new();
        for e in elements {
            group.validate(&e)?;
            set.insert(e);
        }
        if !set.contains(&group.zero()) {
            return Err(Error::Descriptor(
                "a symmetric set must contain zero".into(),
            ));
        }
        for e in &set {
            if !set.contains(&group.neg(e)) {
                return Err(Error::Descriptor(format!(
                    "set is not symmetric: missing -({e})"
                )));
            }
        }
        Ok(SymSet::make(group, SetExpr::Explicit(set)))
    }

    pub fn full_group(group: GroupInstance) -> SymSet {
        SymSet::make(group, SetExpr::FullGroup)
    }

    /// `U_p`: zero and the p-smooth integers with both signs.
    pub fn u_p(p: u64) -> Result<SymSet> {
        if !is_prime(p) {
            return Err(Error::Descriptor(format!("u_p parameter {p} is not prime")));
        }
        Ok(SymSet::make(
            GroupInstance::integers(),
            SetExpr::Smooth { p },
        ))
    }

    /// The coordinate cross over the rational plane.
    pub fn cross() -> SymSet {
        SymSet::make(GroupInstance::rational_vector(2).unwrap(), SetExpr::Cross)
    }

    /// Closed ball `{ v(x) <= radius }` of a metric group.
    pub fn ball(metric: MetricGroup, radius: BigRational) -> Result<SymSet> {
        if radius.is_negative() {
            return Err(Error::Descriptor("ball radius must be non-negative".into()));
        }
        let group = metric.group().clone();
        Ok(SymSet::make(group, SetExpr::Ball { metric, radius }))
    }

    /// Subgroup generated by `gens` in a finite group, materialized.
    pub fn subgroup_generated(group: GroupInstance, gens: Vec<Element>) -> Result<SymSet> {
        if !group.is_finite() {
            return Err(Error::Unsupported(
                "subgroup closure needs a finite group".into(),
            ));
        }
        for g in &gens {
            group.validate(g)?;
        }
        let mut set: BTreeSet<Element> = BTreeSet::new();
        set.insert(group.zero());
        let mut frontier: Vec<Element> = vec![group.zero()];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                for y in [group.add(&x, g), group.sub(&x, g)] {
                    if set.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
        }
        Ok(SymSet::make(group, SetExpr::Explicit(set)))
    }

    pub fn group(&self) -> &GroupInstance {
        &self.group
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Element) -> bool {
        match &*self.expr {
            SetExpr::Explicit(set) => set.contains(x),
            SetExpr::FullGroup => true,
            SetExpr::Smooth { p } => match x {
                Element::Int(n) => n.is_zero() || is_smooth(&n.abs(), *p),
                _ => false,
            },
            SetExpr::Cross => match x {
                Element::Vector(v) => {
                    let one = BigRational::one();
                    (v[1].is_zero() && v[0].abs() <= one) || (v[0].is_zero() && v[1].abs() <= one)
                }
                _ => false,
            },
            SetExpr::Ball { metric, radius } => metric.value(x) <= *radius,
            SetExpr::BoxProduct { factors } => match split_product_element(factors, x) {
                Some(parts) => factors.iter().zip(parts).all(|(f, part)| f.contains(&part)),
                None => false,
            },
            SetExpr::Div { base, n } => {
                (1..=*n).all(|k| base.contains(&self.group.scalar_mul_i64(k as i64, x)))
            }
            SetExpr::Intersection(sets) => sets.iter().all(|s| s.contains(x)),
            SetExpr::Preimage { hom, target } => target.contains(&hom.apply(x)),
        }
    }

    /// All members within the window, canonically sorted.
    pub fn enumerate_window(&self, w: &Window) -> Result<Enumeration> {
        if self.group.is_finite() {
            let all = self.group.enumerate()?;
            if all.len() as u64 > w.budget {
                return Err(Error::BudgetExhausted { budget: w.budget });
            }
            let mut elements: Vec<Element> = all.into_iter().filter(|x| self.contains(x)).collect();
            elements.sort();
            return Ok(Enumeration {
                elements,
                completeness: Completeness::Total,
            });
        }
        let mut result = match &*self.expr {
            SetExpr::Explicit(set) => Enumeration {
                elements: set.iter().cloned().collect(),
                completeness: Completeness::Total,
            },
            SetExpr::Smooth { p } => {
                let mut elements = vec![Element::int(0)];
                for s in smooth_numbers_up_to(*p, w.bound) {
                    elements.push(Element::Int(BigInt::from(s)));
                    elements.push(Element::Int(-BigInt::from(s)));
                }
                if elements.len() as u64 > w.budget {
                    return Err(Error::BudgetExhausted { budget: w.budget });
                }
                Enumeration {
                    elements,
                    completeness: Completeness::WithinWindow,
                }
            }
            SetExpr::Cross => {
                // A denominator-bounded sample of the two segments; the
                // membership predicate stays exact.
                let den_cap = w.bound.min(16);
                let mut elements = vec![self.group.zero()];
                for b in 1..=den_cap {
                    for a in 1..=b {
                        if num::integer::gcd(a, b) != 1 {
                            continue;
                        }
                        let q = BigRational::new(BigInt::from(a), BigInt::from(b));
                        let zero = BigRational::zero();
                        elements.push(Element::Vector(vec![q.clone(), zero.clone()]));
                        elements.push(Element::Vector(vec![-q.clone(), zero.clone()]));
                        elements.push(Element::Vector(vec![zero.clone(), q.clone()]));
                        elements.push(Element::Vector(vec![zero, -q]));
                    }
                }
                Enumeration {
                    elements,
                    completeness: Completeness::Sample,
                }
            }
            SetExpr::Ball { metric, radius } => match self.group.kind() {
                GroupKind::Integers => {
                    let mut elements = vec![Element::int(0)];
                    for n in 1..=w.bound {
                        if elements.len() as u64 + 2 > w.budget {
                            return Err(Error::BudgetExhausted { budget: w.budget });
                        }
                        let x = Element::Int(BigInt::from(n));
                        if metric.value(&x) <= *radius {
                            elements.push(Element::Int(-BigInt::from(n)));
                            elements.push(x);
                        }
                    }
                    Enumeration {
                        elements,
                        completeness: Completeness::WithinWindow,
                    }
                }
                _ => {
                    let mut elements = vec![self.group.zero()];
                    for x in metric.candidates().take(w.bound.min(w.budget) as usize) {
                        if metric.value(&x) <= *radius {
                            elements.push(x);
                        }
                    }
                    Enumeration {
                        elements,
                        completeness: Completeness::Sample,
                    }
                }
            },
            SetExpr::BoxProduct { factors } => {
                let parts: Vec<Enumeration> = factors
                    .iter()
                    .map(|f| f.enumerate_window(w))
                    .collect::<Result<_>>()?;
                let mut total: u64 = 1;
                for p in &parts {
                    total = total.saturating_mul(p.elements.len() as u64);
                }
                if total > w.budget {
                    return Err(Error::BudgetExhausted { budget: w.budget });
                }
                let completeness = parts
                    .iter()
                    .map(|p| p.completeness)
                    .fold(Completeness::Total, weaker);
                let mut elements = Vec::with_capacity(total as usize);
                let mut indices = vec![0usize; parts.len()];
                'outer: loop {
                    let combined = join_product_element(
                        &self.group,
                        factors,
                        &indices
                            .iter()
                            .zip(&parts)
                            .map(|(&i, p)| p.elements[i].clone())
                            .collect::<Vec<_>>(),
                    );
                    elements.push(combined);
                    let mut i = parts.len();
                    loop {
                        if i == 0 {
                            break 'outer;
                        }
                        i -= 1;
                        indices[i] += 1;
                        if indices[i] < parts[i].elements.len() {
                            break;
                        }
                        indices[i] = 0;
                    }
                }
                Enumeration {
                    elements,
                    completeness,
                }
            }
            SetExpr::Div { base, n } => {
                let inner = base.enumerate_window(w)?;
                let group = &self.group;
                let elements = inner
                    .elements
                    .into_iter()
                    .filter(|x| (2..=*n).all(|k| base.contains(&group.scalar_mul_i64(k as i64, x))))
                    .collect();
                Enumeration {
                    elements,
                    completeness: inner.completeness,
                }
            }
            SetExpr::Intersection(sets) => {
                let first = sets[0].enumerate_window(w)?;
                let elements = first
                    .elements
                    .into_iter()
                    .filter(|x| sets[1..].iter().all(|s| s.contains(x)))
                    .collect();
                Enumeration {
                    elements,
                    completeness: first.completeness,
                }
            }
            SetExpr::Preimage { hom, target } => match self.group.kind() {
                GroupKind::Integers => {
                    let mut elements = Vec::new();
                    for n in 0..=w.bound as i64 {
                        for x in [Element::int(n), Element::int(-n)] {
                            if n == 0 && matches!(x, Element::Int(ref v) if v.is_negative()) {
                                continue;
                            }
                            if target.contains(&hom.apply(&x)) {
                                elements.push(x);
                            }
                        }
                    }
                    Enumeration {
                        elements,
                        completeness: Completeness::WithinWindow,
                    }
                }
                _ => {
                    return Err(Error::Unsupported(
                        "preimage enumeration on this carrier".into(),
                    ))
                }
            },
            SetExpr::FullGroup => {
                return Err(Error::Unsupported(
                    "cannot enumerate an infinite full group".into(),
                ))
            }
        };
        result.elements.sort();
        result.elements.dedup();
        Ok(result)
    }

    /// A parametric escape family `m -> (x, y)` with `x, y` in `(1/m)U` and
    /// `x + y` outside `U`, for set shapes where one is known.
    fn escape_family(&self, m: u64) -> Option<(Element, Element, &'static str)> {
        match &*self.expr {
            SetExpr::Cross => {
                let q = BigRational::new(BigInt::one(), BigInt::from(m));
                let zero = BigRational::zero();
                Some((
                    Element::Vector(vec![q.clone(), zero.clone()]),
                    Element::Vector(vec![zero, q]),
                    "for every m, ((1/m,0), (0,1/m)) lies in (1/m)U x (1/m)U and sums to \
                     (1/m,1/m), which has two nonzero coordinates and so escapes the cross",
                ))
            }
            SetExpr::BoxProduct { factors } => {
                // Lift an escape of any single factor, padding with zeros.
                for (i, f) in factors.iter().enumerate() {
                    if let Some((x, y, note)) = f.escape_family(m) {
                        return Some((
                            lift_into_product(&self.group, factors, i, &x),
                            lift_into_product(&self.group, factors, i, &y),
                            note,
                        ));
                    }
                }
                None
            }
            _ => None,
        }
    }
}

fn weaker(a: Completeness, b: Completeness) -> Completeness {
    use Completeness::*;
    match (a, b) {
        (Total, Total) => Total,
        (Sample, _) | (_, Sample) => Sample,
        _ => WithinWindow,
    }
}

/// Splits a product-carrier element into factor elements.
fn split_product_element(factors: &[SymSet], x: &Element) -> Option<Vec<Element>> {
    match x {
        Element::Tuple(c) => {
            let mut parts = Vec::with_capacity(factors.len());
            let mut offset = 0;
            for f in factors {
                let width = match f.group().kind() {
                    GroupKind::FiniteDirectSum(orders) => orders.len(),
                    _ => return None,
                };
                parts.push(Element::Tuple(c[offset..offset + width].to_vec()));
                offset += width;
            }
            (offset == c.len()).then_some(parts)
        }
        Element::Vector(v) => {
            // Rational carrier with integer factors: each coordinate must be
            // an integer to belong to any factor set.
            let mut parts = Vec::with_capacity(factors.len());
            for (q, f) in v.iter().zip(factors) {
                match f.group().kind() {
                    GroupKind::Integers => {
                        if !q.denom().is_one() {
                            return None;
                        }
                        parts.push(Element::Int(q.numer().clone()));
                    }
                    _ => return None,
                }
            }
            (v.len() == factors.len()).then_some(parts)
        }
        _ => None,
    }
}

fn join_product_element(carrier: &GroupInstance, factors: &[SymSet], parts: &[Element]) -> Element {
    match carrier.kind() {
        GroupKind::FiniteDirectSum(_) => {
            let mut c = Vec::new();
            for p in parts {
                match p {
                    Element::Tuple(t) => c.extend_from_slice(t),
                    _ => panic!("finite product part must be a tuple"),
                }
            }
            Element::Tuple(c)
        }
        GroupKind::RationalVector(_) => {
            let mut v = Vec::new();
            for p in parts {
                match p {
                    Element::Int(n) => v.push(BigRational::from_integer(n.clone())),
                    _ => panic!("rational product part must be an integer"),
                }
            }
            let _ = factors;
            Element::Vector(v)
        }
        _ => unreachable!(),
    }
}

fn lift_into_product(
    carrier: &GroupInstance,
    factors: &[SymSet],
    at: usize,
    part: &Element,
) -> Element {
    let parts: Vec<Element> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if i == at {
                part.clone()
            } else {
                f.group().zero()
            }
        })
        .collect();
    join_product_element(carrier, factors, &parts)
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// `(1/n)U = { x : kx in U for k = 1..n }`. Materialized exactly on finite
/// groups, lazy (with exact membership) otherwise.
pub fn div_set(u: &SymSet, n: u64, w: &Window) -> Result<SymSet> {
    if n == 0 {
        return Err(Error::Precondition("divided set needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(u.clone());
    }
    let group = u.group().clone();
    if group.is_finite() {
        let all = group.enumerate()?;
        if (all.len() as u64).saturating_mul(n) > w.budget {
            return Err(Error::BudgetExhausted { budget: w.budget });
        }
        let set: BTreeSet<Element> = all
            .into_iter()
            .filter(|x| (1..=n).all(|k| u.contains(&group.scalar_mul_i64(k as i64, x))))
            .collect();
        Ok(SymSet::make(group, SetExpr::Explicit(set)))
    } else {
        Ok(SymSet::make(group, SetExpr::Div { base: u.clone(), n }))
    }
}

/// `U_oo`, the elements all of whose multiples stay in `U`. Exact on finite
/// groups via `(1/e)U` with `e` the exponent; a depth-limited upper
/// approximation otherwise.
pub fn core(u: &SymSet, w: &Window) -> Result<(SymSet, CoreExactness)> {
    match u.group().exponent() {
        Exponent::Finite(e) => {
            let set = div_set(u, e, w)?;
            Ok((set, CoreExactness::Exact))
        }
        Exponent::Unbounded => {
            let set = div_set(u, w.depth_n, w)?;
            Ok((set, CoreExactness::UpperApproximation { depth: w.depth_n }))
        }
    }
}

/// `{ a + b : a in A, b in B }` within the window.
pub fn sumset(a: &SymSet, b: &SymSet, w: &Window) -> Result<(SymSet, Completeness)> {
    if a.group() != b.group() {
        return Err(Error::Precondition(
            "sumset factors must share a group".into(),
        ));
    }
    let ea = a.enumerate_window(w)?;
    let eb = b.enumerate_window(w)?;
    let pairs = (ea.elements.len() as u64).saturating_mul(eb.elements.len() as u64);
    if pairs > w.budget {
        return Err(Error::BudgetExhausted { budget: w.budget });
    }
    let group = a.group().clone();
    let mut set = BTreeSet::new();
    for x in &ea.elements {
        for y in &eb.elements {
            set.insert(group.add(x, y));
        }
    }
    let completeness = match (ea.completeness, eb.completeness) {
        (Completeness::Total, Completeness::Total) => Completeness::Total,
        _ => Completeness::Sample,
    };
    Ok((SymSet::make(group, SetExpr::Explicit(set)), completeness))
}

/// Intersection of finitely many sets over one group.
pub fn intersection(sets: Vec<SymSet>) -> Result<SymSet> {
    if sets.is_empty() {
        return Err(Error::Precondition(
            "intersection of an empty family".into(),
        ));
    }
    let group = sets[0].group().clone();
    if sets.iter().any(|s| s.group() != &group) {
        return Err(Error::Precondition(
            "intersection factors must share a group".into(),
        ));
    }
    Ok(SymSet::make(group, SetExpr::Intersection(sets)))
}

/// `phi^{-1}(A)` as a lazy set over the source of `phi`.
pub fn preimage_set(hom: &Homomorphism, a: &SymSet) -> Result<SymSet> {
    if hom.target() != a.group() {
        return Err(Error::Precondition(
            "homomorphism target does not match the set's group".into(),
        ));
    }
    Ok(SymSet::make(
        hom.source().clone(),
        SetExpr::Preimage {
            hom: hom.clone(),
            target: a.clone(),
        },
    ))
}

/// Box product of the factor sets over the product carrier: all factors
/// over finite direct sums, or all over the integers (carried by the
/// rational vector group, membership requiring integral coordinates).
pub fn product_set(factors: Vec<SymSet>, _w: &Window) -> Result<SymSet> {
    if factors.is_empty() {
        return Err(Error::Precondition("product of an empty family".into()));
    }
    let all_finite = factors
        .iter()
        .all(|f| matches!(f.group().kind(), GroupKind::FiniteDirectSum(_)));
    let all_integers = factors
        .iter()
        .all(|f| matches!(f.group().kind(), GroupKind::Integers));
    let carrier = if all_finite {
        let mut orders = Vec::new();
        for f in &factors {
            match f.group().kind() {
                GroupKind::FiniteDirectSum(o) => orders.extend_from_slice(o),
                _ => unreachable!(),
            }
        }
        GroupInstance::finite_direct_sum(orders)?
    } else if all_integers {
        GroupInstance::rational_vector(factors.len())?
    } else {
        return Err(Error::Unsupported(
            "box products need all-finite or all-integer factors".into(),
        ));
    };
    Ok(SymSet::make(carrier, SetExpr::BoxProduct { factors }))
}

/// The degree `gamma(U)`: least `m` with `(1/m)U + (1/m)U` inside `U`.
/// Decidable on finite groups (probing up to the exponent certifies
/// failure); window-limited otherwise.
pub fn gamma(u: &SymSet, w: &Window) -> Result<GammaOutcome> {
    match u.group().exponent() {
        Exponent::Finite(e) => gamma_finite(u, e, w),
        Exponent::Unbounded => gamma_windowed(u, w),
    }
}

fn gamma_finite(u: &SymSet, exponent: u64, w: &Window) -> Result<GammaOutcome> {
    let group = u.group().clone();
    let mut current: Vec<Element> = u.enumerate_window(w)?.elements;
    let mut escapes = Vec::new();
    let mut visited: u64 = 0;
    for m in 1..=exponent {
        if m > 1 {
            current.retain(|x| u.contains(&group.scalar_mul_i64(m as i64, x)));
        }
        match first_escape(&group, u, &current, &mut visited, w)? {
            Some((x, y)) => escapes.push((m, x, y)),
            None => {
                return Ok(GammaOutcome::Finite {
                    m,
                    exact: true,
                    escapes_below: escapes,
                })
            }
        }
    }
    // No level up to the exponent works; beyond it (1/m)U stabilizes to the
    // core, so failure everywhere is certified.
    Ok(GammaOutcome::InfinityCertified {
        escapes,
        family_note: None,
    })
}

fn gamma_windowed(u: &SymSet, w: &Window) -> Result<GammaOutcome> {
    // Box products on infinite carriers combine factorwise: the divided
    // sets split coordinatewise, so the degree is the maximum of the
    // factor degrees and factor escapes lift by zero padding.
    if let SetExpr::BoxProduct { factors } = &*u.expr {
        return gamma_box_product(u, factors, w);
    }
    // A known parametric family settles non-GTG-ness up front.
    if u.escape_family(1).is_some() {
        let mut escapes = Vec::new();
        let mut note = None;
        let mut verified = true;
        for m in 1..=w.depth_n {
            let (x, y, family_note) = u.escape_family(m).expect("family is total in m");
            note = Some(family_note.to_string());
            let in_level =
                |z: &Element| (1..=m).all(|k| u.contains(&u.group().scalar_mul_i64(k as i64, z)));
            let sum = u.group().add(&x, &y);
            if in_level(&x) && in_level(&y) && !u.contains(&sum) {
                escapes.push((m, x, y));
            } else {
                verified = false;
                break;
            }
        }
        if verified {
            return Ok(GammaOutcome::InfinityCertified {
                escapes,
                family_note: note,
            });
        }
    }

    let group = u.group().clone();
    let mut escapes = Vec::new();
    let mut visited: u64 = 0;
    for m in 1..=w.depth_n {
        let level = div_set(u, m, w)?;
        let members = level.enumerate_window(w)?;
        match first_escape(&group, u, &members.elements, &mut visited, w)? {
            Some((x, y)) => escapes.push((m, x, y)),
            None => {
                if members.completeness == Completeness::Sample {
                    // A sample that happens to be closed proves nothing.
                    return Ok(GammaOutcome::Unknown { probed_to: m });
                }
                return Ok(GammaOutcome::Finite {
                    m,
                    exact: false,
                    escapes_below: escapes,
                });
            }
        }
    }
    Ok(GammaOutcome::Unknown {
        probed_to: w.depth_n,
    })
}

fn gamma_box_product(u: &SymSet, factors: &[SymSet], w: &Window) -> Result<GammaOutcome> {
    let outcomes: Vec<GammaOutcome> = factors.iter().map(|f| gamma(f, w)).collect::<Result<_>>()?;
    if let Some(GammaOutcome::Unknown { probed_to }) = outcomes
        .iter()
        .find(|o| matches!(o, GammaOutcome::Unknown { .. }))
    {
        return Ok(GammaOutcome::Unknown {
            probed_to: *probed_to,
        });
    }
    // Collect one factor escape per level, first factor wins.
    let mut per_level: std::collections::BTreeMap<u64, (usize, Element, Element)> =
        std::collections::BTreeMap::new();
    let mut collect = |i: usize, escapes: &[(u64, Element, Element)]| {
        for (m, x, y) in escapes {
            per_level.entry(*m).or_insert((i, x.clone(), y.clone()));
        }
    };
    let mut max_degree: Option<u64> = Some(1);
    let mut exact = true;
    for (i, outcome) in outcomes.iter().enumerate() {
        match outcome {
            GammaOutcome::Finite {
                m,
                exact: e,
                escapes_below,
            } => {
                collect(i, escapes_below);
                max_degree = max_degree.map(|d| d.max(*m));
                exact &= e;
            }
            GammaOutcome::InfinityCertified {
                escapes,
                family_note,
            } => {
                collect(i, escapes);
                max_degree = None;
                exact &= family_note.is_none();
            }
            GammaOutcome::Unknown { .. } => unreachable!("handled above"),
        }
    }
    let lift = |m: u64, i: usize, x: &Element, y: &Element| -> Result<(u64, Element, Element)> {
        let lx = lift_into_product(&u.group, factors, i, x);
        let ly = lift_into_product(&u.group, factors, i, y);
        let in_level =
            |z: &Element| (1..=m).all(|k| u.contains(&u.group.scalar_mul_i64(k as i64, z)));
        let sum = u.group.add(&lx, &ly);
        if !in_level(&lx) || !in_level(&ly) || u.contains(&sum) {
            return Err(Error::Inconsistency(format!(
                "lifted escape at level {m} does not re-check"
            )));
        }
        Ok((m, lx, ly))
    };
    match max_degree {
        Some(degree) => {
            let mut escapes = Vec::new();
            for m in 1..degree {
                let (i, x, y) = per_level.get(&m).ok_or_else(|| {
                    Error::Inconsistency(format!("no factor escape recorded at level {m}"))
                })?;
                escapes.push(lift(m, *i, x, y)?);
            }
            Ok(GammaOutcome::Finite {
                m: degree,
                exact,
                escapes_below: escapes,
            })
        }
        None => {
            let mut escapes = Vec::new();
            for (m, (i, x, y)) in &per_level {
                escapes.push(lift(*m, *i, x, y)?);
            }
            Ok(GammaOutcome::InfinityCertified {
                escapes,
                family_note: Some("escapes lifted from a factor with unbounded degree".to_string()),
            })
        }
    }
}

/// First pair (in canonical order) of `members` whose sum escapes `u`.
fn first_escape(
    group: &GroupInstance,
    u: &SymSet,
    members: &[Element],
    visited: &mut u64,
    w: &Window,
) -> Result<Option<(Element, Element)>> {
    for x in members {
        for y in members {
            *visited += 1;
            if *visited > w.budget {
                return Err(Error::BudgetExhausted { budget: w.budget });
            }
            if !u.contains(&group.add(x, y)) {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

/// GTG decision: `Holds` iff the degree is finite.
pub fn is_gtg(u: &SymSet, w: &Window) -> Result<Verdict> {
    Ok(match gamma(u, w)? {
        GammaOutcome::Finite { m, exact, .. } => {
            Verdict::holds_with(Witness::GammaValue(m), *w, exact)
        }
        GammaOutcome::InfinityCertified {
            escapes,
            family_note,
        } => Verdict {
            status: Status::Fails,
            witness: Some(Witness::EscapeFamily(escapes)),
            window: *w,
            exact: family_note.is_none(),
        },
        GammaOutcome::Unknown { .. } => Verdict::unknown(*w),
    })
}

/// Closure of `U` under addition (within the window on infinite carriers).
pub fn is_subgroup(u: &SymSet, w: &Window) -> Result<Verdict> {
    let group = u.group().clone();
    let members = u.enumerate_window(w)?;
    let mut visited = 0u64;
    if let Some((x, y)) = first_escape(&group, u, &members.elements, &mut visited, w)? {
        return Ok(Verdict::fails_with(Witness::Pair(x, y), *w, true));
    }
    Ok(match members.completeness {
        Completeness::Total => Verdict::holds(*w, true),
        Completeness::WithinWindow => Verdict::holds(*w, false),
        Completeness::Sample => Verdict::unknown(*w),
    })
}

/// Whether `U` contains a nontrivial cyclic subgroup (finite groups only).
/// `Holds` carries the witness subgroup; `Fails` means `U` is a small-
/// subgroup-free neighborhood candidate.
pub fn contains_nontrivial_subgroup(u: &SymSet) -> Result<Verdict> {
    if !u.group().is_finite() {
        return Err(Error::Unsupported(
            "subgroup containment scan needs a finite group".into(),
        ));
    }
    let w = Window::default();
    let group = u.group().clone();
    let zero = group.zero();
    for x in u.enumerate_window(&w)?.elements {
        if x == zero {
            continue;
        }
        let cyclic = group.cyclic_subgroup(&x)?;
        if cyclic.iter().all(|y| u.contains(y)) {
            return Ok(Verdict::holds_with(
                Witness::CyclicSubgroup {
                    generator: x,
                    elements: cyclic,
                },
                w,
                true,
            ));
        }
    }
    Ok(Verdict::fails(w, true))
}

/// Window-exact equality of two sets: identical members within the window.
pub fn eq_within(a: &SymSet, b: &SymSet, w: &Window) -> Result<bool> {
    let ea = a.enumerate_window(w)?;
    let eb = b.enumerate_window(w)?;
    Ok(ea.elements == eb.elements)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn primes_up_to(p: u64) -> Vec<u64> {
    (2..=p).filter(|&q| is_prime(q)).collect()
}

fn is_smooth(n: &BigInt, p: u64) -> bool {
    let mut n = n.clone();
    for q in primes_up_to(p) {
        let q = BigInt::from(q);
        while (&n % &q).is_zero() {
            n /= &q;
        }
    }
    n.is_one()
}

/// All p-smooth positive integers up to `bound`, sorted.
fn smooth_numbers_up_to(p: u64, bound: u64) -> Vec<u64> {
    let primes = primes_up_to(p);
    let mut out = Vec::new();
    fn rec(primes: &[u64], from: usize, acc: u64, bound: u64, out: &mut Vec<u64>) {
        out.push(acc);
        for (i, &q) in primes.iter().enumerate().skip(from) {
            if acc <= bound / q {
                rec(primes, i, acc * q, bound, out);
            }
        }
    }
    rec(&primes, 0, 1, bound, &mut out);
    out.sort_unstable();
    out
}
