//! Exact abelian group instances: elements, arithmetic, orders, exponents.
//!
//! Four carriers are supported: finite direct sums of cyclic groups,
//! the integers, finite-dimensional rational vector groups, and restricted
//! direct sums with an unbounded order list. Every element is kept in a
//! canonical form so that equality and set membership are bit-exact.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// How the order of the `i`-th summand of a restricted direct sum is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderFormula {
    /// `n_i = 2^(i+3)`: orders 8, 16, 32, ...
    Pow2Plus3,
}

impl OrderFormula {
    pub fn order_at(&self, index: usize) -> u64 {
        match self {
            OrderFormula::Pow2Plus3 => {
                assert!(index <= 55, "summand index {index} out of supported range");
                1u64 << (index + 3)
            }
        }
    }
}

/// The group carrier. `FiniteDirectSum(vec![n_1, ..., n_r])` is
/// `Z(n_1) + ... + Z(n_r)`; `RestrictedDirectSum` is the direct sum of the
/// cyclic groups given by the order formula, with finitely supported elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    FiniteDirectSum(Vec<u64>),
    Integers,
    RationalVector(usize),
    RestrictedDirectSum(OrderFormula),
}

/// An abelian group with exact element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInstance {
    kind: GroupKind,
}

/// Group element in canonical form:
/// * `Tuple`: component `i` reduced into `[0, orders[i])`;
/// * `Int`: arbitrary-precision integer;
/// * `Vector`: rationals in lowest terms (as maintained by `BigRational`);
/// * `Supported`: sorted `(index, value)` pairs with `value` in `[1, n_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Tuple(Vec<u64>),
    Int(BigInt),
    Vector(Vec<BigRational>),
    Supported(Vec<(usize, u64)>),
}

/// Order of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn is_greater_than(&self, bound: u64) -> bool {
        match self {
            Order::Finite(n) => *n > bound,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Exponent of a group: least `n` with `nG = 0`, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Finite(u64),
    Unbounded,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Unbounded => write!(f, "unbounded"),
        }
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

impl GroupInstance {
    pub fn finite_direct_sum(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&n| n < 2) {
            return Err(Error::Descriptor(format!(
                "finite direct sum orders must be >= 2, got {orders:?}"
            )));
        }
        Ok(GroupInstance {
            kind: GroupKind::FiniteDirectSum(orders),
        })
    }

    pub fn integers() -> Self {
        GroupInstance {
            kind: GroupKind::Integers,
        }
    }

    pub fn rational_vector(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Descriptor("dimension must be >= 1".into()));
        }
        Ok(GroupInstance {
            kind: GroupKind::RationalVector(dimension),
        })
    }

    pub fn restricted_direct_sum(formula: OrderFormula) -> Self {
        GroupInstance {
            kind: GroupKind::RestrictedDirectSum(formula),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, GroupKind::FiniteDirectSum(_))
    }

    /// Number of elements for finite carriers.
    pub fn size(&self) -> Option<u64> {
        match &self.kind {
            GroupKind::FiniteDirectSum(orders) => {
                let mut size = 1u64;
                for &n in orders {
                    size = size.checked_mul(n)?;
                }
                Some(size)
            }
            _ => None,
        }
    }

    pub fn zero(&self) -> Element {
        match &self.kind {
            GroupKind::FiniteDirectSum(orders) => Element::Tuple(vec![0; orders.len()]),
            GroupKind::Integers => Element::Int(BigInt::zero()),
            GroupKind::RationalVector(d) => Element::Vector(vec![BigRational::zero(); *d]),
            GroupKind::RestrictedDirectSum(_) => Element::Supported(Vec::new()),
        }
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        match x {
            Element::Tuple(c) => c.iter().all(|&v| v == 0),
            Element::Int(n) => n.is_zero(),
            Element::Vector(v) => v.iter().all(|q| q.is_zero()),
            Element::Supported(s) => s.is_empty(),
        }
    }

    pub fn validate(&self, x: &Element) -> Result<()> {
        let malformed = |msg: String| Error::MalformedElement(msg);
        match (&self.kind, x) {
            (GroupKind::FiniteDirectSum(orders), Element::Tuple(c)) => {
                if c.len() != orders.len() {
                    return Err(malformed(format!(
                        "expected {} components, got {}",
                        orders.len(),
                        c.len()
                    )));
                }
                for (i, (&v, &n)) in c.iter().zip(orders).enumerate() {
                    if v >= n {
                        return Err(malformed(format!("component {i} = {v} not below {n}")));
                    }
                }
                Ok(())
            }
            (GroupKind::Integers, Element::Int(_)) => Ok(()),
            (GroupKind::RationalVector(d), Element::Vector(v)) => {
                if v.len() != *d {
                    return Err(malformed(format!(
                        "expected dimension {d}, got {}",
                        v.len()
                    )));
                }
                Ok(())
            }
            (GroupKind::RestrictedDirectSum(formula), Element::Supported(s)) => {
                let mut last: Option<usize> = None;
                for &(i, v) in s {
                    if let Some(prev) = last {
                        if i <= prev {
                            return Err(malformed(
                                "support indices not strictly increasing".into(),
                            ));
                        }
                    }
                    last = Some(i);
                    if i > 55 {
                        return Err(malformed(format!(
                            "support index {i} out of the representable order range"
                        )));
                    }
                    let n = formula.order_at(i);
                    if v == 0 || v >= n {
                        return Err(malformed(format!("entry {v} at index {i} not in [1, {n})")));
                    }
                }
                Ok(())
            }
            _ => Err(malformed(
                "element representation does not match group kind".into(),
            )),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        match (&self.kind, x, y) {
            (GroupKind::FiniteDirectSum(orders), Element::Tuple(a), Element::Tuple(b)) => {
                Element::Tuple(
                    a.iter()
                        .zip(b)
                        .zip(orders)
                        .map(|((&u, &v), &n)| (u + v) % n)
                        .collect(),
                )
            }
            (GroupKind::Integers, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (GroupKind::RationalVector(_), Element::Vector(a), Element::Vector(b)) => {
                Element::Vector(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (
                GroupKind::RestrictedDirectSum(formula),
                Element::Supported(a),
                Element::Supported(b),
            ) => {
                let mut out: Vec<(usize, u64)> = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
                    let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
                    if take_a {
                        out.push(a[i]);
                        i += 1;
                    } else if take_b {
                        out.push(b[j]);
                        j += 1;
                    } else {
                        let idx = a[i].0;
                        let n = formula.order_at(idx);
                        let v = (a[i].1 + b[j].1) % n;
                        if v != 0 {
                            out.push((idx, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                Element::Supported(out)
            }
            _ => panic!("add: mismatched element representations"),
        }
    }

    pub fn neg(&self, x: &Element) -> Element {
        match (&self.kind, x) {
            (GroupKind::FiniteDirectSum(orders), Element::Tuple(a)) => Element::Tuple(
                a.iter()
                    .zip(orders)
                    .map(|(&v, &n)| if v == 0 { 0 } else { n - v })
                    .collect(),
            ),
            (GroupKind::Integers, Element::Int(a)) => Element::Int(-a),
            (GroupKind::RationalVector(_), Element::Vector(a)) => {
                Element::Vector(a.iter().map(|q| -q).collect())
            }
            (GroupKind::RestrictedDirectSum(formula), Element::Supported(a)) => Element::Supported(
                a.iter()
                    .map(|&(i, v)| (i, formula.order_at(i) - v))
                    .collect(),
            ),
            _ => panic!("neg: mismatched element representation"),
        }
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    /// `k * x` for a machine-word scalar (the common case in divided-set and
    /// coefficient-box scans).
    pub fn scalar_mul_i64(&self, k: i64, x: &Element) -> Element {
        match (&self.kind, x) {
            (GroupKind::FiniteDirectSum(orders), Element::Tuple(a)) => Element::Tuple(
                a.iter()
                    .zip(orders)
                    .map(|(&v, &n)| mul_mod_i64(k, v, n))
                    .collect(),
            ),
            (GroupKind::Integers, Element::Int(a)) => Element::Int(a * k),
            (GroupKind::RationalVector(_), Element::Vector(a)) => {
                let kq = BigRational::from_integer(BigInt::from(k));
                Element::Vector(a.iter().map(|q| q * &kq).collect())
            }
            (GroupKind::RestrictedDirectSum(formula), Element::Supported(a)) => Element::Supported(
                a.iter()
                    .filter_map(|&(i, v)| {
                        let n = formula.order_at(i);
                        let w = mul_mod_i64(k, v, n);
                        (w != 0).then_some((i, w))
                    })
                    .collect(),
            ),
            _ => panic!("scalar_mul: mismatched element representation"),
        }
    }

    pub fn scalar_mul(&self, k: &BigInt, x: &Element) -> Element {
        match (&self.kind, x) {
            (GroupKind::Integers, Element::Int(a)) => Element::Int(a * k),
            (GroupKind::RationalVector(_), Element::Vector(a)) => {
                let kq = BigRational::from_integer(k.clone());
                Element::Vector(a.iter().map(|q| q * &kq).collect())
            }
            _ => {
                // Torsion carriers: reduce the scalar modulo the element order.
                let order = match self.element_order_checked(x) {
                    Order::Finite(n) => n,
                    Order::Infinite => unreachable!("torsion carrier with infinite order"),
                };
                let k_red = k.mod_floor(&BigInt::from(order));
                let k_small = i64::try_from(&k_red).expect("reduced scalar fits i64");
                self.scalar_mul_i64(k_small, x)
            }
        }
    }

    fn element_order_checked(&self, x: &Element) -> Order {
        match (&self.kind, x) {
            (GroupKind::FiniteDirectSum(orders), Element::Tuple(a)) => {
                let mut ord = 1u64;
                for (&v, &n) in a.iter().zip(orders) {
                    let comp = if v == 0 { 1 } else { n / n.gcd(&v) };
                    ord = lcm_u64(ord, comp);
                }
                Order::Finite(ord)
            }
            (GroupKind::Integers, Element::Int(a)) => {
                if a.is_zero() {
                    Order::Finite(1)
                } else {
                    Order::Infinite
                }
            }
            (GroupKind::RationalVector(_), Element::Vector(a)) => {
                if a.iter().all(|q| q.is_zero()) {
                    Order::Finite(1)
                } else {
                    Order::Infinite
                }
            }
            (GroupKind::RestrictedDirectSum(formula), Element::Supported(a)) => {
                let mut ord = 1u64;
                for &(i, v) in a {
                    let n = formula.order_at(i);
                    ord = lcm_u64(ord, n / n.gcd(&v));
                }
                Order::Finite(ord)
            }
            _ => panic!("element_order: mismatched element representation"),
        }
    }

    /// Least `n >= 1` with `n x = 0`, or `Infinite`.
    pub fn element_order(&self, x: &Element) -> Result<Order> {
        self.validate(x)?;
        Ok(self.element_order_checked(x))
    }

    /// Least `n` with `nG = 0` for finite direct sums; `Unbounded` otherwise.
    pub fn exponent(&self) -> Exponent {
        match &self.kind {
            GroupKind::FiniteDirectSum(orders) => {
                Exponent::Finite(orders.iter().copied().fold(1, lcm_u64))
            }
            _ => Exponent::Unbounded,
        }
    }

    /// All elements of a finite carrier, in canonical order.
    pub fn enumerate(&self) -> Result<Vec<Element>> {
        match &self.kind {
            GroupKind::FiniteDirectSum(orders) => {
                let mut out = Vec::new();
                let mut current = vec![0u64; orders.len()];
                loop {
                    out.push(Element::Tuple(current.clone()));
                    let mut i = orders.len();
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        current[i] += 1;
                        if current[i] < orders[i] {
                            break;
                        }
                        current[i] = 0;
                    }
                }
            }
            _ => Err(Error::Unsupported(
                "full enumeration requires a finite group".into(),
            )),
        }
    }

    /// Cyclic subgroup generated by `x` (finite order required).
    pub fn cyclic_subgroup(&self, x: &Element) -> Result<Vec<Element>> {
        match self.element_order(x)? {
            Order::Infinite => Err(Error::Unsupported(
                "cyclic subgroup of an infinite-order element".into(),
            )),
            Order::Finite(n) => {
                let mut out = Vec::with_capacity(n as usize);
                let mut acc = self.zero();
                for _ in 0..n {
                    out.push(acc.clone());
                    acc = self.add(&acc, x);
                }
                Ok(out)
            }
        }
    }

    /// Canonical total order used for deterministic witness reports:
    /// integers by (|x|, sign) with positive first, rationals coordinatewise
    /// the same way, tuples and supports lexicographically.
    pub fn cmp_elements(&self, a: &Element, b: &Element) -> Ordering {
        cmp_canonical(a, b)
    }

    /// Standard generator `e_index` of a direct-sum carrier.
    pub fn generator(&self, index: usize) -> Result<Element> {
        match &self.kind {
            GroupKind::FiniteDirectSum(orders) => {
                if index >= orders.len() {
                    return Err(Error::MalformedElement(format!(
                        "generator index {index} out of range"
                    )));
                }
                let mut c = vec![0u64; orders.len()];
                c[index] = 1;
                Ok(Element::Tuple(c))
            }
            GroupKind::RestrictedDirectSum(_) => Ok(Element::Supported(vec![(index, 1)])),
            _ => Err(Error::Unsupported(
                "generator requires a direct-sum carrier".into(),
            )),
        }
    }
}

fn mul_mod_i64(k: i64, v: u64, n: u64) -> u64 {
    let k_red = k.rem_euclid(n as i64) as u64;
    (k_red as u128 * v as u128 % n as u128) as u64
}

fn cmp_abs_sign_int(a: &BigInt, b: &BigInt) -> Ordering {
    let by_abs = a.abs().cmp(&b.abs());
    if by_abs != Ordering::Equal {
        return by_abs;
    }
    // Equal magnitude: non-negative first.
    match (a.sign(), b.sign()) {
        (Sign::Minus, Sign::Minus) => Ordering::Equal,
        (Sign::Minus, _) => Ordering::Greater,
        (_, Sign::Minus) => Ordering::Less,
        _ => Ordering::Equal,
    }
}

fn cmp_abs_sign_ratio(a: &BigRational, b: &BigRational) -> Ordering {
    let by_abs = a.abs().cmp(&b.abs());
    if by_abs != Ordering::Equal {
        return by_abs;
    }
    match (a.is_negative(), b.is_negative()) {
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        _ => Ordering::Equal,
    }
}

/// Canonical order on elements of one group (cross-kind comparison is only
/// needed to make the order total; it never arises in practice).
pub fn cmp_canonical(a: &Element, b: &Element) -> Ordering {
    match (a, b) {
        (Element::Tuple(x), Element::Tuple(y)) => x.cmp(y),
        (Element::Int(x), Element::Int(y)) => cmp_abs_sign_int(x, y),
        (Element::Vector(x), Element::Vector(y)) => {
            for (p, q) in x.iter().zip(y) {
                let c = cmp_abs_sign_ratio(p, q);
                if c != Ordering::Equal {
                    return c;
                }
            }
            x.len().cmp(&y.len())
        }
        (Element::Supported(x), Element::Supported(y)) => x.cmp(y),
        _ => discriminant_rank(a).cmp(&discriminant_rank(b)),
    }
}

fn discriminant_rank(e: &Element) -> u8 {
    match e {
        Element::Tuple(_) => 0,
        Element::Int(_) => 1,
        Element::Vector(_) => 2,
        Element::Supported(_) => 3,
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_canonical(self, other)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Tuple(c) => {
                write!(f, "(")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
            Element::Int(n) => write!(f, "{n}"),
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, q) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{q}")?;
                }
                write!(f, ")")
            }
            Element::Supported(s) => {
                write!(f, "{{")?;
                for (i, (idx, v)) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{idx}:{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl Element {
    pub fn int(n: i64) -> Element {
        Element::Int(BigInt::from(n))
    }

    pub fn tuple(c: Vec<u64>) -> Element {
        Element::Tuple(c)
    }

    pub fn rationals(coords: Vec<BigRational>) -> Element {
        Element::Vector(coords)
    }

    pub fn vector_i64(coords: Vec<(i64, i64)>) -> Element {
        Element::Vector(
            coords
                .into_iter()
                .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }
}

/// Parses "a/b" or "a" into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Descriptor(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Descriptor(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Descriptor(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Renders an exact rational as "a" or "a/b" (lowest terms, positive denominator).
pub fn ratio_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
