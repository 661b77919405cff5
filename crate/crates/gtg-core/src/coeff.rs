//! Finitely supported integer coefficient vectors and the dyadic weight
//! calculus on them: the weight classes `K_m` (weight at most `2^-m`), the
//! box `P` (`|k_j| <= 2^(j+2)`), the tail subgroups `W_n`, exhaustive
//! enumeration of `K_m` at bounded support, and evaluation of coefficient
//! vectors against a group element prefix.
//!
//! All weight arithmetic is exact; comparisons at the boundary are
//! bit-exact by construction.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Element, GroupInstance};

/// A finitely supported integer sequence `(k_0, ..., k_d)` with trailing
/// zeros trimmed. Equality is entrywise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffVector {
    entries: Vec<BigInt>,
}

impl CoeffVector {
    pub fn new(mut entries: Vec<BigInt>) -> Self {
        while entries.last().is_some_and(|k| k.is_zero()) {
            entries.pop();
        }
        CoeffVector { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&k| BigInt::from(k)).collect())
    }

    pub fn zero() -> Self {
        CoeffVector {
            entries: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index with a nonzero entry; `None` for the zero vector.
    pub fn support_depth(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn entry(&self, j: usize) -> BigInt {
        self.entries.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &CoeffVector) -> CoeffVector {
        let len = self.entries.len().max(other.entries.len());
        let mut out = Vec::with_capacity(len);
        for j in 0..len {
            out.push(self.entry(j) + other.entry(j));
        }
        CoeffVector::new(out)
    }

    /// Spreads entries onto even indices: `(k_0, k_1, ...)` becomes
    /// `(k_0, 0, k_1, 0, ...)`. Used to embed coefficient vectors over a
    /// subsequence `(x_{2n})` into vectors over the full sequence.
    pub fn dilate_even(&self) -> CoeffVector {
        let mut out = Vec::with_capacity(self.entries.len() * 2);
        for k in &self.entries {
            out.push(k.clone());
            out.push(BigInt::zero());
        }
        CoeffVector::new(out)
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

/// Exact value of `sum |k_j| / 2^j`: an integer numerator over a
/// power-of-two denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DyadicWeight(BigRational);

impl DyadicWeight {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for DyadicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::group::ratio_string(&self.0))
    }
}

/// `2^e` as an exact rational, for any sign of `e`.
pub fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Exact `sum |k_j| / 2^j` over the finite support.
pub fn weight(k: &CoeffVector) -> DyadicWeight {
    let mut acc = BigRational::zero();
    for (j, kj) in k.entries().iter().enumerate() {
        if !kj.is_zero() {
            acc += BigRational::from_integer(kj.abs()) * pow2(-(j as i64));
        }
    }
    DyadicWeight(acc)
}

/// `weight(k) <= 2^-m`, exact comparison. `m` may be negative.
pub fn in_km(k: &CoeffVector, m: i32) -> bool {
    weight(k).0 <= pow2(-(m as i64))
}

/// `|k_j| <= 2^(j+2)` for every entry.
pub fn in_p(k: &CoeffVector) -> bool {
    k.entries()
        .iter()
        .enumerate()
        .all(|(j, kj)| kj.abs() <= (BigInt::one() << (j + 2)))
}

/// Entries `0..=n` all vanish.
pub fn in_wn(k: &CoeffVector, n: usize) -> bool {
    k.entries().iter().take(n + 1).all(|kj| kj.is_zero())
}

/// Exhaustively visits every vector of `K_m` with support contained in
/// `[lo, hi]`, in lexicographic order by `(support depth, entries)`.
/// The callback receives the raw entries `(k_0, ..., k_hi)`; entries below
/// `lo` are always zero. Each visit costs one unit of `budget`.
///
/// Entry magnitudes are bounded by `2^(hi - m)`, so `i64` entries are exact
/// for every desk-scale call.
pub fn for_each_in_km<F: FnMut(&[i64])>(
    m: i32,
    lo: usize,
    hi: usize,
    budget: u64,
    mut f: F,
) -> Result<u64> {
    assert!(lo <= hi && hi <= 58, "support window out of range");
    assert!(
        (hi as i64 - m as i64) < 62,
        "weight bound too large for exact i64 scan"
    );
    // Scaled arithmetic: weights are multiplied by 2^hi so every quantity is
    // an integer. The class bound 2^-m scales to 2^(hi-m), or to 0 when
    // m > hi (then only the zero vector qualifies).
    let scaled_bound: i64 = if m as i64 <= hi as i64 {
        1i64 << (hi as i64 - m as i64)
    } else {
        0
    };
    let mut entries = vec![0i64; hi + 1];
    let mut visited: u64 = 0;

    // Zero vector first (support depth -1).
    visited += 1;
    if visited > budget {
        return Err(Error::BudgetExhausted { budget });
    }
    f(&entries);

    // Then exact support depth d = lo..=hi, entries in ascending
    // lexicographic order.
    for d in lo..=hi {
        descend(
            hi,
            d,
            lo,
            scaled_bound,
            &mut entries,
            budget,
            &mut visited,
            &mut f,
        )?;
        for e in entries.iter_mut() {
            *e = 0;
        }
    }
    Ok(visited)
}

#[allow(clippy::too_many_arguments)]
fn descend<F: FnMut(&[i64])>(
    hi: usize,
    d: usize,
    j: usize,
    remaining_scaled: i64,
    entries: &mut Vec<i64>,
    budget: u64,
    visited: &mut u64,
    f: &mut F,
) -> Result<()> {
    let unit = 1i64 << (hi - j); // scaled weight of one unit at index j
    let max_abs = remaining_scaled / unit;
    if j == d {
        for k in -max_abs..=max_abs {
            if k == 0 {
                continue;
            }
            entries[j] = k;
            *visited += 1;
            if *visited > budget {
                entries[j] = 0;
                return Err(Error::BudgetExhausted { budget });
            }
            f(entries);
        }
        entries[j] = 0;
        Ok(())
    } else {
        for k in -max_abs..=max_abs {
            entries[j] = k;
            let used = k.abs() * unit;
            descend(
                hi,
                d,
                j + 1,
                remaining_scaled - used,
                entries,
                budget,
                visited,
                f,
            )?;
        }
        entries[j] = 0;
        Ok(())
    }
}

/// Every vector of `K_m` with support in `[0, depth]`, in canonical order.
pub fn enumerate_km(m: i32, depth: usize, budget: u64) -> Result<Vec<CoeffVector>> {
    let mut out = Vec::new();
    for_each_in_km(m, 0, depth, budget, |entries| {
        out.push(CoeffVector::from_i64(entries));
    })?;
    Ok(out)
}

/// Every vector of `K_m ∩ W_n` with support in `[0, depth]` (entries
/// `0..=n` forced to zero).
pub fn enumerate_km_in_wn(m: i32, n: usize, depth: usize, budget: u64) -> Result<Vec<CoeffVector>> {
    if n + 1 > depth {
        // Only the zero vector has support above `depth` entirely.
        return Ok(vec![CoeffVector::zero()]);
    }
    let mut out = Vec::new();
    for_each_in_km(m, n + 1, depth, budget, |entries| {
        out.push(CoeffVector::from_i64(entries));
    })?;
    Ok(out)
}

/// The exact finite sum `sum_j k_j x_j` in the group.
pub fn phi(k: &CoeffVector, group: &GroupInstance, prefix: &[Element]) -> Result<Element> {
    if let Some(d) = k.support_depth() {
        if d >= prefix.len() {
            return Err(Error::SupportExceedsPrefix {
                depth: d,
                available: prefix.len(),
            });
        }
    }
    let mut acc = group.zero();
    for (j, kj) in k.entries().iter().enumerate() {
        if !kj.is_zero() {
            acc = group.add(&acc, &group.scalar_mul(kj, &prefix[j]));
        }
    }
    Ok(acc)
}

/// Outcome of the exhaustive `K_m + K_m ⊆ K_{m-1}` verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KmSumOutcome {
    /// Verified for every pair with support in `[0, depth]`.
    Holds { pairs_checked: u64 },
    /// A pair whose sum leaves the target class (cannot arise for the true
    /// classes; used by negative controls with a weaker target).
    Escape {
        left: CoeffVector,
        right: CoeffVector,
    },
}

/// Exhaustively verifies `K_m + K_m ⊆ K_{m-1}` at bounded support. Since
/// weight addition is exact, this is a strict verification of every pair,
/// not a sample.
pub fn km_sum_check(m: i32, depth: usize, budget: u64) -> Result<KmSumOutcome> {
    km_sum_check_against(m, m - 1, depth, budget)
}

/// Same scan with an arbitrary target class `K_target` (negative controls).
pub fn km_sum_check_against(
    m: i32,
    target: i32,
    depth: usize,
    budget: u64,
) -> Result<KmSumOutcome> {
    let members = enumerate_km(m, depth, budget)?;
    let n = members.len() as u64;
    let pair_cost = n.saturating_mul(n);
    if pair_cost > budget {
        return Err(Error::BudgetExhausted { budget });
    }
    let mut checked = 0u64;
    for k in &members {
        for l in &members {
            checked += 1;
            if !in_km(&k.add(l), target) {
                return Ok(KmSumOutcome::Escape {
                    left: k.clone(),
                    right: l.clone(),
                });
            }
        }
    }
    Ok(KmSumOutcome::Holds {
        pairs_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::ToPrimitive;

    fn cv(entries: &[i64]) -> CoeffVector {
        CoeffVector::from_i64(entries)
    }

    #[test]
    fn weight_examples() {
        assert!(weight(&CoeffVector::zero()).is_zero());
        assert_eq!(weight(&cv(&[1])).value(), &BigRational::one());
        // k_0 = 1, k_2 = 2: 1 + 2/4 = 3/2
        assert_eq!(
            weight(&cv(&[1, 0, 2])).value(),
            &BigRational::new(BigInt::from(3), BigInt::from(2))
        );
    }

    #[test]
    fn text_form_is_bracketed_decimals() {
        assert_eq!(cv(&[3, -1]).to_string(), "[3,-1]");
        assert_eq!(CoeffVector::zero().to_string(), "[]");
        assert_eq!(cv(&[0, 0, 7]).to_string(), "[0,0,7]");
    }

    #[test]
    fn km_membership_examples() {
        assert!(in_km(&CoeffVector::zero(), 5));
        assert!(in_km(&CoeffVector::zero(), -3));
        // e_j has weight 2^-j: in K_m iff j >= m.
        for j in 0..6usize {
            let mut e = vec![0i64; j + 1];
            e[j] = 1;
            let v = cv(&e);
            for m in -2..=6i32 {
                assert_eq!(in_km(&v, m), j as i32 >= m, "e_{j} vs K_{m}");
            }
        }
        assert!(!in_km(&cv(&[1]), 1));
    }

    #[test]
    fn p_box_examples() {
        assert!(in_p(&cv(&[4])));
        assert!(!in_p(&cv(&[5])));
        assert!(in_p(&CoeffVector::zero()));
        assert!(in_p(&cv(&[0, 0, 0, 32])));
        assert!(!in_p(&cv(&[0, 0, 0, 33])));
    }

    #[test]
    fn wn_examples() {
        assert!(in_wn(&CoeffVector::zero(), 7));
        assert!(in_wn(&cv(&[0, 0, 1]), 1));
        assert!(!in_wn(&cv(&[0, 1]), 1));
        assert!(in_wn(&cv(&[0, 0, 0, 0, 0, 7]), 4));
    }

    #[test]
    fn enumerate_km_smallest_cases() {
        // m=0, depth=0: zero and k_0 = ±1.
        let v = enumerate_km(0, 0, 1000).unwrap();
        assert_eq!(v, vec![CoeffVector::zero(), cv(&[-1]), cv(&[1])]);
        // m=1, depth=0: |k_0| <= 1/2 forces zero.
        let v = enumerate_km(1, 0, 1000).unwrap();
        assert_eq!(v, vec![CoeffVector::zero()]);
    }

    /// Independent oracle: brute force over the box |k_j| <= 2^(j - m)
    /// (implied by the weight bound), filtering by the exact weight.
    fn brute_force_km_count(m: i32, depth: usize) -> u64 {
        fn rec(m: i32, depth: usize, j: usize, acc: BigRational, bound: &BigRational) -> u64 {
            if j > depth {
                return 1;
            }
            let mut count = 0;
            let max = 1i64 << ((j as i64 - m as i64).max(0));
            for k in -max..=max {
                let w = acc.clone()
                    + BigRational::from_integer(BigInt::from(k.abs())) * pow2(-(j as i64));
                if &w <= bound {
                    count += rec(m, depth, j + 1, w, bound);
                }
            }
            count
        }
        rec(m, depth, 0, BigRational::zero(), &pow2(-(m as i64)))
    }

    #[test]
    fn enumeration_count_matches_brute_force() {
        for (m, depth) in [(0, 2), (0, 3), (1, 3), (-1, 2), (2, 4)] {
            let enumerated = enumerate_km(m, depth, 10_000_000).unwrap();
            let expected = brute_force_km_count(m, depth);
            assert_eq!(enumerated.len() as u64, expected, "K_{m} at depth {depth}");
            // No duplicates and all genuinely in K_m.
            let mut sorted = enumerated.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), enumerated.len());
            assert!(enumerated.iter().all(|k| in_km(k, m)));
        }
    }

    #[test]
    fn enumeration_is_nested_by_class() {
        let outer = enumerate_km(0, 3, 1_000_000).unwrap();
        let inner = enumerate_km(1, 3, 1_000_000).unwrap();
        let outer_set: std::collections::BTreeSet<_> = outer.into_iter().collect();
        assert!(inner.iter().all(|k| outer_set.contains(k)));
    }

    #[test]
    fn budget_exhaustion_signals() {
        let err = enumerate_km(-2, 4, 100).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn phi_examples() {
        let g = GroupInstance::integers();
        let prefix = vec![Element::int(1), Element::int(3)];
        assert_eq!(
            phi(&CoeffVector::zero(), &g, &prefix).unwrap(),
            Element::int(0)
        );
        assert_eq!(phi(&cv(&[0, 1]), &g, &prefix).unwrap(), Element::int(3));
        // 3*1 - 1*3 = 0: a nontrivial kernel element of the evaluation map.
        assert_eq!(phi(&cv(&[3, -1]), &g, &prefix).unwrap(), Element::int(0));
        assert!(phi(&cv(&[0, 0, 1]), &g, &prefix).is_err());
    }

    #[test]
    fn phi_is_additive() {
        let g = GroupInstance::finite_direct_sum(vec![8, 12]).unwrap();
        let prefix = vec![Element::tuple(vec![1, 2]), Element::tuple(vec![3, 1])];
        let ks = enumerate_km(0, 1, 100_000).unwrap();
        for k in &ks {
            for l in &ks {
                let lhs = phi(&k.add(l), &g, &prefix).unwrap();
                let rhs = g.add(&phi(k, &g, &prefix).unwrap(), &phi(l, &g, &prefix).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn km_sum_law_small_depths() {
        for m in [0, 1] {
            match km_sum_check(m, 4, 50_000_000).unwrap() {
                KmSumOutcome::Holds { pairs_checked } => assert!(pairs_checked > 0),
                KmSumOutcome::Escape { left, right } => {
                    panic!("false escape: {left} + {right}")
                }
            }
        }
    }

    #[test]
    fn km_sum_negative_control() {
        // K_0 + K_0 is not inside K_0: e_0 + e_0 has weight 2.
        match km_sum_check_against(0, 0, 2, 10_000_000).unwrap() {
            KmSumOutcome::Escape { left, right } => {
                let s = left.add(&right);
                assert!(!in_km(&s, 0));
            }
            KmSumOutcome::Holds { .. } => panic!("expected an escape"),
        }
    }

    #[test]
    fn weight_subadditive_exhaustive_small() {
        let ks = enumerate_km(0, 2, 100_000).unwrap();
        for k in &ks {
            for l in &ks {
                let sum_w = weight(&k.add(l));
                let bound = weight(k).value() + weight(l).value();
                assert!(sum_w.value() <= &bound);
                // Strict drop happens exactly when some index carries
                // entries of opposite sign.
                let len = k.entries().len().min(l.entries().len());
                let cancels = k.entries()[..len]
                    .iter()
                    .zip(&l.entries()[..len])
                    .any(|(a, b)| !a.is_zero() && !b.is_zero() && a.sign() != b.sign());
                assert_eq!(sum_w.value() < &bound, cancels, "pair {k} {l}");
            }
        }
    }

    #[test]
    fn dyadic_weight_has_power_of_two_denominator() {
        for k in enumerate_km(-1, 3, 100_000).unwrap() {
            let w = weight(&k);
            let den = w.value().denom();
            assert!(den.to_u64().is_some_and(|d| d.is_power_of_two()));
        }
    }
}
