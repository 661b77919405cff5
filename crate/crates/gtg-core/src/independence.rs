//! Near and almost independence of group element sequences.
//!
//! A prefix `(x_0, ..., x_n)` is nearly independent at depth `d` when no
//! nonzero coefficient vector from the box `|a_j| <= 2^(j+2)` (support in
//! `[0, d]`) combines to zero. `eps_n` is the exact minimum seminorm over
//! all nonzero box combinations of `x_0..x_n`, computed by full enumeration
//! of the defining box — no pruning shortcuts. Almost independence is the
//! growth condition `2^(n+3) v(x_{n+1}) < eps_n <= v(x_n)`, checked with
//! exact rational comparisons.

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::coeff::{pow2, CoeffVector};
use crate::error::{Error, Result};
use crate::group::{Element, Exponent, GroupInstance, GroupKind};
use crate::metric::{MetricGroup, SeminormKind};
use crate::window::{Verdict, Window, Witness};

/// A finite prefix of a sequence in a metric group, optionally carrying
/// previously computed certificates. Stored values are serialization
/// artifacts; every consumer re-derives them with the exhaustive oracle.
#[derive(Debug, Clone)]
pub struct MetricSequence {
    metric: MetricGroup,
    prefix: Vec<Element>,
    epsilon: Vec<BigRational>,
    checks: Vec<GrowthCheck>,
}

/// One checked growth inequality: `lhs = 2^(n+3) v(x_{n+1})` against
/// `eps = eps_n` and `vxn = v(x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCheck {
    pub n: usize,
    pub lhs: BigRational,
    pub eps: BigRational,
    pub vxn: BigRational,
}

impl GrowthCheck {
    pub fn ok(&self) -> bool {
        self.lhs < self.eps && self.eps <= self.vxn
    }
}

impl MetricSequence {
    pub fn new(metric: MetricGroup, prefix: Vec<Element>) -> Result<Self> {
        for x in &prefix {
            metric.group().validate(x)?;
        }
        Ok(MetricSequence {
            metric,
            prefix,
            epsilon: Vec::new(),
            checks: Vec::new(),
        })
    }

    pub fn with_stored(
        metric: MetricGroup,
        prefix: Vec<Element>,
        epsilon: Vec<BigRational>,
        checks: Vec<GrowthCheck>,
    ) -> Result<Self> {
        let mut seq = Self::new(metric, prefix)?;
        seq.epsilon = epsilon;
        seq.checks = checks;
        Ok(seq)
    }

    pub fn metric(&self) -> &MetricGroup {
        &self.metric
    }

    pub fn group(&self) -> &GroupInstance {
        self.metric.group()
    }

    pub fn prefix(&self) -> &[Element] {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn stored_epsilon(&self) -> &[BigRational] {
        &self.epsilon
    }

    pub fn stored_checks(&self) -> &[GrowthCheck] {
        &self.checks
    }

    /// `v(x_n)`.
    pub fn value(&self, n: usize) -> BigRational {
        self.metric.value(&self.prefix[n])
    }

    pub fn phi(&self, k: &CoeffVector) -> Result<Element> {
        crate::coeff::phi(k, self.group(), &self.prefix)
    }

    /// Even-index subsequence `(x_0, x_2, x_4, ...)`, certificates dropped.
    pub fn even_subsequence(&self) -> MetricSequence {
        MetricSequence {
            metric: self.metric.clone(),
            prefix: self.prefix.iter().step_by(2).cloned().collect(),
            epsilon: Vec::new(),
            checks: Vec::new(),
        }
    }

    /// Recomputes every stored certificate with the exhaustive oracle and
    /// fails on any mismatch. Used when loading certificates from disk.
    pub fn reverify_stored(&self, budget: u64) -> Result<()> {
        for (n, stored) in self.epsilon.iter().enumerate() {
            let fresh = epsilon_n(self, n, budget)?;
            if &fresh != stored {
                return Err(Error::Inconsistency(format!(
                    "stored eps_{n} = {} but the oracle computes {}",
                    crate::group::ratio_string(stored),
                    crate::group::ratio_string(&fresh)
                )));
            }
        }
        for check in &self.checks {
            let n = check.n;
            if n + 1 >= self.prefix.len() {
                return Err(Error::Inconsistency(format!(
                    "stored growth check at n = {n} exceeds the prefix"
                )));
            }
            let eps = epsilon_n(self, n, budget)?;
            let lhs = pow2(n as i64 + 3) * self.value(n + 1);
            let vxn = self.value(n);
            if lhs != check.lhs || eps != check.eps || vxn != check.vxn {
                return Err(Error::Inconsistency(format!(
                    "stored growth check at n = {n} does not reproduce"
                )));
            }
        }
        Ok(())
    }
}

/// Coefficient bound `2^(j+2)` at index `j`.
fn box_bound(j: usize) -> i64 {
    1i64 << (j + 2)
}

/// Total number of box vectors for support `[0, depth]`.
fn box_size(depth: usize) -> u128 {
    (0..=depth).map(|j| 2 * box_bound(j) as u128 + 1).product()
}

/// Signed scan order `0, 1, -1, 2, -2, ..., b, -b`: witnesses come out
/// smallest-magnitude-first with the positive representative preferred,
/// matching the canonical element order.
fn signed_order(b: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=b).flat_map(|k| [k, -k]))
}

enum ScanControl {
    Continue,
    Stop,
}

/// Exhaustive scan over the coefficient box at the given depth, invoking the
/// callback with each coefficient vector and the exact group value of the
/// combination. Dispatches to a machine-word path on integer carriers when
/// every partial sum provably fits.
fn scan_box<F>(
    group: &GroupInstance,
    prefix: &[Element],
    depth: usize,
    budget: u64,
    f: &mut F,
) -> Result<()>
where
    F: FnMut(&[i64], &Element) -> ScanControl,
{
    assert!(depth < prefix.len(), "depth exceeds prefix");
    if box_size(depth) > budget as u128 {
        return Err(Error::BudgetExhausted { budget });
    }
    if let GroupKind::Integers = group.kind() {
        let mut reach = BigInt::zero();
        let mut xs = Vec::with_capacity(depth + 1);
        let mut fits = true;
        for (j, x) in prefix.iter().take(depth + 1).enumerate() {
            let n = match x {
                Element::Int(n) => n,
                _ => unreachable!(),
            };
            reach += n.abs() * BigInt::from(box_bound(j));
            match n.to_i128() {
                Some(v) => xs.push(v),
                None => fits = false,
            }
        }
        if fits && reach < BigInt::from(i128::MAX / 4) {
            let mut entries = vec![0i64; depth + 1];
            let mut stop = false;
            scan_int_rec(&xs, depth, 0, 0i128, &mut entries, &mut stop, f);
            return Ok(());
        }
    }
    let mut entries = vec![0i64; depth + 1];
    let mut stop = false;
    scan_generic_rec(
        group,
        prefix,
        depth,
        0,
        group.zero(),
        &mut entries,
        &mut stop,
        f,
    );
    Ok(())
}

fn scan_int_rec<F>(
    xs: &[i128],
    depth: usize,
    j: usize,
    acc: i128,
    entries: &mut Vec<i64>,
    stop: &mut bool,
    f: &mut F,
) where
    F: FnMut(&[i64], &Element) -> ScanControl,
{
    for a in signed_order(box_bound(j)) {
        if *stop {
            return;
        }
        entries[j] = a;
        let acc_here = acc + a as i128 * xs[j];
        if j == depth {
            let value = Element::Int(BigInt::from(acc_here));
            if let ScanControl::Stop = f(entries, &value) {
                *stop = true;
                return;
            }
        } else {
            scan_int_rec(xs, depth, j + 1, acc_here, entries, stop, f);
        }
    }
    entries[j] = 0;
}

#[allow(clippy::too_many_arguments)]
fn scan_generic_rec<F>(
    group: &GroupInstance,
    prefix: &[Element],
    depth: usize,
    j: usize,
    acc: Element,
    entries: &mut Vec<i64>,
    stop: &mut bool,
    f: &mut F,
) where
    F: FnMut(&[i64], &Element) -> ScanControl,
{
    for a in signed_order(box_bound(j)) {
        if *stop {
            return;
        }
        entries[j] = a;
        let acc_here = if a == 0 {
            acc.clone()
        } else {
            group.add(&acc, &group.scalar_mul_i64(a, &prefix[j]))
        };
        if j == depth {
            if let ScanControl::Stop = f(entries, &acc_here) {
                *stop = true;
                return;
            }
        } else {
            scan_generic_rec(group, prefix, depth, j + 1, acc_here, entries, stop, f);
        }
    }
    entries[j] = 0;
}

/// Searches the full coefficient box for a nonzero vector combining to the
/// group zero. Returns the first witness in canonical scan order.
pub fn find_zero_combination(
    seq: &MetricSequence,
    depth: usize,
    budget: u64,
) -> Result<Option<CoeffVector>> {
    let group = seq.group().clone();
    let mut witness = None;
    scan_box(
        &group,
        seq.prefix(),
        depth,
        budget,
        &mut |entries, value| {
            if entries.iter().all(|&a| a == 0) {
                return ScanControl::Continue;
            }
            if group.is_zero(value) {
                witness = Some(CoeffVector::from_i64(entries));
                ScanControl::Stop
            } else {
                ScanControl::Continue
            }
        },
    )?;
    Ok(witness)
}

/// Box-bounded independence check at the given depth. The verdict certifies
/// the implication only for coefficient vectors supported in `[0, depth]`.
pub fn is_nearly_independent(seq: &MetricSequence, depth: usize, budget: u64) -> Result<Verdict> {
    if depth >= seq.len() {
        return Err(Error::Precondition(format!(
            "depth {depth} needs a prefix of length > {depth}"
        )));
    }
    let window = Window::new(1, (depth as u64).max(1), budget);
    if box_size(depth) > budget as u128 {
        return Ok(Verdict::unknown(window));
    }
    Ok(match find_zero_combination(seq, depth, budget)? {
        Some(witness) => Verdict::fails_with(Witness::Coeff(witness), window, true),
        None => Verdict::holds(window, true),
    })
}

/// The exact minimum `v(sum a_j x_j)` over nonzero box vectors with support
/// `[0, n]`, by full enumeration of the defining box. A zero group value at
/// a nonzero vector is an inconsistency (near independence failed).
pub fn epsilon_n(seq: &MetricSequence, n: usize, budget: u64) -> Result<BigRational> {
    if n >= seq.len() {
        return Err(Error::Precondition(format!(
            "eps_{n} needs a prefix of length > {n}"
        )));
    }
    let metric = seq.metric().clone();
    let group = seq.group().clone();
    // On the dyadic integers minimizing v means maximizing the 2-adic
    // valuation: track the integer valuation instead of building a rational
    // per visit.
    if matches!(metric.seminorm_kind(), SeminormKind::Dyadic) {
        let mut best_val: Option<u64> = None;
        let mut zero_witness: Option<CoeffVector> = None;
        scan_box(&group, seq.prefix(), n, budget, &mut |entries, value| {
            if entries.iter().all(|&a| a == 0) {
                return ScanControl::Continue;
            }
            match value {
                Element::Int(v) => {
                    if v.is_zero() {
                        zero_witness = Some(CoeffVector::from_i64(entries));
                        return ScanControl::Stop;
                    }
                    let val = v.trailing_zeros().expect("nonzero");
                    if best_val.is_none_or(|b| val > b) {
                        best_val = Some(val);
                    }
                }
                _ => unreachable!(),
            }
            ScanControl::Continue
        })?;
        if let Some(k) = zero_witness {
            return Err(Error::Inconsistency(format!(
                "the box minimum hit a zero sum at nonzero coefficients {k}"
            )));
        }
        return Ok(pow2(-(best_val.expect("box is nonempty") as i64)));
    }
    let mut best: Option<BigRational> = None;
    let mut zero_witness: Option<CoeffVector> = None;
    scan_box(&group, seq.prefix(), n, budget, &mut |entries, value| {
        if entries.iter().all(|&a| a == 0) {
            return ScanControl::Continue;
        }
        if group.is_zero(value) {
            zero_witness = Some(CoeffVector::from_i64(entries));
            return ScanControl::Stop;
        }
        let v = metric.value(value);
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
        }
        ScanControl::Continue
    })?;
    if let Some(k) = zero_witness {
        return Err(Error::Inconsistency(format!(
            "the box minimum hit a zero sum at nonzero coefficients {k}"
        )));
    }
    Ok(best.expect("box is nonempty"))
}

/// Checks the growth condition for every `n < n_max` with exact rational
/// comparisons, recomputing each `eps_n` with the exhaustive oracle.
pub fn is_almost_independent(seq: &MetricSequence, n_max: usize, budget: u64) -> Result<Verdict> {
    if n_max >= seq.len() {
        return Err(Error::Precondition(format!(
            "n_max = {n_max} needs a prefix of length > {n_max}"
        )));
    }
    let window = Window::new(1, (n_max as u64).max(1), budget);
    for n in 0..n_max {
        let eps = epsilon_n(seq, n, budget)?;
        let lhs = pow2(n as i64 + 3) * seq.value(n + 1);
        let vxn = seq.value(n);
        let check = GrowthCheck { n, lhs, eps, vxn };
        if !check.ok() {
            return Ok(Verdict::fails_with(
                Witness::Growth {
                    n,
                    lhs: check.lhs,
                    eps: check.eps,
                    vxn: check.vxn,
                },
                window,
                true,
            ));
        }
    }
    Ok(Verdict::holds(window, true))
}

/// Computes and stores `eps_0..eps_{n_max-1}` and the growth records,
/// returning the certified sequence.
pub fn certify(seq: &MetricSequence, n_max: usize, budget: u64) -> Result<MetricSequence> {
    let mut epsilon = Vec::with_capacity(n_max);
    let mut checks = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let eps = epsilon_n(seq, n, budget)?;
        let lhs = pow2(n as i64 + 3) * seq.value(n + 1);
        let vxn = seq.value(n);
        checks.push(GrowthCheck {
            n,
            lhs,
            eps: eps.clone(),
            vxn,
        });
        epsilon.push(eps);
    }
    MetricSequence::with_stored(seq.metric().clone(), seq.prefix().to_vec(), epsilon, checks)
}

/// Outcome of the greedy constructor.
#[derive(Debug)]
pub enum BuildOutcome {
    Built(MetricSequence),
    NoSequenceFound {
        stage: usize,
        reason: String,
        /// `true` when the failure is a certificate (bounded exponent, or a
        /// finite group fully scanned), `false` on budget exhaustion.
        certified: bool,
    },
}

/// Greedy constructor: `x_0` is the first stream element of order greater
/// than 4; `x_{n+1}` is the first stream element with
/// `v(x_{n+1}) < eps_n / 2^(n+3)` and order greater than `2^(n+3)`.
/// The result carries its growth certificates.
pub fn build_almost_independent(
    metric: &MetricGroup,
    n_max: usize,
    budget: u64,
) -> Result<BuildOutcome> {
    if n_max > 32 {
        return Err(Error::Precondition(
            "construction stages beyond 32 are outside any enumeration budget".into(),
        ));
    }
    let group = metric.group().clone();
    let mut prefix: Vec<Element> = Vec::with_capacity(n_max + 1);
    let mut epsilon: Vec<BigRational> = Vec::new();
    let mut checks: Vec<GrowthCheck> = Vec::new();

    for stage in 0..=n_max {
        let order_floor: u64 = if stage == 0 { 4 } else { 1 << (stage + 2) };
        // A bounded exponent at or below the floor rules the stage out for
        // every element at once.
        if let Exponent::Finite(e) = group.exponent() {
            if e <= order_floor {
                return Ok(BuildOutcome::NoSequenceFound {
                    stage,
                    reason: format!(
                        "no element of order > {order_floor}: the group exponent is {e}"
                    ),
                    certified: true,
                });
            }
        }
        let threshold: Option<BigRational> = if stage == 0 {
            None
        } else {
            let eps = epsilon_n(
                &MetricSequence::new(metric.clone(), prefix.clone())?,
                stage - 1,
                budget,
            )?;
            let vxn = metric.value(&prefix[stage - 1]);
            checks.push(GrowthCheck {
                n: stage - 1,
                // the lhs is filled in below, once the element is chosen
                lhs: BigRational::zero(),
                eps: eps.clone(),
                vxn,
            });
            epsilon.push(eps.clone());
            Some(eps * pow2(-(stage as i64 + 2)))
        };

        let mut found: Option<Element> = None;
        let mut scanned: u64 = 0;
        for x in metric.candidates() {
            scanned += 1;
            if scanned > budget {
                return Ok(BuildOutcome::NoSequenceFound {
                    stage,
                    reason: format!("candidate stream budget of {budget} exhausted"),
                    certified: false,
                });
            }
            let order_ok = group.element_order(&x)?.is_greater_than(order_floor);
            let metric_ok = match &threshold {
                None => true,
                Some(t) => &metric.value(&x) < t,
            };
            if order_ok && metric_ok {
                found = Some(x);
                break;
            }
        }
        match found {
            Some(x) => {
                if stage > 0 {
                    let check = checks.last_mut().expect("pushed above");
                    check.lhs = pow2(stage as i64 + 2) * metric.value(&x);
                }
                prefix.push(x);
            }
            None => {
                return Ok(BuildOutcome::NoSequenceFound {
                    stage,
                    reason: format!(
                        "candidate stream exhausted: no element of order > {order_floor} \
                         within the metric threshold"
                    ),
                    certified: true,
                });
            }
        }
    }

    let seq = MetricSequence::with_stored(metric.clone(), prefix, epsilon, checks)?;
    // The growth inequalities are re-checked on the finished prefix; the
    // positive eps values double as depth-wise independence certificates.
    let verdict = is_almost_independent(&seq, n_max, budget)?;
    if !verdict.is_holds() {
        return Err(Error::Inconsistency(format!(
            "constructed sequence failed its own growth verification: {verdict}"
        )));
    }
    Ok(BuildOutcome::Built(seq))
}

/// Probes local boundedness: a finite direct sum is certified locally
/// bounded by its exponent; otherwise the candidate stream is searched for
/// a witness family `v(x_t) < 2^-t`, `o(x_t) > t`, whose existence for
/// every `t` denies local boundedness.
pub fn local_boundedness_probe(metric: &MetricGroup, w: &Window) -> Result<Verdict> {
    let group = metric.group().clone();
    if let Exponent::Finite(e) = group.exponent() {
        return Ok(Verdict::holds_with(
            Witness::ExponentCertificate(e),
            *w,
            true,
        ));
    }
    let t_max = w.depth_n.min(16);
    let mut witnesses = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        let bound = pow2(-(t as i64));
        let mut found = None;
        let mut scanned: u64 = 0;
        for x in metric.candidates() {
            scanned += 1;
            if scanned > w.budget {
                break;
            }
            if metric.value(&x) < bound && group.element_order(&x)?.is_greater_than(t) {
                found = Some(x);
                break;
            }
        }
        match found {
            Some(x) => witnesses.push(x),
            None => return Ok(Verdict::unknown(*w)),
        }
    }
    Ok(Verdict::fails_with(Witness::Elements(witnesses), *w, false))
}
