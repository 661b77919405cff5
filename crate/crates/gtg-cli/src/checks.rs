//! The bundled verification battery. Every check is hermetic: descriptors
//! come from the versioned fixture directory compiled into the binary, and
//! randomized corpora are seeded. Each check carries the anchor string of
//! the claim it exercises.

use std::time::Instant;

use serde_json::{json, Value};

use gtg_core::coeff::{self, pow2, CoeffVector, KmSumOutcome};
use gtg_core::descriptor::{element_to_json, GroupDescriptor, SequenceCertificate, SetDescriptor};
use gtg_core::group::{Element, GroupInstance};
use gtg_core::hom::Homomorphism;
use gtg_core::independence::{self, build_almost_independent, BuildOutcome, MetricSequence};
use gtg_core::symset::{self, GammaOutcome, SymSet};
use gtg_core::topology::{self, GeneratedSet};
use gtg_core::window::Window;
use gtg_core::{Error, Result};

use crate::corpus;
use crate::report::CheckRecord;

pub const FIXTURES: &[(&str, &str)] = &[
    (
        "integers_2adic.json",
        include_str!("../fixtures/v1/integers_2adic.json"),
    ),
    (
        "rational_plane.json",
        include_str!("../fixtures/v1/rational_plane.json"),
    ),
    ("z8.json", include_str!("../fixtures/v1/z8.json")),
    ("z6_z4.json", include_str!("../fixtures/v1/z6_z4.json")),
    (
        "z2_power10.json",
        include_str!("../fixtures/v1/z2_power10.json"),
    ),
    (
        "restricted_pow2.json",
        include_str!("../fixtures/v1/restricted_pow2.json"),
    ),
    ("u2.json", include_str!("../fixtures/v1/u2.json")),
    ("u3.json", include_str!("../fixtures/v1/u3.json")),
    ("u5.json", include_str!("../fixtures/v1/u5.json")),
    ("cross.json", include_str!("../fixtures/v1/cross.json")),
    (
        "z8_twosix.json",
        include_str!("../fixtures/v1/z8_twosix.json"),
    ),
    ("z8_sub4.json", include_str!("../fixtures/v1/z8_sub4.json")),
];

fn fixture(name: &str) -> &'static str {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .unwrap_or_else(|| panic!("missing fixture {name}"))
}

fn fixture_group(name: &str) -> Result<GroupDescriptor> {
    Ok(serde_json::from_str(fixture(name))?)
}

fn fixture_set(group: &str, set: &str) -> Result<SymSet> {
    let g: GroupDescriptor = serde_json::from_str(fixture(group))?;
    let s: SetDescriptor = serde_json::from_str(fixture(set))?;
    s.to_symset(&g)
}

pub struct CheckOutcome {
    pub ok: bool,
    pub verdict: String,
    pub detail: Option<String>,
    pub witness: Option<Value>,
}

impl CheckOutcome {
    fn pass(verdict: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            ok: true,
            verdict: verdict.into(),
            detail: Some(detail.into()),
            witness: None,
        }
    }

    fn fail(verdict: impl Into<String>, witness: Option<Value>) -> Self {
        CheckOutcome {
            ok: false,
            verdict: verdict.into(),
            detail: None,
            witness,
        }
    }
}

pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    pub run: fn(&Window) -> Result<CheckOutcome>,
}

/// Runs the battery (optionally filtered by a substring of the check name
/// or anchor) and renders the records.
pub fn run_battery(only: Option<&str>, w: &Window) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    for check in battery() {
        if let Some(filter) = only {
            if !check.name.contains(filter) && !check.anchor.contains(filter) {
                continue;
            }
        }
        let started = Instant::now();
        let outcome = (check.run)(w);
        let runtime_ms = started.elapsed().as_millis();
        let record = match outcome {
            Ok(out) => CheckRecord {
                name: check.name.to_string(),
                anchor: check.anchor.to_string(),
                verdict: out.verdict,
                detail: out.detail,
                witness: out.witness,
                ok: out.ok,
                runtime_ms,
            },
            Err(Error::BudgetExhausted { budget }) => CheckRecord {
                name: check.name.to_string(),
                anchor: check.anchor.to_string(),
                verdict: "unknown".to_string(),
                detail: Some(format!("budget of {budget} exhausted")),
                witness: None,
                ok: false,
                runtime_ms,
            },
            Err(e) => return Err(e),
        };
        records.push(record);
    }
    Ok(records)
}

pub fn battery() -> Vec<Check> {
    vec![
        Check {
            name: "kgtg-commutation",
            anchor: "kgtg",
            run: kgtg_commutation,
        },
        Check {
            name: "kgtg-subadditivity",
            anchor: "kgtg",
            run: kgtg_subadditivity,
        },
        Check {
            name: "kgtg-scaling",
            anchor: "kgtg",
            run: kgtg_scaling,
        },
        Check {
            name: "gtg-iff-finite-degree",
            anchor: "definicion_bis_gtg",
            run: gtg_iff_finite_degree,
        },
        Check {
            name: "core-subgroup-when-generating",
            anchor: "definicion_bis_gtg",
            run: core_subgroup_when_generating,
        },
        Check {
            name: "degree-one-iff-subgroup",
            anchor: "definicion_bis_gtg",
            run: degree_one_iff_subgroup,
        },
        Check {
            name: "core-stabilizes-at-exponent",
            anchor: "Exampl0TG",
            run: core_stabilizes_at_exponent,
        },
        Check {
            name: "smooth-division-ladder",
            anchor: "nonGTGex",
            run: smooth_division_ladder,
        },
        Check {
            name: "smooth-degree",
            anchor: "nonGTGex",
            run: smooth_degree,
        },
        Check {
            name: "smooth-product-truncation",
            anchor: "nonGTGex",
            run: smooth_product_truncation,
        },
        Check {
            name: "cross-escape-family",
            anchor: "notgtgset",
            run: cross_escape_family,
        },
        Check {
            name: "preimage-degree",
            anchor: "Rem_x",
            run: preimage_degree,
        },
        Check {
            name: "intersection-bounded-degree",
            anchor: "Rem_x",
            run: intersection_bounded_degree,
        },
        Check {
            name: "product-degree-finite",
            anchor: "Rem_x",
            run: product_degree_finite,
        },
        Check {
            name: "weight-class-sum-law",
            anchor: "remark:NIndep",
            run: weight_class_sum_law,
        },
        Check {
            name: "weight-class-box-envelope",
            anchor: "remark:NIndep",
            run: weight_class_box_envelope,
        },
        Check {
            name: "near-independence-witnesses",
            anchor: "remark:NIndep",
            run: near_independence_witnesses,
        },
        Check {
            name: "injectivity-at-depth",
            anchor: "Claim1",
            run: injectivity_at_depth,
        },
        Check {
            name: "epsilon-floor",
            anchor: "Lydia_Theorem",
            run: epsilon_floor,
        },
        Check {
            name: "growth-condition",
            anchor: "Lydia_Theorem",
            run: growth_condition,
        },
        Check {
            name: "greedy-construction-integers",
            anchor: "Lydia_Theorem",
            run: greedy_construction_integers,
        },
        Check {
            name: "bounded-group-obstruction",
            anchor: "LastCorollary",
            run: bounded_group_obstruction,
        },
        Check {
            name: "unbounded-construction",
            anchor: "LastCorollary",
            run: unbounded_construction,
        },
        Check {
            name: "local-boundedness-probe",
            anchor: "remlocbounded",
            run: local_boundedness_probe,
        },
        Check {
            name: "level-ladder",
            anchor: "LemmaUFSS",
            run: level_ladder,
        },
        Check {
            name: "generated-set-degree",
            anchor: "LemmaUFSS",
            run: generated_set_degree,
        },
        Check {
            name: "tail-bound",
            anchor: "Claim2",
            run: tail_bound,
        },
        Check {
            name: "metric-refinement",
            anchor: "Lydia_Lemma",
            run: metric_refinement,
        },
        Check {
            name: "strict-refinement",
            anchor: "Lydia_Lemma",
            run: strict_refinement,
        },
        Check {
            name: "quotient-distinguished-neighborhood",
            anchor: "Prop2GTG",
            run: quotient_distinguished_neighborhood,
        },
        Check {
            name: "small-subgroup-witness",
            anchor: "def_nsns",
            run: small_subgroup_witness,
        },
    ]
}

fn gamma_of(u: &SymSet, w: &Window) -> Result<Option<u64>> {
    Ok(match symset::gamma(u, w)? {
        GammaOutcome::Finite { m, .. } => Some(m),
        GammaOutcome::InfinityCertified { .. } => None,
        GammaOutcome::Unknown { probed_to } => {
            return Err(Error::Inconsistency(format!(
                "degree undecided at depth {probed_to} on a decidable instance"
            )))
        }
    })
}

fn kgtg_commutation(w: &Window) -> Result<CheckOutcome> {
    let mut rng = corpus::rng(0xC0117);
    for case in 0..60 {
        let g = corpus::random_group(&mut rng, 256);
        let u = corpus::random_symmetric_set(&mut rng, &g);
        let n = rand::Rng::gen_range(&mut rng, 1..=8u64);
        let m = rand::Rng::gen_range(&mut rng, 1..=8u64);
        let lhs = symset::div_set(&symset::div_set(&u, m, w)?, n, w)?;
        let rhs = symset::div_set(&symset::div_set(&u, n, w)?, m, w)?;
        if !symset::eq_within(&lhs, &rhs, w)? {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!({"case": case, "n": n, "m": m})),
            ));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "60 seeded sets, division operators commute exactly",
    ))
}

fn kgtg_subadditivity(w: &Window) -> Result<CheckOutcome> {
    let mut rng = corpus::rng(0xC0118);
    for case in 0..40 {
        let g = corpus::random_group(&mut rng, 256);
        let a = corpus::random_symmetric_set(&mut rng, &g);
        let b = corpus::random_symmetric_set(&mut rng, &g);
        let k = rand::Rng::gen_range(&mut rng, 1..=6u64);
        let (div_sum, _) =
            symset::sumset(&symset::div_set(&a, k, w)?, &symset::div_set(&b, k, w)?, w)?;
        let (plain, _) = symset::sumset(&a, &b, w)?;
        let rhs = symset::div_set(&plain, k, w)?;
        for x in div_sum.enumerate_window(w)?.elements {
            if !rhs.contains(&x) {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"case": case, "k": k, "escape": x.to_string()})),
                ));
            }
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "40 seeded pairs, divided sums stay inside the divided sumset",
    ))
}

fn kgtg_scaling(w: &Window) -> Result<CheckOutcome> {
    let mut rng = corpus::rng(0xC0119);
    for case in 0..40 {
        let g = corpus::random_group(&mut rng, 256);
        let u = corpus::random_symmetric_set(&mut rng, &g);
        let k = rand::Rng::gen_range(&mut rng, 1..=8u64);
        let scaled = symset::div_set(&u, k, w)?;
        if symset::is_gtg(&u, w)?.is_holds() != symset::is_gtg(&scaled, w)?.is_holds() {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!({"case": case, "k": k})),
            ));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "40 seeded sets, the decision is scaling-stable",
    ))
}

fn gtg_iff_finite_degree(w: &Window) -> Result<CheckOutcome> {
    for (case, (_, u)) in corpus::set_corpus(0xD00D, 60, 256).iter().enumerate() {
        let holds = symset::is_gtg(u, w)?.is_holds();
        if holds != gamma_of(u, w)?.is_some() {
            return Ok(CheckOutcome::fail("fails", Some(json!({"case": case}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "60 seeded sets, decision and degree agree",
    ))
}

fn core_subgroup_when_generating(w: &Window) -> Result<CheckOutcome> {
    let mut generating = 0;
    for (case, (_, u)) in corpus::set_corpus(0xD00E, 60, 256).iter().enumerate() {
        if symset::is_gtg(u, w)?.is_holds() {
            generating += 1;
            let (core, _) = symset::core(u, w)?;
            if !symset::is_subgroup(&core, w)?.is_holds() {
                return Ok(CheckOutcome::fail("fails", Some(json!({"case": case}))));
            }
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!("{generating} generating sets out of 60 all have subgroup cores"),
    ))
}

fn degree_one_iff_subgroup(w: &Window) -> Result<CheckOutcome> {
    let mut sets = 0u64;
    for n in 1..=10u64 {
        let g = GroupInstance::finite_direct_sum(vec![n.max(2)])?;
        if n == 1 {
            continue;
        }
        for u in all_symmetric_subsets(&g) {
            sets += 1;
            let deg_one = gamma_of(&u, w)? == Some(1);
            let sub = symset::is_subgroup(&u, w)?.is_holds();
            if deg_one != sub {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"n": n, "set": u.enumerate_window(w)?.elements.len()})),
                ));
            }
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!("all {sets} symmetric subsets of the cyclic groups up to order 10"),
    ))
}

/// All symmetric subsets containing zero, by pair-class masks.
pub fn all_symmetric_subsets(group: &GroupInstance) -> Vec<SymSet> {
    let mut classes: Vec<Vec<Element>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for x in group.enumerate().unwrap() {
        if group.is_zero(&x) || seen.contains(&x) {
            continue;
        }
        let neg = group.neg(&x);
        seen.insert(x.clone());
        seen.insert(neg.clone());
        if neg == x {
            classes.push(vec![x]);
        } else {
            classes.push(vec![x, neg]);
        }
    }
    let count = classes.len();
    (0..(1u64 << count))
        .map(|mask| {
            let mut elements = vec![group.zero()];
            for (i, class) in classes.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    elements.extend(class.iter().cloned());
                }
            }
            SymSet::explicit(group.clone(), elements).unwrap()
        })
        .collect()
}

fn core_stabilizes_at_exponent(w: &Window) -> Result<CheckOutcome> {
    for (case, (_, u)) in corpus::set_corpus(0xD00F, 40, 256).iter().enumerate() {
        let (core, exactness) = symset::core(u, w)?;
        if !matches!(exactness, symset::CoreExactness::Exact) {
            return Ok(CheckOutcome::fail("fails", Some(json!({"case": case}))));
        }
        let by_div: std::collections::BTreeSet<Element> =
            core.enumerate_window(w)?.elements.into_iter().collect();
        let by_cyclic = topology::core_by_cyclic_subgroups(u)?;
        if by_div != by_cyclic {
            return Ok(CheckOutcome::fail("fails", Some(json!({"case": case}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "40 seeded sets: the exponent-divided set equals the union of interior cyclic subgroups",
    ))
}

fn next_prime(p: u64) -> u64 {
    let mut q = p + 1;
    let is_prime = |n: u64| {
        n >= 2
            && (2..n)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    };
    while !is_prime(q) {
        q += 1;
    }
    q
}

fn smooth_window(w: &Window) -> Window {
    Window::new(1_000_000, 16, w.budget)
}

fn smooth_division_ladder(w: &Window) -> Result<CheckOutcome> {
    let win = smooth_window(w);
    for (p, file) in [(2u64, "u2.json"), (3, "u3.json"), (5, "u5.json")] {
        let u = fixture_set("integers_2adic.json", file)?;
        // (1/q)U_p = U_p for every integer q <= p (and in fact up to the
        // next prime), {0} from the next prime on.
        let q_next = next_prime(p);
        for q in 1..q_next {
            let divided = symset::div_set(&u, q, &win)?;
            if !symset::eq_within(&divided, &u, &win)? {
                return Ok(CheckOutcome::fail("fails", Some(json!({"p": p, "q": q}))));
            }
        }
        let collapsed = symset::div_set(&u, q_next, &win)?;
        let members = collapsed.enumerate_window(&win)?.elements;
        if members != vec![Element::int(0)] {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!({"p": p, "q": q_next, "members": members.len()})),
            ));
        }
        // Core within the window is trivial.
        let (core, _) = symset::core(&u, &win)?;
        if core.enumerate_window(&win)?.elements != vec![Element::int(0)] {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!({"p": p, "core": "nontrivial"})),
            ));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "p in {2,3,5}: dividing fixes the set below the next prime and collapses it there; cores trivial",
    ))
}

fn smooth_degree(w: &Window) -> Result<CheckOutcome> {
    let win = smooth_window(w);
    for (p, file) in [(2u64, "u2.json"), (3, "u3.json"), (5, "u5.json")] {
        let u = fixture_set("integers_2adic.json", file)?;
        let expected = next_prime(p);
        match symset::gamma(&u, &win)? {
            GammaOutcome::Finite { m, .. } if m == expected => {}
            other => {
                return Ok(CheckOutcome::fail(
                    format!("degree mismatch for p={p}"),
                    Some(json!(format!("{other:?}"))),
                ))
            }
        }
    }
    // The sum of two members escapes: 1 + 2 = 3 outside the 2-smooth set.
    let u2 = fixture_set("integers_2adic.json", "u2.json")?;
    let (s, _) = symset::sumset(&u2, &u2, &Window::new(100, 8, 1_000_000))?;
    if !s.contains(&Element::int(3)) || u2.contains(&Element::int(3)) {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("missing escape 1 + 2 = 3")),
        ));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "degrees 3, 5, 7 for p = 2, 3, 5; sumset escape 1 + 2 = 3 confirmed",
    ))
}

fn smooth_product_truncation(w: &Window) -> Result<CheckOutcome> {
    let win = Window::new(1000, 16, w.budget);
    let factors: Vec<SymSet> = [2u64, 3, 5, 7]
        .iter()
        .map(|&p| SymSet::u_p(p))
        .collect::<Result<_>>()?;
    let v = symset::product_set(factors, &win)?;
    match symset::gamma(&v, &win)? {
        GammaOutcome::Finite {
            m, escapes_below, ..
        } => {
            if m != 11 || escapes_below.len() != 10 {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"degree": m, "escapes": escapes_below.len()})),
                ));
            }
            let g = v.group().clone();
            for (level, x, y) in &escapes_below {
                let in_level =
                    |z: &Element| (1..=*level).all(|k| v.contains(&g.scalar_mul_i64(k as i64, z)));
                if !in_level(x) || !in_level(y) || v.contains(&g.add(x, y)) {
                    return Ok(CheckOutcome::fail(
                        "fails",
                        Some(json!({"level": level, "x": x.to_string(), "y": y.to_string()})),
                    ));
                }
            }
        }
        other => {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!(format!("{other:?}"))),
            ))
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "truncated product over p = 2,3,5,7: degree evidence 11 with a re-checked escape pair at every lower level",
    ))
}

fn cross_escape_family(w: &Window) -> Result<CheckOutcome> {
    let win = Window::new(1_000_000, 64, w.budget);
    let u = fixture_set("rational_plane.json", "cross.json")?;
    let verdict = symset::is_gtg(&u, &win)?;
    if !verdict.is_fails() {
        return Ok(CheckOutcome::fail(
            "expected failure",
            Some(json!(verdict.to_string())),
        ));
    }
    let escapes = match verdict.witness {
        Some(gtg_core::window::Witness::EscapeFamily(e)) => e,
        other => {
            return Ok(CheckOutcome::fail(
                "missing family",
                Some(json!(format!("{other:?}"))),
            ))
        }
    };
    if escapes.len() != 64 {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!({"levels": escapes.len()})),
        ));
    }
    let g = u.group().clone();
    for (m, x, y) in &escapes {
        let in_level = |z: &Element| (1..=*m).all(|k| u.contains(&g.scalar_mul_i64(k as i64, z)));
        if !in_level(x) || !in_level(y) || u.contains(&g.add(x, y)) {
            return Ok(CheckOutcome::fail("fails", Some(json!({"m": m}))));
        }
    }
    Ok(CheckOutcome::pass(
        "expected-fails",
        "the cross admits the escape pair ((1/m,0),(0,1/m)) at every level m <= 64; \
         the pair's multiples stay on the axes while the sum (1/m,1/m) leaves them, \
         and the same argument applies verbatim to every m beyond the window",
    ))
}

fn preimage_degree(w: &Window) -> Result<CheckOutcome> {
    // Fixed case 1: reduction from order 12 to order 4, target {0, 1, 3}.
    let z12 = GroupInstance::finite_direct_sum(vec![12])?;
    let z4 = GroupInstance::finite_direct_sum(vec![4])?;
    let reduce = Homomorphism::finite_by_images(z12, z4.clone(), vec![Element::tuple(vec![1])])?;
    let a = SymSet::explicit(
        z4,
        vec![
            Element::tuple(vec![0]),
            Element::tuple(vec![1]),
            Element::tuple(vec![3]),
        ],
    )?;
    let pre = symset::preimage_set(&reduce, &a)?;
    let (ga, gp) = (gamma_of(&a, w)?, gamma_of(&pre, w)?);
    if ga != Some(2) || gp != Some(2) {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!({"case": "reduction", "ga": ga, "gp": gp})),
        ));
    }

    // Fixed case 2: doubling into order 8 with the target inside the image.
    let z4b = GroupInstance::finite_direct_sum(vec![4])?;
    let z8 = GroupInstance::finite_direct_sum(vec![8])?;
    let double = Homomorphism::finite_by_images(z4b, z8.clone(), vec![Element::tuple(vec![2])])?;
    let b = SymSet::explicit(
        z8,
        vec![
            Element::tuple(vec![0]),
            Element::tuple(vec![2]),
            Element::tuple(vec![6]),
        ],
    )?;
    let pre_b = symset::preimage_set(&double, &b)?;
    let (gb, gpb) = (gamma_of(&b, w)?, gamma_of(&pre_b, w)?);
    if gb != gpb || gb != Some(2) {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!({"case": "doubling", "ga": gb, "gp": gpb})),
        ));
    }

    // Seeded corpus with the inside-image half asserting equality.
    let mut rng = corpus::rng(0xF111);
    let mut equalities = 0;
    for case in 0..30 {
        let inside = case % 2 == 0;
        let (phi, set) = corpus::random_homomorphism_case(&mut rng, inside);
        let pre = symset::preimage_set(&phi, &set)?;
        let gs = gamma_of(&set, w)?;
        let gp = gamma_of(&pre, w)?;
        match (gp, gs) {
            (Some(p), Some(q)) if p > q => {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"case": case, "p": p, "q": q})),
                ))
            }
            (None, Some(_)) => return Ok(CheckOutcome::fail("fails", Some(json!({"case": case})))),
            _ => {}
        }
        if inside {
            if gp != gs {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"case": case, "p": format!("{gp:?}"), "q": format!("{gs:?}")})),
                ));
            }
            equalities += 1;
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!("2 fixed + 30 seeded maps; degree never grows, equality in the {equalities} image-contained cases"),
    ))
}

fn intersection_bounded_degree(w: &Window) -> Result<CheckOutcome> {
    let mut rng = corpus::rng(0xF112);
    let mut tested = 0;
    for _ in 0..60 {
        let g = corpus::random_group(&mut rng, 256);
        let a = corpus::random_symmetric_set(&mut rng, &g);
        let b = corpus::random_symmetric_set(&mut rng, &g);
        if let (Some(da), Some(db)) = (gamma_of(&a, w)?, gamma_of(&b, w)?) {
            let both = symset::intersection(vec![a, b])?;
            match gamma_of(&both, w)? {
                Some(d) if d <= da.max(db) => tested += 1,
                other => {
                    return Ok(CheckOutcome::fail(
                        "fails",
                        Some(json!({"da": da, "db": db, "d": format!("{other:?}")})),
                    ))
                }
            }
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!(
            "{tested} bounded pairs intersect to generating sets with degree at most the maximum"
        ),
    ))
}

fn product_degree_finite(w: &Window) -> Result<CheckOutcome> {
    let mut rng = corpus::rng(0xF113);
    for case in 0..30 {
        let ga = corpus::random_group(&mut rng, 16);
        let gb = corpus::random_group(&mut rng, 16);
        let a = corpus::random_symmetric_set(&mut rng, &ga);
        let b = corpus::random_symmetric_set(&mut rng, &gb);
        let p = symset::product_set(vec![a.clone(), b.clone()], w)?;
        let expected = match (gamma_of(&a, w)?, gamma_of(&b, w)?) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        if gamma_of(&p, w)? != expected {
            return Ok(CheckOutcome::fail("fails", Some(json!({"case": case}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "30 seeded products: the degree is the componentwise maximum, by full enumeration",
    ))
}

fn weight_class_sum_law(w: &Window) -> Result<CheckOutcome> {
    let budget = w.budget;
    let mut total_pairs = 0u64;
    for m in [0i32, 1, 2] {
        match coeff::km_sum_check(m, 4, budget)? {
            KmSumOutcome::Holds { pairs_checked } => total_pairs += pairs_checked,
            KmSumOutcome::Escape { left, right } => {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"m": m, "left": left.to_string(), "right": right.to_string()})),
                ))
            }
        }
    }
    // Negative control: the class is not closed under addition into itself.
    match coeff::km_sum_check_against(0, 0, 2, budget)? {
        KmSumOutcome::Escape { left, right } => {
            let s = left.add(&right);
            if coeff::in_km(&s, 0) {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!("false control escape")),
                ));
            }
        }
        KmSumOutcome::Holds { .. } => {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!("control unexpectedly closed")),
            ))
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!(
            "{total_pairs} pairs at support depth 4 for m in {{0,1,2}}, plus the negative control"
        ),
    ))
}

fn weight_class_box_envelope(w: &Window) -> Result<CheckOutcome> {
    let budget = w.budget;
    let mut total = 0u64;
    for m in -2..=2i32 {
        let mut ok = true;
        let visited = coeff::for_each_in_km(m, 0, 5, budget, |entries| {
            for (j, &k) in entries.iter().enumerate() {
                if k.abs() > (1i64 << (j + 2)) {
                    ok = false;
                }
            }
        })?;
        total += visited;
        if !ok {
            return Ok(CheckOutcome::fail("fails", Some(json!({"m": m}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!("{total} vectors at support depth 5 for m in -2..=2 all stay inside the box"),
    ))
}

fn dyadic_metric() -> Result<gtg_core::metric::MetricGroup> {
    fixture_group("integers_2adic.json")?.to_metric()
}

fn int_sequence(values: &[i64]) -> Result<MetricSequence> {
    MetricSequence::new(
        dyadic_metric()?,
        values.iter().map(|&v| Element::int(v)).collect(),
    )
}

fn near_independence_witnesses(w: &Window) -> Result<CheckOutcome> {
    // Dependent pair: 3*1 - 1*3 = 0 inside the box.
    let dependent = int_sequence(&[1, 3])?;
    let v = independence::is_nearly_independent(&dependent, 1, w.budget)?;
    let expected = CoeffVector::from_i64(&[3, -1]);
    match v.witness {
        Some(gtg_core::window::Witness::Coeff(c)) if c == expected && v.is_fails() => {}
        other => {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!(format!("{other:?}"))),
            ))
        }
    }
    // Superincreasing powers are independent to depth 3.
    let free = int_sequence(&[1, 16, 1024, 262144])?;
    if !independence::is_nearly_independent(&free, 3, w.budget)?.is_holds() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("superincreasing case")),
        ));
    }
    // A single element of order 5 passes at depth 0.
    let g5 = GroupInstance::finite_direct_sum(vec![5])?;
    let m5 = gtg_core::metric::MetricGroup::new(g5, gtg_core::metric::SeminormKind::Discrete)?;
    let single = MetricSequence::new(m5, vec![Element::tuple(vec![1])])?;
    if !independence::is_nearly_independent(&single, 0, w.budget)?.is_holds() {
        return Ok(CheckOutcome::fail("fails", Some(json!("order-5 case"))));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "dependence witness (3,-1); superincreasing powers pass depth 3; order-5 element passes depth 0",
    ))
}

fn injectivity_at_depth(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(3, w)?;
    let mut seen: std::collections::BTreeMap<Element, CoeffVector> =
        std::collections::BTreeMap::new();
    let mut count = 0u64;
    for k in coeff::enumerate_km(-1, 3, w.budget)? {
        let value = seq.phi(&k)?;
        if let Some(prev) = seen.get(&value) {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(
                    json!({"collision": value.to_string(), "k": k.to_string(), "prev": prev.to_string()}),
                ),
            ));
        }
        seen.insert(value, k);
        count += 1;
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!("{count} weight-two box vectors map to distinct elements at depth 3"),
    ))
}

fn epsilon_floor(w: &Window) -> Result<CheckOutcome> {
    let seq = int_sequence(&[1, 64, 1 << 20])?;
    let eps0 = independence::epsilon_n(&seq, 0, w.budget)?;
    let eps1 = independence::epsilon_n(&seq, 1, w.budget)?;
    if eps0 != pow2(-2) || eps1 != pow2(-9) {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!({
                "eps0": gtg_core::group::ratio_string(&eps0),
                "eps1": gtg_core::group::ratio_string(&eps1)
            })),
        ));
    }
    for n in 0..2 {
        let eps = independence::epsilon_n(&seq, n, w.budget)?;
        if eps > seq.value(n) {
            return Ok(CheckOutcome::fail("fails", Some(json!({"n": n}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "eps_0 = 1/4 and eps_1 = 1/512 by full box enumeration; floors respected",
    ))
}

fn growth_condition(w: &Window) -> Result<CheckOutcome> {
    let good = int_sequence(&[1, 64, 1 << 20])?;
    if !independence::is_almost_independent(&good, 2, w.budget)?.is_holds() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("reference triple rejected")),
        ));
    }
    let bad = int_sequence(&[1, 2])?;
    let v = independence::is_almost_independent(&bad, 1, w.budget)?;
    match v.witness {
        Some(gtg_core::window::Witness::Growth { n: 0, .. }) if v.is_fails() => {}
        other => {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!(format!("{other:?}"))),
            ))
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "the growth inequality accepts (1, 2^6, 2^20) and rejects (1, 2) at step 0",
    ))
}

fn build_dyadic(n_max: usize, w: &Window) -> Result<MetricSequence> {
    match build_almost_independent(&dyadic_metric()?, n_max, w.budget)? {
        BuildOutcome::Built(seq) => Ok(seq),
        BuildOutcome::NoSequenceFound { stage, reason, .. } => Err(Error::Inconsistency(format!(
            "construction failed at stage {stage}: {reason}"
        ))),
    }
}

fn greedy_construction_integers(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(4, w)?;
    let expected: Vec<Element> = [1i64, 1 << 6, 1 << 14, 1 << 24, 1i64 << 36]
        .iter()
        .map(|&v| Element::int(v))
        .collect();
    if seq.prefix() != expected.as_slice() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!(seq
                .prefix()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>())),
        ));
    }
    if seq.stored_epsilon() != [pow2(-2), pow2(-9), pow2(-18), pow2(-29)] {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("unexpected eps values")),
        ));
    }
    // Independent re-verification: growth plus the full depth-4 box.
    if !independence::is_almost_independent(&seq, 4, w.budget)?.is_holds() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("growth re-verification")),
        ));
    }
    if !independence::is_nearly_independent(&seq, 4, w.budget)?.is_holds() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("independence re-verification")),
        ));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "prefix (1, 2^6, 2^14, 2^24, 2^36) accepted by the exhaustive verifier at depth 4",
    ))
}

fn bounded_group_obstruction(w: &Window) -> Result<CheckOutcome> {
    let metric = fixture_group("z2_power10.json")?.to_metric()?;
    match build_almost_independent(&metric, 1, w.budget)? {
        BuildOutcome::NoSequenceFound {
            stage: 0,
            reason,
            certified: true,
        } if reason.contains("order > 4") => Ok(CheckOutcome::pass("expected-no-sequence", reason)),
        other => Ok(CheckOutcome::fail(
            "fails",
            Some(json!(format!("{other:?}"))),
        )),
    }
}

fn unbounded_construction(w: &Window) -> Result<CheckOutcome> {
    let metric = fixture_group("restricted_pow2.json")?.to_metric()?;
    let seq = match build_almost_independent(&metric, 3, w.budget)? {
        BuildOutcome::Built(seq) => seq,
        other => {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!(format!("{other:?}"))),
            ))
        }
    };
    let group = metric.group().clone();
    let expected = vec![
        group.generator(0)?,
        group.generator(2)?,
        group.generator(5)?,
        group.generator(8)?,
    ];
    if seq.prefix() != expected.as_slice() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!(seq
                .prefix()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>())),
        ));
    }
    if !independence::is_nearly_independent(&seq, 3, w.budget)?.is_holds() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("independence re-verification")),
        ));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "generators e_0, e_2, e_5, e_8 chosen greedily and re-verified to depth 3",
    ))
}

fn local_boundedness_probe(w: &Window) -> Result<CheckOutcome> {
    let z = dyadic_metric()?;
    if !independence::local_boundedness_probe(&z, w)?.is_fails() {
        return Ok(CheckOutcome::fail("fails", Some(json!("integers"))));
    }
    let bounded = fixture_group("z6_z4.json")?.to_metric()?;
    let v = independence::local_boundedness_probe(&bounded, w)?;
    if !v.is_holds() || v.witness != Some(gtg_core::window::Witness::ExponentCertificate(12)) {
        return Ok(CheckOutcome::fail("fails", Some(json!("bounded sum"))));
    }
    let restricted = fixture_group("restricted_pow2.json")?.to_metric()?;
    if !independence::local_boundedness_probe(&restricted, w)?.is_fails() {
        return Ok(CheckOutcome::fail("fails", Some(json!("restricted sum"))));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "the integers and the restricted sum yield witness families; the bounded sum is certified by its exponent",
    ))
}

fn level_ladder(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(3, w)?;
    let gs = GeneratedSet::realize(&seq, 3, w.budget)?;
    // Monotone levels containing the right generators.
    for m in 0..=3u64 {
        let level = gs.level(m)?;
        let next = gs.level(m + 1)?;
        if !next.is_subset(level) {
            return Ok(CheckOutcome::fail("fails", Some(json!({"level": m}))));
        }
        let count = coeff::enumerate_km(m as i32, 3, w.budget)?.len();
        if level.len() != count {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!({"level": m, "size": level.len(), "classes": count})),
            ));
        }
    }
    for (n, x) in seq.prefix().iter().enumerate() {
        if !gs.level(n as u64)?.contains(x) {
            return Ok(CheckOutcome::fail("fails", Some(json!({"x": n}))));
        }
    }
    // Weight uniqueness: box representations landing in a level stay in
    // the matching class.
    for k in coeff::enumerate_km(0, 3, w.budget)? {
        let value = seq.phi(&k)?;
        for m in 0..=3u64 {
            if gs.level(m)?.contains(&value) && !coeff::in_km(&k, m as i32) {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"k": k.to_string(), "level": m})),
                ));
            }
        }
    }
    // Core triviality at depth.
    let mut survivors: Option<std::collections::BTreeSet<Element>> = None;
    for (_, level) in gs.realized_levels() {
        survivors = Some(match survivors {
            None => level.clone(),
            Some(prev) => prev.intersection(level).cloned().collect(),
        });
    }
    if survivors.unwrap() != std::collections::BTreeSet::from([Element::int(0)]) {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("nontrivial survivor")),
        ));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "levels nest, sizes match the class counts, representations respect weights, core trivial at depth 3",
    ))
}

fn generated_set_degree(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(3, w)?;
    let gs = GeneratedSet::realize(&seq, 3, w.budget)?;
    let v = gs.gamma_check(w.budget)?;
    if !v.is_holds() || v.witness != Some(gtg_core::window::Witness::GammaValue(2)) {
        return Ok(CheckOutcome::fail("fails", Some(json!(v.to_string()))));
    }
    Ok(CheckOutcome::pass(
        "holds",
        "level-1 sums land in level 0 and a level-0 pair escapes: degree 2 at depth 3",
    ))
}

fn tail_bound(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(3, w)?;
    let gs = GeneratedSet::realize(&seq, 3, w.budget)?;
    for m in 0..=2i32 {
        for n in 0..=2usize {
            if !gs.tail_bound_check(m, n, w.budget)?.is_holds() {
                return Ok(CheckOutcome::fail("fails", Some(json!({"m": m, "n": n}))));
            }
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "every tail vector evaluates inside the promised ball for m, n in 0..=2 at depth 3",
    ))
}

fn metric_refinement(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(3, w)?;
    let gs = GeneratedSet::realize(&seq, 3, w.budget)?;
    let mut found = Vec::new();
    for (eps, expected_m) in [(pow2(-1), 1u64), (pow2(-3), 2), (pow2(-6), 2)] {
        let v = gs.finer_than_metric(&eps, w.budget)?;
        let m = match v.witness {
            Some(gtg_core::window::Witness::LevelIndex(m)) if v.is_holds() => m,
            other => {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!(format!("{other:?}"))),
                ))
            }
        };
        if m != expected_m {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!({"m": m, "expected": expected_m})),
            ));
        }
        let metric = seq.metric().clone();
        for x in gs.level(m)? {
            if metric.value(x) >= eps {
                return Ok(CheckOutcome::fail(
                    "fails",
                    Some(json!({"m": m, "x": x.to_string()})),
                ));
            }
        }
        found.push(m);
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!(
            "levels {found:?} fit inside the balls of radius 1/2, 1/8, 1/64, element by element"
        ),
    ))
}

fn strict_refinement(w: &Window) -> Result<CheckOutcome> {
    let seq = build_dyadic(4, w)?;
    let gs = GeneratedSet::realize(&seq, 4, w.budget)?;
    let v = gs.strictness_witness(w.budget)?;
    if !v.is_holds() {
        return Ok(CheckOutcome::fail("fails", Some(json!(v.to_string()))));
    }
    let even = gs.even_refinement(w.budget)?;
    for (m, level) in even.realized_levels() {
        if !level.is_subset(gs.level(*m)?) {
            return Ok(CheckOutcome::fail("fails", Some(json!({"level": m}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        format!(
            "odd elements at indices {:?} have no even-subsequence representation; refinement levels embed",
            gs.odd_indices()
        ),
    ))
}

fn quotient_distinguished_neighborhood(w: &Window) -> Result<CheckOutcome> {
    // Fixed: the subgroup {0, 4} of the cyclic group of order 8.
    let sub = fixture_set("z8.json", "z8_sub4.json")?;
    let out = topology::quotient_ufss(&sub, w)?;
    if out.gamma != 1 || out.quotient.size() != 4 || !out.verdict.is_holds() {
        return Ok(CheckOutcome::fail("fails", Some(json!("subgroup case"))));
    }
    // Fixed: {0, 2, 6} has trivial core, so the quotient is the group.
    let twosix = fixture_set("z8.json", "z8_twosix.json")?;
    let out = topology::quotient_ufss(&twosix, w)?;
    if out.gamma != 2 || out.quotient.size() != 8 || !out.verdict.is_holds() {
        return Ok(CheckOutcome::fail(
            "fails",
            Some(json!("trivial-core case")),
        ));
    }
    // Seeded generating sets.
    let mut rng = corpus::rng(0xF114);
    for case in 0..20 {
        let (_, u, _) = corpus::random_generating_set(&mut rng, 64);
        let out = topology::quotient_ufss(&u, w)?;
        if !out.verdict.is_holds() {
            return Ok(CheckOutcome::fail("fails", Some(json!({"case": case}))));
        }
    }
    Ok(CheckOutcome::pass(
        "holds",
        "2 fixed + 20 seeded quotients verify the divided-image inclusion up to the exponent",
    ))
}

fn small_subgroup_witness(w: &Window) -> Result<CheckOutcome> {
    let g = GroupInstance::finite_direct_sum(vec![8])?;
    let with_subgroup = SymSet::explicit(
        g.clone(),
        vec![
            Element::tuple(vec![0]),
            Element::tuple(vec![2]),
            Element::tuple(vec![4]),
            Element::tuple(vec![6]),
        ],
    )?;
    let v = symset::contains_nontrivial_subgroup(&with_subgroup)?;
    match v.witness {
        Some(gtg_core::window::Witness::CyclicSubgroup { generator, .. })
            if v.is_holds() && generator == Element::tuple(vec![2]) => {}
        other => {
            return Ok(CheckOutcome::fail(
                "fails",
                Some(json!(format!("{other:?}"))),
            ))
        }
    }
    let without = fixture_set("z8.json", "z8_twosix.json")?;
    if !symset::contains_nontrivial_subgroup(&without)?.is_fails() {
        return Ok(CheckOutcome::fail("fails", Some(json!("{0,2,6} case"))));
    }
    let trivial = SymSet::explicit(g, vec![Element::tuple(vec![0])])?;
    if !symset::contains_nontrivial_subgroup(&trivial)?.is_fails() {
        return Ok(CheckOutcome::fail("fails", Some(json!("{0} case"))));
    }
    let _ = w;
    Ok(CheckOutcome::pass(
        "holds",
        "witness subgroup generated by 2 found; {0,2,6} and {0} are small-subgroup free",
    ))
}

/// Digest input for the hermetic battery: every bundled fixture.
pub fn fixtures_digest() -> String {
    let parts: Vec<&[u8]> = FIXTURES.iter().map(|(_, text)| text.as_bytes()).collect();
    crate::report::digest_bytes(&parts)
}

/// Renders a sequence certificate for reports.
pub fn certificate_json(seq: &MetricSequence) -> Value {
    serde_json::to_value(SequenceCertificate::from_sequence(seq)).expect("certificate serializes")
}

/// Canonical JSON for a set of group elements.
pub fn elements_json(group: &GroupInstance, elements: &[Element]) -> Value {
    Value::Array(elements.iter().map(|x| element_to_json(group, x)).collect())
}
