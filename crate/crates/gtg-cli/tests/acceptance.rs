//! Acceptance suite: one test per criterion, each printing its own pass
//! line (visible under `--nocapture`) and asserting the stated runtime
//! budget.

use std::collections::BTreeSet;
use std::time::Instant;

use gtg_cli::checks::all_symmetric_subsets;
use gtg_cli::corpus;
use gtg_core::coeff::{self, pow2, KmSumOutcome};
use gtg_core::group::{Element, GroupInstance, OrderFormula};
use gtg_core::independence::{self, build_almost_independent, BuildOutcome, MetricSequence};
use gtg_core::metric::{MetricGroup, SeminormKind};
use gtg_core::symset::{self, GammaOutcome, SymSet};
use gtg_core::topology::{self, GeneratedSet};
use gtg_core::window::Window;

const BUDGET: u64 = 100_000_000;

fn finish(name: &str, limit_secs: u64, started: Instant) {
    let elapsed = started.elapsed();
    println!("PASS {name} in {:.2?} (limit {limit_secs} s)", elapsed);
    assert!(
        elapsed.as_secs() < limit_secs,
        "{name} exceeded its {limit_secs} s budget: {elapsed:.2?}"
    );
}

fn gamma_value(u: &SymSet, w: &Window) -> Option<u64> {
    match symset::gamma(u, w).unwrap() {
        GammaOutcome::Finite { m, .. } => Some(m),
        GammaOutcome::InfinityCertified { .. } => None,
        GammaOutcome::Unknown { .. } => panic!("undecided on a decidable instance"),
    }
}

/// The shared 200-set corpus used by the first two criteria.
fn shared_corpus() -> Vec<(GroupInstance, SymSet)> {
    corpus::set_corpus(0xAC01, 200, 256)
}

#[test]
fn criterion_01_division_identities_on_random_corpus() {
    let started = Instant::now();
    let w = Window::default();
    let mut rng = corpus::rng(0xAC01 + 1);
    for (case, (g, u)) in shared_corpus().iter().enumerate() {
        let n = rand::Rng::gen_range(&mut rng, 1..=8u64);
        let m = rand::Rng::gen_range(&mut rng, 1..=8u64);
        // Commutation, exactly.
        let lhs = symset::div_set(&symset::div_set(u, m, &w).unwrap(), n, &w).unwrap();
        let rhs = symset::div_set(&symset::div_set(u, n, &w).unwrap(), m, &w).unwrap();
        assert!(symset::eq_within(&lhs, &rhs, &w).unwrap(), "case {case}");
        // Subadditivity, exhaustively.
        let b = corpus::random_symmetric_set(&mut rng, g);
        let k = rand::Rng::gen_range(&mut rng, 1..=6u64);
        let (div_sum, _) = symset::sumset(
            &symset::div_set(u, k, &w).unwrap(),
            &symset::div_set(&b, k, &w).unwrap(),
            &w,
        )
        .unwrap();
        let (plain, _) = symset::sumset(u, &b, &w).unwrap();
        let divided = symset::div_set(&plain, k, &w).unwrap();
        for x in div_sum.enumerate_window(&w).unwrap().elements {
            assert!(divided.contains(&x), "case {case}: {x} escapes");
        }
    }
    finish(
        "criterion 1: division identities on 200 random sets",
        60,
        started,
    );
}

#[test]
fn criterion_02_generation_iff_finite_degree() {
    let started = Instant::now();
    let w = Window::default();
    for (case, (_, u)) in shared_corpus().iter().enumerate() {
        let holds = symset::is_gtg(u, &w).unwrap().is_holds();
        assert_eq!(holds, gamma_value(u, &w).is_some(), "case {case}");
        if holds {
            let (core, _) = symset::core(u, &w).unwrap();
            assert!(
                symset::is_subgroup(&core, &w).unwrap().is_holds(),
                "case {case}: core not a subgroup"
            );
        }
    }
    finish(
        "criterion 2: decision matches degree; cores are subgroups",
        60,
        started,
    );
}

#[test]
fn criterion_03_degree_one_exactly_for_subgroups() {
    let started = Instant::now();
    let w = Window::default();
    let mut checked = 0u64;
    for n in 2..=12u64 {
        let g = GroupInstance::finite_direct_sum(vec![n]).unwrap();
        // Every subgroup has degree one.
        for gen in 0..n {
            let h = SymSet::subgroup_generated(g.clone(), vec![Element::tuple(vec![gen])]).unwrap();
            assert_eq!(
                gamma_value(&h, &w),
                Some(1),
                "subgroup <{gen}> of order-{n} cyclic group"
            );
        }
        // Degree one only for subgroups, over every symmetric subset.
        for u in all_symmetric_subsets(&g) {
            checked += 1;
            let deg_one = gamma_value(&u, &w) == Some(1);
            let sub = symset::is_subgroup(&u, &w).unwrap().is_holds();
            assert_eq!(deg_one, sub, "cyclic group of order {n}");
        }
    }
    // 188 symmetric subsets across the cyclic groups of orders 2..=12.
    assert_eq!(checked, 188, "exhaustive corpus size changed");
    finish(
        "criterion 3: degree one characterizes subgroups on all cyclic groups up to order 12",
        120,
        started,
    );
}

#[test]
fn criterion_04_smooth_sets_within_the_million_window() {
    let started = Instant::now();
    let win = Window::new(1_000_000, 8, BUDGET);
    for (p, expected_degree) in [(2u64, 3u64), (3, 5), (5, 7)] {
        let u = SymSet::u_p(p).unwrap();
        // Dividing by any prime q <= p fixes the set.
        for q in [2u64, 3, 5, 7].iter().filter(|&&q| q <= p) {
            let divided = symset::div_set(&u, *q, &win).unwrap();
            assert!(
                symset::eq_within(&divided, &u, &win).unwrap(),
                "p={p}, q={q}"
            );
        }
        // The next prime collapses it to zero.
        let collapsed = symset::div_set(&u, expected_degree, &win).unwrap();
        assert_eq!(
            collapsed.enumerate_window(&win).unwrap().elements,
            vec![Element::int(0)],
            "p={p}"
        );
        assert_eq!(gamma_value(&u, &win), Some(expected_degree), "p={p}");
    }
    finish(
        "criterion 4: smooth-set ladder and degrees at bound 10^6",
        30,
        started,
    );
}

#[test]
fn criterion_05_cross_escapes_at_every_level() {
    let started = Instant::now();
    let u = SymSet::cross();
    let g = u.group().clone();
    let win = Window::new(1_000_000, 64, BUDGET);
    let verdict = symset::is_gtg(&u, &win).unwrap();
    assert!(verdict.is_fails());
    match verdict.witness {
        Some(gtg_core::window::Witness::EscapeFamily(escapes)) => {
            assert_eq!(escapes.len(), 64);
            for (m, x, y) in &escapes {
                let in_level =
                    |z: &Element| (1..=*m).all(|k| u.contains(&g.scalar_mul_i64(k as i64, z)));
                assert!(in_level(x), "m={m}");
                assert!(in_level(y), "m={m}");
                assert!(!u.contains(&g.add(x, y)), "m={m}");
            }
        }
        other => panic!("expected the escape family, got {other:?}"),
    }
    finish(
        "criterion 5: cross escape pairs for every level up to 64",
        5,
        started,
    );
}

#[test]
fn criterion_06_preimages_never_raise_the_degree() {
    let started = Instant::now();
    let w = Window::default();
    let mut rng = corpus::rng(0xAC06);
    let mut equality_cases = 0;
    for case in 0..100 {
        let inside = case % 2 == 0;
        let (phi, a) = corpus::random_homomorphism_case(&mut rng, inside);
        let pre = symset::preimage_set(&phi, &a).unwrap();
        let ga = gamma_value(&a, &w);
        let gp = gamma_value(&pre, &w);
        match (gp, ga) {
            (Some(p), Some(q)) => assert!(p <= q, "case {case}: {p} > {q}"),
            (None, Some(q)) => panic!("case {case}: preimage lost finite degree {q}"),
            _ => {}
        }
        // Equality whenever the target set sits inside the image.
        let image: BTreeSet<Element> = phi.image().unwrap().into_iter().collect();
        let contained = a
            .enumerate_window(&w)
            .unwrap()
            .elements
            .iter()
            .all(|x| image.contains(x));
        if contained {
            assert_eq!(gp, ga, "case {case}: equality expected");
            equality_cases += 1;
        }
    }
    assert!(
        equality_cases >= 50,
        "too few equality cases: {equality_cases}"
    );
    finish(
        "criterion 6: preimage degrees on 100 random homomorphisms",
        60,
        started,
    );
}

#[test]
fn criterion_07_weight_class_arithmetic() {
    let started = Instant::now();
    // Sum law, exhaustively at support depth 4.
    for m in [0i32, 1, 2] {
        match coeff::km_sum_check(m, 4, BUDGET).unwrap() {
            KmSumOutcome::Holds { pairs_checked } => {
                assert!(pairs_checked > 0, "m={m}");
            }
            KmSumOutcome::Escape { left, right } => panic!("m={m}: {left} + {right} escaped"),
        }
    }
    // Box envelope at support depth 5 for m >= -2.
    for m in -2..=2i32 {
        coeff::for_each_in_km(m, 0, 5, BUDGET, |entries| {
            for (j, &k) in entries.iter().enumerate() {
                assert!(k.abs() <= 1i64 << (j + 2), "m={m}: entry {k} at {j}");
            }
        })
        .unwrap();
    }
    finish(
        "criterion 7: weight-class sum law (depth 4) and box envelope (depth 5)",
        120,
        started,
    );
}

#[test]
fn criterion_08_epsilon_oracle_on_the_reference_triple() {
    let started = Instant::now();
    let metric = MetricGroup::new(GroupInstance::integers(), SeminormKind::Dyadic).unwrap();
    let seq = MetricSequence::new(
        metric,
        vec![Element::int(1), Element::int(1 << 6), Element::int(1 << 20)],
    )
    .unwrap();
    assert_eq!(independence::epsilon_n(&seq, 0, BUDGET).unwrap(), pow2(-2));
    assert_eq!(independence::epsilon_n(&seq, 1, BUDGET).unwrap(), pow2(-9));
    // The growth inequalities at n = 0, 1, exactly.
    assert!(independence::is_almost_independent(&seq, 2, BUDGET)
        .unwrap()
        .is_holds());
    for n in 0..2usize {
        let eps = independence::epsilon_n(&seq, n, BUDGET).unwrap();
        assert!(pow2(n as i64 + 3) * seq.value(n + 1) < eps);
        assert!(eps <= seq.value(n));
    }
    finish(
        "criterion 8: epsilon oracle values 1/4 and 1/512 by full enumeration",
        10,
        started,
    );
}

#[test]
fn criterion_09_constructor_accepted_by_the_exhaustive_verifier() {
    let started = Instant::now();
    let metric = MetricGroup::new(GroupInstance::integers(), SeminormKind::Dyadic).unwrap();
    let seq = match build_almost_independent(&metric, 4, BUDGET).unwrap() {
        BuildOutcome::Built(seq) => seq,
        other => panic!("{other:?}"),
    };
    assert_eq!(seq.len(), 5, "certificate carries five elements");
    assert!(independence::is_almost_independent(&seq, 4, BUDGET)
        .unwrap()
        .is_holds());
    assert!(independence::is_nearly_independent(&seq, 4, BUDGET)
        .unwrap()
        .is_holds());
    finish(
        "criterion 9: greedy construction passes the depth-4 verifier",
        600,
        started,
    );
}

#[test]
fn criterion_10_boundedness_separates_the_two_carriers() {
    let started = Instant::now();
    // Truncated power of the two-element group: certified failure at stage 0.
    let bounded = MetricGroup::new(
        GroupInstance::finite_direct_sum(vec![2; 10]).unwrap(),
        SeminormKind::WeightedCircle,
    )
    .unwrap();
    match build_almost_independent(&bounded, 1, BUDGET).unwrap() {
        BuildOutcome::NoSequenceFound {
            stage,
            reason,
            certified,
        } => {
            assert_eq!(stage, 0);
            assert!(certified);
            assert!(reason.contains("order > 4"), "reason: {reason}");
        }
        BuildOutcome::Built(_) => panic!("bounded group admits no such sequence"),
    }
    // The restricted sum with growing orders succeeds to n_max = 3.
    let unbounded = MetricGroup::new(
        GroupInstance::restricted_direct_sum(OrderFormula::Pow2Plus3),
        SeminormKind::WeightedCircle,
    )
    .unwrap();
    match build_almost_independent(&unbounded, 3, BUDGET).unwrap() {
        BuildOutcome::Built(seq) => {
            assert!(independence::is_almost_independent(&seq, 3, BUDGET)
                .unwrap()
                .is_holds());
        }
        other => panic!("{other:?}"),
    }
    finish(
        "criterion 10: bounded carrier refuses, unbounded carrier builds",
        60,
        started,
    );
}

fn dyadic_realization(depth: usize) -> GeneratedSet {
    let metric = MetricGroup::new(GroupInstance::integers(), SeminormKind::Dyadic).unwrap();
    let seq = match build_almost_independent(&metric, depth, BUDGET).unwrap() {
        BuildOutcome::Built(seq) => seq,
        other => panic!("{other:?}"),
    };
    GeneratedSet::realize(&seq, depth, BUDGET).unwrap()
}

#[test]
fn criterion_11_generated_set_at_depth_three() {
    let started = Instant::now();
    let gs = dyadic_realization(3);
    let seq = gs.sequence().clone();
    // Level monotonicity.
    for m in 0..=3u64 {
        assert!(
            gs.level(m + 1).unwrap().is_subset(gs.level(m).unwrap()),
            "level {m}"
        );
    }
    // Representation uniqueness: box vectors landing in a level lie in the
    // matching weight class.
    for k in coeff::enumerate_km(0, 3, BUDGET).unwrap() {
        let value = seq.phi(&k).unwrap();
        for m in 0..=3u64 {
            if gs.level(m).unwrap().contains(&value) {
                assert!(coeff::in_km(&k, m as i32), "{k} in level {m}");
            }
        }
    }
    // Core triviality at depth.
    let mut survivors: Option<BTreeSet<Element>> = None;
    for (_, level) in gs.realized_levels() {
        survivors = Some(match survivors {
            None => level.clone(),
            Some(prev) => prev.intersection(level).cloned().collect(),
        });
    }
    assert_eq!(survivors.unwrap(), BTreeSet::from([Element::int(0)]));
    // Generators inhabit their levels.
    for (n, x) in seq.prefix().iter().enumerate() {
        assert!(gs.level(n as u64).unwrap().contains(x), "x_{n}");
    }
    // Degree certificate.
    let v = gs.gamma_check(BUDGET).unwrap();
    assert!(v.is_holds());
    assert_eq!(v.witness, Some(gtg_core::window::Witness::GammaValue(2)));
    finish(
        "criterion 11: generated-set laws at depth 3 with degree 2",
        300,
        started,
    );
}

#[test]
fn criterion_12_refinement_and_strictness() {
    let started = Instant::now();
    let gs = dyadic_realization(3);
    let metric = gs.sequence().metric().clone();
    for eps in [pow2(-1), pow2(-3), pow2(-6)] {
        let v = gs.finer_than_metric(&eps, BUDGET).unwrap();
        assert!(v.is_holds(), "eps = {eps}");
        let m = match v.witness {
            Some(gtg_core::window::Witness::LevelIndex(m)) => m,
            other => panic!("{other:?}"),
        };
        for x in gs.level(m).unwrap() {
            assert!(metric.value(x) < eps, "eps = {eps}");
        }
    }
    // Exhaustive tail-bound cross-check.
    for m in 0..=2i32 {
        for n in 0..=2usize {
            assert!(
                gs.tail_bound_check(m, n, BUDGET).unwrap().is_holds(),
                "m={m} n={n}"
            );
        }
    }
    // Odd indices 1 and 3 have no representation over the even subsequence.
    assert_eq!(gs.odd_indices(), vec![1, 3]);
    assert!(gs.strictness_witness(BUDGET).unwrap().is_holds());
    finish(
        "criterion 12: refinement radii and one strictness step",
        300,
        started,
    );
}

#[test]
fn criterion_13_quotients_of_random_generating_sets() {
    let started = Instant::now();
    let w = Window::default();
    let mut rng = corpus::rng(0xAC13);
    for case in 0..50 {
        let (_, u, gamma) = corpus::random_generating_set(&mut rng, 64);
        let out = topology::quotient_ufss(&u, &w).unwrap();
        assert_eq!(out.gamma, gamma, "case {case}");
        assert!(out.verdict.is_holds(), "case {case}");
        // Coset count times kernel size recovers the group size.
        let size = u.group().size().unwrap() as usize;
        assert_eq!(
            out.quotient.size() * out.quotient.kernel().len(),
            size,
            "case {case}"
        );
    }
    finish(
        "criterion 13: 50 random quotients verify the divided-image inclusion",
        60,
        started,
    );
}

#[test]
fn criterion_14_reports_are_byte_identical() {
    let started = Instant::now();
    let run = || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_gtg"))
            .args(["check-paper", "--json"])
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "check-paper failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "reports differ between runs");
    assert!(!first.is_empty());
    // The full bundled suite runs inside the overall budget.
    finish(
        "criterion 14: byte-identical machine reports across runs",
        1200,
        started,
    );
}
