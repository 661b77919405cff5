//! Implementations of the four subcommands. Each returns a rendered report
//! plus the process exit code: 0 success, 1 check failure, 2 input error,
//! 3 budget exhaustion (partial report still emitted where possible).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num::BigRational;
use serde_json::{json, Value};

use gtg_core::descriptor::{GroupDescriptor, SequenceCertificate, SetDescriptor};
use gtg_core::group::{parse_ratio, ratio_string};
use gtg_core::independence::{self, build_almost_independent, BuildOutcome};
use gtg_core::symset::{self, GammaOutcome};
use gtg_core::topology::GeneratedSet;
use gtg_core::window::{Window, Witness};
use gtg_core::Error;

use crate::checks;
use crate::report::{digest_bytes, CheckRecord, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub struct CommandOutput {
    pub report: Report,
    pub exit_code: i32,
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Descriptor(format!("cannot read {}: {e}", path.display())))
}

fn witness_json(w: &Witness) -> Value {
    json!(w.to_string())
}

fn record(
    name: &str,
    anchor: &str,
    verdict: String,
    detail: Option<String>,
    witness: Option<Value>,
) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        anchor: anchor.to_string(),
        verdict,
        detail,
        witness,
        ok: true,
        runtime_ms: 0,
    }
}

pub fn cmd_analyze_set(
    group_path: &Path,
    set_path: &Path,
    window: &Window,
) -> Result<CommandOutput, Error> {
    let group_text = read_file(group_path)?;
    let set_text = read_file(set_path)?;
    let group_desc: GroupDescriptor = serde_json::from_str(&group_text)
        .map_err(|e| Error::Descriptor(format!("group descriptor: {e}")))?;
    let set_desc: SetDescriptor = serde_json::from_str(&set_text)
        .map_err(|e| Error::Descriptor(format!("set descriptor: {e}")))?;
    let u = set_desc.to_symset(&group_desc)?;
    let digest = digest_bytes(&[group_text.as_bytes(), set_text.as_bytes()]);

    let mut records = Vec::new();
    let mut exit = EXIT_OK;

    match symset::gamma(&u, window) {
        Ok(GammaOutcome::Finite {
            m,
            exact,
            escapes_below,
        }) => {
            records.push(record(
                "gamma",
                "definicion_bis_gtg",
                m.to_string(),
                Some(if exact {
                    "exact".to_string()
                } else {
                    "within window".to_string()
                }),
                Some(json!(escapes_below
                    .iter()
                    .map(
                        |(level, x, y)| json!({"m": level, "x": x.to_string(), "y": y.to_string()})
                    )
                    .collect::<Vec<_>>())),
            ));
        }
        Ok(GammaOutcome::InfinityCertified {
            escapes,
            family_note,
        }) => {
            records.push(record(
                "gamma",
                "definicion_bis_gtg",
                "infinity".to_string(),
                family_note,
                Some(json!(escapes
                    .iter()
                    .map(
                        |(level, x, y)| json!({"m": level, "x": x.to_string(), "y": y.to_string()})
                    )
                    .collect::<Vec<_>>())),
            ));
        }
        Ok(GammaOutcome::Unknown { probed_to }) => {
            records.push(record(
                "gamma",
                "definicion_bis_gtg",
                "unknown".to_string(),
                Some(format!("probed to depth {probed_to}")),
                None,
            ));
        }
        Err(Error::BudgetExhausted { budget }) => {
            records.push(record(
                "gamma",
                "definicion_bis_gtg",
                "unknown".to_string(),
                Some(format!("budget of {budget} exhausted")),
                None,
            ));
            exit = EXIT_BUDGET;
        }
        Err(e) => return Err(e),
    }

    // Budget overflow never suppresses the report: the affected record is
    // downgraded and the run exits with the budget code.
    let budget_record = |name: &str,
                         anchor: &str,
                         result: Result<CheckRecord, Error>,
                         records: &mut Vec<CheckRecord>,
                         exit: &mut i32|
     -> Result<(), Error> {
        match result {
            Ok(rec) => records.push(rec),
            Err(Error::BudgetExhausted { budget }) => {
                records.push(record(
                    name,
                    anchor,
                    "unknown".to_string(),
                    Some(format!("budget of {budget} exhausted")),
                    None,
                ));
                *exit = EXIT_BUDGET;
            }
            Err(e) => return Err(e),
        }
        Ok(())
    };

    let gtg_rec = symset::is_gtg(&u, window).map(|gtg| {
        record(
            "gtg",
            "definicion_bis_gtg",
            gtg.status.to_string(),
            (!gtg.exact).then(|| "within window".to_string()),
            gtg.witness.as_ref().map(witness_json),
        )
    });
    budget_record(
        "gtg",
        "definicion_bis_gtg",
        gtg_rec,
        &mut records,
        &mut exit,
    )?;

    let core_rec = symset::core(&u, window).and_then(|(core, exactness)| {
        let core_members = core.enumerate_window(window)?;
        Ok(record(
            "core",
            "Exampl0TG",
            match exactness {
                symset::CoreExactness::Exact => "exact".to_string(),
                symset::CoreExactness::UpperApproximation { depth } => {
                    format!("upper approximation at depth {depth}")
                }
            },
            Some(format!(
                "{} elements within window",
                core_members.elements.len()
            )),
            Some(checks::elements_json(
                u.group(),
                &core_members.elements[..core_members.elements.len().min(64)],
            )),
        ))
    });
    budget_record("core", "Exampl0TG", core_rec, &mut records, &mut exit)?;

    let sub_rec = symset::is_subgroup(&u, window).map(|sub| {
        record(
            "subgroup",
            "definicion_bis_gtg",
            sub.status.to_string(),
            (!sub.exact).then(|| "within window".to_string()),
            sub.witness.as_ref().map(witness_json),
        )
    });
    budget_record(
        "subgroup",
        "definicion_bis_gtg",
        sub_rec,
        &mut records,
        &mut exit,
    )?;

    if u.group().is_finite() {
        let nss = symset::contains_nontrivial_subgroup(&u)?;
        records.push(record(
            "small-subgroups",
            "def_nsns",
            match nss.status {
                gtg_core::window::Status::Holds => "contains a nontrivial subgroup".to_string(),
                gtg_core::window::Status::Fails => "only the trivial subgroup".to_string(),
                gtg_core::window::Status::Unknown => "unknown".to_string(),
            },
            None,
            nss.witness.as_ref().map(witness_json),
        ));
    }

    Ok(CommandOutput {
        report: Report::new("analyze-set", digest, records),
        exit_code: exit,
    })
}

pub fn cmd_build_sequence(
    group_path: &Path,
    n_max: usize,
    window: &Window,
    certificate_out: &Path,
) -> Result<CommandOutput, Error> {
    let group_text = read_file(group_path)?;
    let group_desc: GroupDescriptor = serde_json::from_str(&group_text)
        .map_err(|e| Error::Descriptor(format!("group descriptor: {e}")))?;
    let metric = group_desc.to_metric()?;
    let digest = digest_bytes(&[group_text.as_bytes()]);

    match build_almost_independent(&metric, n_max, window.budget)? {
        BuildOutcome::Built(seq) => {
            let cert = SequenceCertificate::from_sequence(&seq);
            let mut text = serde_json::to_string_pretty(&cert)?;
            text.push('\n');
            fs::write(certificate_out, text)?;
            let rec = record(
                "build",
                "Lydia_Theorem",
                "built".to_string(),
                Some(format!(
                    "{} elements; certificate written to {}",
                    seq.len(),
                    certificate_out.display()
                )),
                Some(checks::certificate_json(&seq)),
            );
            Ok(CommandOutput {
                report: Report::new("build-sequence", digest, vec![rec]),
                exit_code: EXIT_OK,
            })
        }
        BuildOutcome::NoSequenceFound {
            stage,
            reason,
            certified,
        } => {
            let rec = record(
                "build",
                "LastCorollary",
                format!("no-sequence-found at stage {stage}"),
                Some(reason),
                None,
            );
            Ok(CommandOutput {
                report: Report::new("build-sequence", digest, vec![rec]),
                exit_code: if certified { EXIT_OK } else { EXIT_BUDGET },
            })
        }
    }
}

/// Verifier-only mode: re-derives every stored certificate value and
/// re-runs the growth and independence verdicts.
pub fn cmd_verify_certificate(cert_path: &Path, window: &Window) -> Result<CommandOutput, Error> {
    let text = read_file(cert_path)?;
    let cert: SequenceCertificate =
        serde_json::from_str(&text).map_err(|e| Error::Descriptor(format!("certificate: {e}")))?;
    let seq = cert.to_sequence()?;
    if seq.is_empty() {
        return Err(Error::Descriptor(
            "certificate carries an empty prefix".into(),
        ));
    }
    let digest = digest_bytes(&[text.as_bytes()]);
    let mut records = Vec::new();
    let mut exit = EXIT_OK;

    match seq.reverify_stored(window.budget) {
        Ok(()) => records.push(record(
            "stored-values",
            "Lydia_Theorem",
            "reproduced".to_string(),
            Some(format!(
                "{} eps values and {} growth records re-derived",
                seq.stored_epsilon().len(),
                seq.stored_checks().len()
            )),
            None,
        )),
        Err(Error::Inconsistency(msg)) => {
            let mut rec = record(
                "stored-values",
                "Lydia_Theorem",
                "mismatch".to_string(),
                Some(msg),
                None,
            );
            rec.ok = false;
            records.push(rec);
            exit = EXIT_CHECK_FAILURE;
        }
        Err(e) => return Err(e),
    }

    let n_max = seq.len() - 1;
    let growth = independence::is_almost_independent(&seq, n_max, window.budget)?;
    let mut rec = record(
        "growth",
        "Lydia_Theorem",
        growth.status.to_string(),
        None,
        growth.witness.as_ref().map(witness_json),
    );
    rec.ok = growth.is_holds();
    if !rec.ok {
        exit = EXIT_CHECK_FAILURE;
    }
    records.push(rec);

    let depth = n_max.min(4);
    let near = independence::is_nearly_independent(&seq, depth, window.budget)?;
    let mut rec = record(
        "independence",
        "LastCorollary",
        near.status.to_string(),
        Some(format!("exhaustive box at depth {depth}")),
        near.witness.as_ref().map(witness_json),
    );
    rec.ok = !near.is_fails();
    if !rec.ok {
        exit = EXIT_CHECK_FAILURE;
    }
    records.push(rec);

    Ok(CommandOutput {
        report: Report::new("build-sequence --verify", digest, records),
        exit_code: exit,
    })
}

/// The level-set report of the realized topology, in the module's JSON
/// schema.
pub fn cmd_realize_topology(
    cert_path: &Path,
    depth: usize,
    eps: &str,
    window: &Window,
) -> Result<(Value, i32), Error> {
    let text = read_file(cert_path)?;
    let cert: SequenceCertificate =
        serde_json::from_str(&text).map_err(|e| Error::Descriptor(format!("certificate: {e}")))?;
    let seq = cert.to_sequence()?;
    seq.reverify_stored(window.budget)?;
    let eps_value: BigRational = parse_ratio(eps)?;
    let gs = GeneratedSet::realize(&seq, depth, window.budget)?;

    let mut levels: BTreeMap<String, Value> = BTreeMap::new();
    for (m, level) in gs.realized_levels() {
        let elems: Vec<Value> = level
            .iter()
            .map(|x| gtg_core::descriptor::element_to_json(seq.group(), x))
            .collect();
        levels.insert(m.to_string(), Value::Array(elems));
    }

    let gamma = gs.gamma_check(window.budget)?;
    let finer = gs.finer_than_metric(&eps_value, window.budget)?;
    let strict = gs.strictness_witness(window.budget)?;

    let report = json!({
        "levels": levels,
        "gamma": match gamma.witness {
            Some(Witness::GammaValue(m)) if gamma.is_holds() => json!(m),
            _ => Value::Null,
        },
        "finer": match finer.witness {
            Some(Witness::LevelIndex(m)) if finer.is_holds() => {
                json!({"eps": ratio_string(&eps_value), "m": m})
            }
            _ => Value::Null,
        },
        "strictness": {
            "odd_indices_checked": gs.odd_indices(),
            "verdict": strict.status.to_string(),
        },
        "depth": depth,
    });
    // Unknowns at shallow depths are honest outcomes; only a failing
    // verdict is a check failure.
    let failed = gamma.is_fails() || finer.is_fails() || strict.is_fails();
    Ok((report, if failed { EXIT_CHECK_FAILURE } else { EXIT_OK }))
}

pub fn cmd_check_paper(only: Option<&str>, window: &Window) -> Result<CommandOutput, Error> {
    let records = checks::run_battery(only, window)?;
    let report = Report::new("check-paper", checks::fixtures_digest(), records);
    let exit = if report.all_ok() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILURE
    };
    Ok(CommandOutput {
        report,
        exit_code: exit,
    })
}
