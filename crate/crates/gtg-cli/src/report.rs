//! Deterministic reports: identical inputs and tool version produce
//! byte-identical JSON. Per-check runtimes appear in the text rendering
//! only, so they cannot perturb the JSON artifact.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "gtg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub ok: bool,
    #[serde(skip)]
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, input_digest: String, mut checks: Vec<CheckRecord>) -> Report {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().filter(|c| c.ok).count();
        let total = checks.len();
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            input_digest,
            summary: Summary {
                total,
                passed,
                failed: total - passed,
            },
            checks,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{TOOL} {VERSION} {}\n", self.command));
        out.push_str(&format!("inputs: {}\n\n", self.input_digest));
        for c in &self.checks {
            let mark = if c.ok { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{mark} {} ({}) -> {}",
                c.name, c.anchor, c.verdict
            ));
            if let Some(d) = &c.detail {
                out.push_str(&format!("; {d}"));
            }
            out.push_str(&format!(" [{} ms]\n", c.runtime_ms));
            if !c.ok {
                if let Some(w) = &c.witness {
                    out.push_str(&format!("     witness: {w}\n"));
                }
            }
        }
        out.push_str(&format!(
            "\n{} checks: {} passed, {} failed\n",
            self.summary.total, self.summary.passed, self.summary.failed
        ));
        out
    }
}

pub fn digest_bytes(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p);
    }
    format!("sha256:{:x}", hasher.finalize())
}
