//! Structured pass/fail reporting.
//!
//! Every condition a checker evaluates becomes a [`CheckEntry`]: a verdict,
//! whether it was established symbolically or by seeded sampling, the
//! residual when numeric, and an optional witness. Reports are deterministic
//! given (input, seed, tool version) — entry order is fixed and all sampling
//! is seed-derived — so serialized documents are byte-identical across runs.

use serde::Serialize;

use crate::expr::{Expr, Tri};
use crate::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofMode {
    Symbolic,
    Sampled,
}

/// One checked condition.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub verdict: Verdict,
    pub proof_mode: ProofMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckEntry {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            verdict: Verdict::Pass,
            proof_mode: ProofMode::Symbolic,
            residual: None,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            verdict: Verdict::Fail,
            proof_mode: ProofMode::Symbolic,
            residual: None,
            witness: Some(witness.into()),
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            verdict: Verdict::Skipped,
            proof_mode: ProofMode::Symbolic,
            residual: None,
            witness: Some(why.into()),
        }
    }

    /// Check that an expression is zero: symbolic tri-state first, then a
    /// seeded numeric sweep when the symbolic answer is `Unknown`.
    pub fn zero_residual(name: impl Into<String>, e: &Expr, cfg: &Config) -> Self {
        let name = name.into();
        match e.is_zero(cfg) {
            Tri::Zero => CheckEntry {
                name,
                verdict: Verdict::Pass,
                proof_mode: ProofMode::Symbolic,
                residual: Some(0.0),
                witness: None,
            },
            Tri::NonZero => CheckEntry {
                name,
                verdict: Verdict::Fail,
                proof_mode: ProofMode::Symbolic,
                residual: None,
                witness: Some(format!("nonzero: {e}")),
            },
            Tri::Unknown => match max_abs_sample(e, cfg) {
                Some(max) if max < cfg.tol => CheckEntry {
                    name,
                    verdict: Verdict::Pass,
                    proof_mode: ProofMode::Sampled,
                    residual: Some(max),
                    witness: None,
                },
                Some(max) => CheckEntry {
                    name,
                    verdict: Verdict::Fail,
                    proof_mode: ProofMode::Sampled,
                    residual: Some(max),
                    witness: Some(format!("sampled residual {max:e} >= tol")),
                },
                None => CheckEntry {
                    name,
                    verdict: Verdict::Unknown,
                    proof_mode: ProofMode::Sampled,
                    residual: None,
                    witness: Some("no admissible sample point found".into()),
                },
            },
        }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Maximum |e| over the configured number of seeded rational sample points;
/// None when every attempted point was singular.
pub fn max_abs_sample(e: &Expr, cfg: &Config) -> Option<f64> {
    let vars: Vec<_> = e.free_vars().into_iter().collect();
    let mut max: Option<f64> = None;
    for round in 0..cfg.samples {
        for retry in 0..=cfg.zero_retries {
            let val = crate::expr::sample_valuation(&vars, cfg.seed, round, retry);
            if let Ok(v) = e.eval_f64(&val) {
                let a = v.abs();
                max = Some(max.map_or(a, |m: f64| m.max(a)));
                break;
            }
        }
    }
    max
}

/// An ordered collection of check entries.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(CheckEntry::is_pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries
            .iter()
            .filter(|e| e.verdict == Verdict::Fail)
    }

    /// Overall verdict: fail beats unknown beats pass; skipped entries do
    /// not count against a pass.
    pub fn overall(&self) -> Verdict {
        let mut out = Verdict::Pass;
        for e in &self.entries {
            match e.verdict {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Unknown => out = Verdict::Unknown,
                _ => {}
            }
        }
        out
    }
}

/// Top-level JSON document emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub input_hash: String,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub verdict: Verdict,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReportDocument {
    pub fn new(input_hash: String, cfg: &Config, checks: CheckReport, notes: Vec<String>) -> Self {
        ReportDocument {
            schema_version: 1,
            tool: "jetflow",
            tool_version: env!("CARGO_PKG_VERSION"),
            input_hash,
            seed: cfg.seed,
            samples: cfg.samples,
            tol: cfg.tol,
            verdict: checks.overall(),
            checks: checks.entries,
            notes,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// Exit-code contract: 0 pass, 1 fail, 2 unknown.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::Skipped => 0,
            Verdict::Fail => 1,
            Verdict::Unknown => 2,
        }
    }
}
