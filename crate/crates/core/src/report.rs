//! Machine-readable check reports.
//!
//! Reports are deterministic for identical input: rationals are serialized as
//! canonical `"p/q"` strings, JSON objects are emitted with sorted keys, and
//! wall-clock timing appears only in the text rendering, never in the JSON.

use serde::Serialize;

use crate::exact::rational::{self, Rational};

/// Verdict of one check.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A prerequisite was unmet; the reason says which.
    Skipped,
    /// The check does not apply to this window shape.
    NotApplicable,
}

/// Exact failure witness: which identifier, at which index, with what value.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Witness {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Witness {
    pub fn new(id: impl Into<String>) -> Self {
        Witness {
            id: id.into(),
            i: None,
            n: None,
            value: None,
        }
    }

    pub fn at_n(mut self, n: usize) -> Self {
        self.n = Some(n as i64);
        self
    }

    pub fn at_i(mut self, i: usize) -> Self {
        self.i = Some(i as i64);
        self
    }

    pub fn with_value(mut self, v: &Rational) -> Self {
        self.value = Some(rational::to_string(v));
        self
    }
}

/// Result of one named check.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
}

impl CheckResult {
    pub fn new(name: &str, status: CheckStatus) -> Self {
        CheckResult {
            name: name.to_string(),
            status,
            reason: None,
            witnesses: Vec::new(),
            data: serde_json::Value::Null,
            annotations: Vec::new(),
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        let mut r = CheckResult::new(name, CheckStatus::Skipped);
        r.reason = Some(reason.into());
        r
    }

    pub fn not_applicable(name: &str, reason: impl Into<String>) -> Self {
        let mut r = CheckResult::new(name, CheckStatus::NotApplicable);
        r.reason = Some(reason.into());
        r
    }

    pub fn ok(&self) -> bool {
        matches!(self.status, CheckStatus::Pass | CheckStatus::NotApplicable)
    }
}

/// What the pipeline knew about the instance before running checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct InstanceSummary {
    pub n_window: usize,
    pub m_window: usize,
    pub n_max: usize,
    /// Truncation depth of the `u` moments actually in use.
    pub horizon_u: usize,
    /// Truncation depth of the `v` moments, when `v` exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon_v: Option<usize>,
    pub p_source: String,
    /// "given", "derived", or "unavailable: <reason>".
    pub v_status: String,
}

/// Full pipeline output.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PipelineReport {
    pub instance: InstanceSummary,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl PipelineReport {
    pub fn compute_pass(checks: &[CheckResult]) -> bool {
        checks.iter().all(CheckResult::ok)
    }

    /// Canonical JSON: sorted keys, exact rationals as strings, no timing.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serialization cannot fail");
        let mut out = serde_json::to_string_pretty(&value).expect("valid json");
        out.push('\n');
        out
    }

    /// Human-readable summary, one line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "instance: N = {}, M = {}, n_max = {}, K_u = {}{}\n",
            self.instance.n_window,
            self.instance.m_window,
            self.instance.n_max,
            self.instance.horizon_u,
            match self.instance.horizon_v {
                Some(k) => format!(", K_v = {k}"),
                None => String::new(),
            }
        ));
        out.push_str(&format!(
            "p source: {}; v: {}\n",
            self.instance.p_source, self.instance.v_status
        ));
        for check in &self.checks {
            let tag = match check.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
                CheckStatus::NotApplicable => "N/A ",
            };
            out.push_str(&format!("[{tag}] {}", check.name));
            if let Some(reason) = &check.reason {
                out.push_str(&format!(" — {reason}"));
            }
            out.push('\n');
            for w in &check.witnesses {
                out.push_str("      witness: ");
                out.push_str(&w.id);
                if let Some(i) = w.i {
                    out.push_str(&format!(", i = {i}"));
                }
                if let Some(n) = w.n {
                    out.push_str(&format!(", n = {n}"));
                }
                if let Some(v) = &w.value {
                    out.push_str(&format!(", value = {v}"));
                }
                out.push('\n');
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Serializes a rational list as canonical strings (ascending coefficients
/// for polynomials).
pub fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::to_string).collect()
}
