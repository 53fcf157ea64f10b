//! Machine-readable run reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pairing::LogSum;

use super::model::Kind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A reported number with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "lowercase")]
pub enum NumericValue {
    /// Computed in exact arithmetic; `approx` is a binary64 rendering.
    Exact {
        name: String,
        exact: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        approx: Option<f64>,
    },
    Quadrature {
        name: String,
        value: f64,
        error_estimate: f64,
        cells_used: usize,
        excision_levels: usize,
    },
    /// Binary64 evaluation without an error model.
    Pointwise { name: String, values: Vec<f64> },
}

impl NumericValue {
    pub fn exact(name: &str, exact: impl Into<String>) -> Self {
        NumericValue::Exact {
            name: name.into(),
            exact: exact.into(),
            approx: None,
        }
    }

    pub fn log_sum(name: &str, s: &LogSum) -> Self {
        NumericValue::Exact {
            name: name.into(),
            exact: s.exact_string(),
            approx: Some(s.to_f64()),
        }
    }

    pub fn pointwise(name: &str, values: Vec<f64>) -> Self {
        NumericValue::Pointwise {
            name: name.into(),
            values,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            NumericValue::Exact { name, .. }
            | NumericValue::Quadrature { name, .. }
            | NumericValue::Pointwise { name, .. } => name,
        }
    }

    fn render(&self) -> String {
        match self {
            NumericValue::Exact { name, exact, approx: Some(a) } => format!("{name} = {exact} ~ {a:.12e}"),
            NumericValue::Exact { name, exact, approx: None } => format!("{name} = {exact}"),
            NumericValue::Quadrature {
                name,
                value,
                error_estimate,
                cells_used,
                excision_levels,
            } => format!(
                "{name} = {value:.12e} +- {error_estimate:.2e} (quadrature, {cells_used} cells, {excision_levels} excision levels)"
            ),
            NumericValue::Pointwise { name, values } => {
                let v: Vec<String> = values.iter().map(|x| format!("{x:.12e}")).collect();
                format!("{name} = [{}]", v.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub index: usize,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub verdict: Verdict,
    pub values: Vec<NumericValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub kind: Kind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub scenario: Value,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(kind: Kind, seed: u64, tol: Option<f64>, scenario: Value, cases: Vec<CaseReport>, elapsed_ms: f64) -> Self {
        let mut summary = Summary::default();
        for c in &cases {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::Error => summary.error += 1,
            }
        }
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            kind,
            seed,
            tol,
            scenario,
            cases,
            summary,
            elapsed_ms,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// A copy with every timing field zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.elapsed_ms = 0.0;
        for c in &mut r.cases {
            c.elapsed_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let tol = self.tol.map(|t| format!(" | tol {t:e}")).unwrap_or_default();
        let _ = writeln!(out, "archpair {} | {} | seed {}{tol}", self.version, self.kind, self.seed);
        for c in &self.cases {
            let verdict = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERROR",
            };
            let label = c.label.as_deref().unwrap_or("");
            let _ = writeln!(out, "{:>3} {verdict:<5} {:<13} {label}", c.index + 1, c.kind.name());
            for v in &c.values {
                let _ = writeln!(out, "      {}", v.render());
            }
            for n in &c.notes {
                let _ = writeln!(out, "      note: {n}");
            }
            if let Some(e) = &c.error {
                let _ = writeln!(out, "      error: {e}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} cases: {} pass, {} fail, {} error ({:.0} ms)",
            self.cases.len(),
            s.pass,
            s.fail,
            s.error,
            self.elapsed_ms
        );
        out
    }
}
