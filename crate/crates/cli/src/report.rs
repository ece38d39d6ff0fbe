//! Reports and their serializations.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub op: String,
    pub verdict: Verdict,
    /// Computed values; `null` on error.
    pub result: Value,
    /// Failed expectations or the error message.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Library stage that raised the error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub toolkit: String,
    pub version: String,
    pub scenario: Scenario,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub budget: usize,
    pub results: Vec<AnalysisResult>,
    pub verdict: Verdict,
    pub timing: Timing,
}

impl Report {
    /// `error` beats `fail` beats `pass`; no analyses is a pass.
    pub fn overall(results: &[AnalysisResult]) -> Verdict {
        if results.iter().any(|r| r.verdict == Verdict::Error) {
            Verdict::Error
        } else if results.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn one_line(v: &Value, limit: usize) -> String {
    let s = v.to_string();
    match s.char_indices().nth(limit) {
        Some((i, _)) => format!("{}…", &s[..i]),
        None => s,
    }
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let name = r.scenario.name.as_deref().unwrap_or("(unnamed)");
            out.push_str(&format!("{} {} scenario {name}\n", r.toolkit, r.version));
            let tol = r.tolerance.map_or("default".to_string(), |t| format!("{t:e}"));
            out.push_str(&format!("seed {} tolerance {tol} budget {}\n", r.seed, r.budget));
            for a in &r.results {
                out.push_str(&format!("{} {} ({:.1} ms)\n", a.verdict.label(), a.op, a.elapsed_ms));
                if let Some(st) = &a.stage {
                    out.push_str(&format!("    stage: {st}\n"));
                }
                if let Some(m) = &a.message {
                    out.push_str(&format!("    {m}\n"));
                }
                if !a.result.is_null() {
                    out.push_str(&format!("    {}\n", one_line(&a.result, 400)));
                }
            }
            out.push_str(&format!(
                "verdict {} ({} analyses, {:.1} ms)\n",
                r.verdict.label(),
                r.results.len(),
                r.timing.total_ms
            ));
            out
        }
    }
}

pub fn parse_report(json: &str) -> serde_json::Result<Report> {
    serde_json::from_str(json)
}

/// The report as JSON with every timing field removed.
pub fn without_timing(r: &Report) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    strip_timing(&mut v);
    v
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing");
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
