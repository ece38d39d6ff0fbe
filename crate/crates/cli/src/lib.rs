//! Declarative scenario runner over `equivariant-core`.
//!
//! A scenario names a group, a backend, an action and a list of analyses.
//! [`run_scenario`] validates everything up front, runs the analyses in
//! order and collects a [`Report`].

pub mod analyses;
pub mod report;
pub mod resolve;
pub mod scenario;

use std::io::Read;
use std::time::Instant;

use serde_json::Value;
use thiserror::Error;

pub use report::{emit_report, parse_report, without_timing, AnalysisResult, Format, Report, Timing, Verdict};
pub use resolve::ValidationError;
pub use scenario::Scenario;

use equivariant_core::coh::DEFAULT_BUDGET;
use equivariant_core::prep::DEFAULT_SEED;

pub const TOOLKIT: &str = "equivariantize";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Prefix of the environment variables mirroring the command-line flags.
pub const ENV_PREFIX: &str = "EQUIVARIANTIZE_";

/// Values from flags or the environment; they replace the scenario's own.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub budget: Option<usize>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse { .. } => 2,
            RunError::Validation(_) => 3,
        }
    }
}

/// Removes `//` and `/* */` comments, keeping line and column positions.
pub fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    json_comments::StripComments::new(text.as_bytes())
        .read_to_string(&mut out)
        .expect("stripping in-memory UTF-8 text");
    out
}

/// First key present in `raw` but dropped by the typed schema.
fn unknown_key(raw: &Value, typed: &Value, path: &str) -> Option<String> {
    match (raw, typed) {
        (Value::Object(r), Value::Object(t)) => r.iter().find_map(|(k, v)| match t.get(k) {
            None if !v.is_null() => Some(format!("{path}.{k}")),
            None => None,
            Some(tv) => unknown_key(v, tv, &format!("{path}.{k}")),
        }),
        (Value::Array(r), Value::Array(t)) => {
            r.iter().zip(t).enumerate().find_map(|(i, (a, b))| unknown_key(a, b, &format!("{path}[{i}]")))
        }
        _ => None,
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, RunError> {
    let clean = strip_comments(text);
    let s: Scenario = serde_json::from_str(&clean).map_err(|e| {
        let location = format!("line {} column {}", e.line(), e.column());
        let full = e.to_string();
        let message = full.strip_suffix(&format!(" at {location}")).unwrap_or(&full).to_string();
        RunError::Parse { location, message }
    })?;
    let raw: Value = serde_json::from_str(&clean).expect("already parsed");
    let typed = serde_json::to_value(&s).expect("scenarios serialize");
    if let Some(path) = unknown_key(&raw, &typed, "$") {
        return Err(RunError::Parse {
            location: path.clone(),
            message: "unknown field".into(),
        });
    }
    Ok(s)
}

fn mismatches(result: &Value, expect: &serde_json::Map<String, Value>) -> Vec<String> {
    expect
        .iter()
        .filter(|(k, v)| result.get(k.as_str()) != Some(v))
        .map(|(k, v)| {
            let got = result.get(k.as_str()).map_or("nothing".to_string(), Value::to_string);
            format!("expected {k} = {v}, got {got}")
        })
        .collect()
}

/// Validates and runs a parsed scenario.
pub fn run_parsed(scenario: &Scenario, overrides: &Overrides) -> Result<Report, RunError> {
    let start = Instant::now();
    let seed = overrides.seed.or(scenario.seed).unwrap_or(DEFAULT_SEED);
    let tolerance = overrides.tolerance.or(scenario.tolerance);
    let budget = overrides.budget.or(scenario.budget).unwrap_or(DEFAULT_BUDGET);
    let ctx = resolve::resolve(scenario, seed, tolerance, budget)?;
    let jobs = scenario
        .analyses
        .iter()
        .enumerate()
        .map(|(i, a)| {
            analyses::prepare(&ctx, &a.op).map_err(|e| ValidationError {
                invariant: e.invariant,
                message: format!("analysis {i} (`{}`): {}", a.op.name(), e.message),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut results = Vec::with_capacity(jobs.len());
    for (a, job) in scenario.analyses.iter().zip(jobs) {
        let t = Instant::now();
        let outcome = job(&ctx);
        let elapsed_ms = t.elapsed().as_secs_f64() * 1e3;
        let op = a.op.name();
        results.push(match outcome {
            Ok(o) => {
                let missed = a.expect.as_ref().map(|e| mismatches(&o.result, e)).unwrap_or_default();
                let verdict = if o.pass && missed.is_empty() { Verdict::Pass } else { Verdict::Fail };
                AnalysisResult {
                    op,
                    verdict,
                    result: o.result,
                    message: (!missed.is_empty()).then(|| missed.join("; ")),
                    stage: None,
                    elapsed_ms,
                }
            }
            Err(f) => AnalysisResult {
                op,
                verdict: Verdict::Error,
                result: Value::Null,
                message: Some(f.message),
                stage: Some(f.stage),
                elapsed_ms,
            },
        });
    }
    Ok(Report {
        toolkit: TOOLKIT.into(),
        version: VERSION.into(),
        scenario: scenario.clone(),
        seed,
        tolerance,
        budget,
        verdict: Report::overall(&results),
        results,
        timing: Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// Parses, validates and runs scenario text.
pub fn run_scenario(text: &str, overrides: &Overrides) -> Result<Report, RunError> {
    run_parsed(&parse_scenario(text)?, overrides)
}

/// Built-in fixtures and the operation table, as printed by `catalog`.
pub fn catalog() -> String {
    let mut out = String::from("fixtures (run with `equivariantize run <name>`):\n");
    for (name, what, _) in scenario::FIXTURES {
        out.push_str(&format!("  {name:<24} {what}\n"));
    }
    out.push_str("\nanalyses:\n");
    for (op, f) in scenario::CATALOG {
        out.push_str(&format!("  {op:<32} {f}\n"));
    }
    out
}

/// Scenario text of a built-in fixture.
pub fn fixture(name: &str) -> Option<&'static str> {
    scenario::FIXTURES.iter().find(|(n, _, _)| *n == name).map(|(_, _, s)| *s)
}
