//! Tabular summaries of reports written by the other commands.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;

use super::{Artifact, Config, ExitStatus, Outcome};
use crate::{Error, Result};

#[derive(Serialize)]
struct Summary {
    command: &'static str,
    input: PathBuf,
    source_command: String,
    pass: Option<bool>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn table(items: Option<&Value>, fields: &[&str]) -> Vec<Vec<String>> {
    items
        .and_then(Value::as_array)
        .map(|a| a.iter().map(|it| fields.iter().map(|f| cell(it.get(*f))).collect()).collect())
        .unwrap_or_default()
}

fn summarize(input: PathBuf, v: &Value) -> Result<Summary> {
    let source = v
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("report has no 'command' field".into()))?
        .to_string();
    let (header, rows): (&[&str], Vec<Vec<String>>) = match source.as_str() {
        "verify" => {
            let h: &[&str] = &["name", "instances", "max_residual", "tolerance", "pass"];
            (h, table(v.get("checks"), h))
        }
        "estimate" => match v.get("summary") {
            Some(Value::Array(_)) => {
                let h: &[&str] = &["dim", "transform", "max_value", "max_ratio"];
                (h, table(v.get("summary"), h))
            }
            Some(s) => {
                let h: &[&str] = &["dim", "r1", "r2"];
                (h, table(s.get("per_dim_max"), h))
            }
            None => return Err(Error::Parse("estimate report has no summary".into())),
        },
        "ssf" => {
            let h: &[&str] = &["n", "K", "dim", "l1_estimate", "vnorm_n", "round_trip", "trace_residual_max"];
            (h, vec![h.iter().map(|f| cell(v.get(*f))).collect()])
        }
        other => return Err(Error::Parse(format!("unknown report command '{other}'"))),
    };
    Ok(Summary {
        command: "report",
        input,
        pass: v.get("pass").and_then(Value::as_bool),
        source_command: source,
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn run(config: &Config) -> Result<Outcome> {
    config.check_keys(&["input", "out"])?;
    let input: PathBuf = config.get("input")?.ok_or_else(|| Error::Parse("report needs --input".into()))?;
    let value: Value = serde_json::from_str(&std::fs::read_to_string(&input)?)?;
    let s = summarize(input, &value)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&s.header)?;
    for r in &s.rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let mut out = Outcome::from_report(s.pass != Some(false), &s, vec![Artifact { name: "summary.csv".into(), bytes }]);
    // Keep the source report intact when writing into the same directory.
    out.artifacts.retain(|a| a.name != "report.json");
    out.artifacts.push(Artifact { name: "report_summary.json".into(), bytes: out.report.clone().into_bytes() });
    if s.pass == Some(false) {
        out.status = ExitStatus::NumericalFailure;
        out.message = Some("the summarized report records a failure".into());
    }
    Ok(out)
}

/// Reads a JSON report (`--input`) and tabulates its checks or summary.
pub fn cmd_report(config: &Config) -> Outcome {
    run(config).unwrap_or_else(|e| Outcome::from_error(&e))
}
