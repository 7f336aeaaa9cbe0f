//! Reproducible experiment workflows behind the `ssflab` binary.
//!
//! Every command takes a resolved [`Config`] and returns an [`Outcome`]: an
//! exit status, a JSON report embedding the resolved parameters, and any
//! CSV artifacts. Nothing is written until [`Outcome::write`] is called, so
//! the commands are usable as library calls.
//!
//! Exit statuses: 0 pass, 1 numerical failure, 2 usage or configuration error.

mod config;
mod estimate;
mod report;
mod ssf;
mod verify;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::Config;
pub use estimate::{cmd_estimate, EstimateKind, EstimateParams, ProbeCell, ProbeReport};
pub use report::cmd_report;
pub use ssf::{cmd_ssf, SsfParams};
pub use verify::{cmd_verify, CheckResult, Offender, Suite, VerifyParams, VerifyReport};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Pass = 0,
    NumericalFailure = 1,
    Usage = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A named output file.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    /// Pretty-printed JSON report, empty for usage errors.
    pub report: String,
    pub artifacts: Vec<Artifact>,
    /// Human-readable reason for a non-zero status.
    pub message: Option<String>,
}

impl Outcome {
    pub(crate) fn from_report<T: Serialize>(pass: bool, report: &T, artifacts: Vec<Artifact>) -> Self {
        let report = to_json(report);
        Self {
            status: if pass { ExitStatus::Pass } else { ExitStatus::NumericalFailure },
            artifacts: std::iter::once(Artifact { name: "report.json".into(), bytes: report.clone().into_bytes() })
                .chain(artifacts)
                .collect(),
            report,
            message: (!pass).then(|| "one or more residuals exceed tolerance".into()),
        }
    }

    pub(crate) fn from_error(e: &Error) -> Self {
        Self { status: classify(e), report: String::new(), artifacts: Vec::new(), message: Some(e.to_string()) }
    }

    pub fn artifact(&self, name: &str) -> Option<&[u8]> {
        self.artifacts.iter().find(|a| a.name == name).map(|a| a.bytes.as_slice())
    }

    /// Writes all artifacts into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for a in &self.artifacts {
            let p = dir.join(&a.name);
            std::fs::write(&p, &a.bytes)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Configuration and input problems are usage errors; everything else is numerical.
pub fn classify(e: &Error) -> ExitStatus {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::InvalidExponent(_)
        | Error::InsufficientTruncation { .. }
        | Error::ArityMismatch { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotContraction(_)
        | Error::InfeasibleTarget { .. }
        | Error::BudgetExceeded { .. }
        | Error::Io(_)
        | Error::Json(_) => ExitStatus::Usage,
        _ => ExitStatus::NumericalFailure,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Estimate,
    Ssf,
    Report,
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "verify" => Ok(Command::Verify),
            "estimate" => Ok(Command::Estimate),
            "ssf" => Ok(Command::Ssf),
            "report" => Ok(Command::Report),
            _ => Err(Error::Parse(format!("unknown command '{s}'"))),
        }
    }
}

pub fn run(command: Command, config: &Config) -> Outcome {
    match command {
        Command::Verify => cmd_verify(config),
        Command::Estimate => cmd_estimate(config),
        Command::Ssf => cmd_ssf(config),
        Command::Report => cmd_report(config),
    }
}
