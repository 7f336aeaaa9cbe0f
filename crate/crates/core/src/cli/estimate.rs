//! Ratio tables for the derivative bounds and empirical norm probes for the
//! phase, modulus and simplex-symbol transforms.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{Artifact, Config, Outcome};
use crate::deriv::{main_estimate_experiment, ExperimentParams, RatioKind, RatioReport};
use crate::moi::{estimate_multilinear_norm, EstimateOptions, MoiOperator, MoiSymbol, Region};
use crate::numlin::random::{child_seed, stream};
use crate::numlin::random_unitary;
use crate::poly::{Polynomial, SymbolPhi};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateKind {
    /// `r1` and `r2` ratios of path derivatives (needs `alpha > n`).
    Main,
    /// Only the trace ratio `r2` (allows `alpha = n`).
    Trace,
    /// Norm of `T_{phi_{h,m}}` on `S^alpha`.
    Indbase,
    /// Norm of `T_{phi_{n,h,m,k}}: S^{n alpha} x .. x S^{n alpha} -> S^alpha`.
    Indstep,
    /// Norms of the phase transform `Upsilon_m` and the modulus transform `Gamma_s` on `S^alpha`.
    Kpss,
}

impl FromStr for EstimateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Self::Main),
            "trace" => Ok(Self::Trace),
            "indbase" => Ok(Self::Indbase),
            "indstep" => Ok(Self::Indstep),
            "kpss" => Ok(Self::Kpss),
            _ => Err(Error::Parse(format!("unknown estimate kind '{s}' (main, trace, indbase, indstep, kpss)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateParams {
    pub kind: EstimateKind,
    pub dims: Vec<usize>,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    /// Weight or phase exponent `m` of the probed symbol.
    pub m: usize,
    /// Second weight exponent `k` of `phi_{n,h,m,k}`.
    pub k: usize,
    /// Modulus exponent `s` of `Gamma_s`.
    pub s: f64,
    /// Degree of the random polynomial `h`.
    pub degh: usize,
    /// Random starts of the norm estimator per probe cell.
    pub starts: usize,
    pub polish: usize,
}

const KEYS: &[&str] =
    &["kind", "dims", "dim", "n", "alpha", "trials", "seed", "m", "k", "s", "degh", "starts", "polish", "out"];

impl EstimateParams {
    pub fn from_config(c: &Config) -> Result<Self> {
        c.check_keys(KEYS)?;
        let kind = c.get_or("kind", EstimateKind::Main)?;
        let dims = match (c.get_list::<usize>("dims")?, c.get::<usize>("dim")?) {
            (Some(d), _) => d,
            (None, Some(d)) => vec![d],
            (None, None) => vec![8, 16, 32],
        };
        let probe = !matches!(kind, EstimateKind::Main | EstimateKind::Trace);
        let p = Self {
            kind,
            dims,
            n: c.get_or("n", 2)?,
            alpha: c.get_or("alpha", 3.0)?,
            trials: c.get_or("trials", if probe { 3 } else { 20 })?,
            seed: c.get_or("seed", 0)?,
            m: c.get_or("m", 1)?,
            k: c.get_or("k", 0)?,
            s: c.get_or("s", 1.0)?,
            degh: c.get_or("degh", 4)?,
            starts: c.get_or("starts", 4)?,
            polish: c.get_or("polish", 3)?,
        };
        if p.dims.is_empty() || p.dims.contains(&0) || p.trials == 0 || p.n == 0 || p.starts == 0 {
            return Err(Error::InvalidArgument("dims, trials, n and starts must be positive".into()));
        }
        if probe && !(p.alpha > 1.0 && p.alpha.is_finite()) {
            return Err(Error::InvalidExponent(p.alpha));
        }
        Ok(p)
    }

    fn experiment(&self) -> ExperimentParams {
        let mut e = ExperimentParams::new(self.dims.clone(), self.n, self.alpha, self.trials, self.seed);
        e.kind = if self.kind == EstimateKind::Trace { RatioKind::Trace } else { RatioKind::Both };
        e
    }
}

#[derive(Serialize)]
struct RatioEnvelope<'a> {
    command: &'static str,
    config: &'a EstimateParams,
    #[serde(flatten)]
    report: &'a RatioReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeCell {
    pub dim: usize,
    pub trial: usize,
    pub transform: String,
    /// Lower bound for the transform norm.
    pub value: f64,
    /// Certified sup of the symbol, when available.
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSummary {
    pub dim: usize,
    pub transform: String,
    pub max_value: f64,
    pub max_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub command: &'static str,
    pub config: EstimateParams,
    pub cells: Vec<ProbeCell>,
    pub summary: Vec<ProbeSummary>,
}

impl ProbeReport {
    pub fn all_finite(&self) -> bool {
        self.cells.iter().all(|c| c.value.is_finite() && c.ratio.is_none_or(f64::is_finite))
    }
}

fn probe_cell(p: &EstimateParams, dim: usize, trial: usize) -> Result<Vec<ProbeCell>> {
    let seed = child_seed(p.seed, &format!("probe/{:?}/{dim}/{trial}", p.kind));
    let spec = random_unitary(dim, child_seed(seed, "spec"))?;
    let h = Polynomial::random(&mut stream(seed, "h"), p.degh);
    let transforms: Vec<(String, MoiSymbol, Vec<f64>)> = match p.kind {
        EstimateKind::Indbase => {
            vec![(format!("phihm:{}", p.m), MoiSymbol::PhiHm { h, m: p.m }, vec![p.alpha])]
        }
        EstimateKind::Indstep => {
            let sym = SymbolPhi::new(p.n, h, p.m, p.k)?;
            vec![(format!("phi:{},{},{}", p.n, p.m, p.k), MoiSymbol::Phi(sym), vec![p.n as f64 * p.alpha; p.n])]
        }
        EstimateKind::Kpss => vec![
            (format!("psi:{}", p.m), MoiSymbol::Phase { arity: 2, i: 0, j: 1, power: p.m as i32 }, vec![p.alpha]),
            (format!("gamma:{}", p.s), MoiSymbol::ModulusPower { arity: 2, i: 0, j: 1, s: p.s }, vec![p.alpha]),
        ],
        EstimateKind::Main | EstimateKind::Trace => unreachable!("ratio kinds are not probes"),
    };
    let opts = EstimateOptions { trials: p.starts, seed: child_seed(seed, "starts"), polish_rounds: p.polish };
    let mut cells = Vec::new();
    for (name, sym, alphas) in transforms {
        let bound = sym.bound();
        let op = MoiOperator::new(&spec, sym, Region::Full)?;
        let est = estimate_multilinear_norm(&op, &alphas, opts)?;
        let ratio = bound.filter(|&b| b > 0.0).map(|b| est.value / b);
        cells.push(ProbeCell { dim, trial, transform: name, value: est.value, bound, ratio });
    }
    Ok(cells)
}

fn run_probes(p: &EstimateParams) -> Result<ProbeReport> {
    let keys: Vec<(usize, usize)> = p.dims.iter().flat_map(|&d| (0..p.trials).map(move |t| (d, t))).collect();
    let cells: Vec<ProbeCell> =
        keys.par_iter().map(|&(d, t)| probe_cell(p, d, t)).collect::<Result<Vec<_>>>()?.concat();
    let mut summary: Vec<ProbeSummary> = Vec::new();
    for c in &cells {
        match summary.iter_mut().find(|s| s.dim == c.dim && s.transform == c.transform) {
            Some(s) => {
                s.max_value = s.max_value.max(c.value);
                s.max_ratio = match (s.max_ratio, c.ratio) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                };
            }
            None => summary.push(ProbeSummary {
                dim: c.dim,
                transform: c.transform.clone(),
                max_value: c.value,
                max_ratio: c.ratio,
            }),
        }
    }
    Ok(ProbeReport { command: "estimate", config: p.clone(), cells, summary })
}

fn csv_bytes(rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn probe_artifacts(r: &ProbeReport) -> Result<Vec<Artifact>> {
    let mut cells = vec![["dim", "trial", "transform", "value", "bound", "ratio"].map(String::from).to_vec()];
    for c in &r.cells {
        cells.push(vec![
            c.dim.to_string(),
            c.trial.to_string(),
            c.transform.clone(),
            c.value.to_string(),
            opt(c.bound),
            opt(c.ratio),
        ]);
    }
    let mut summary = vec![["dim", "transform", "max_value", "max_ratio"].map(String::from).to_vec()];
    for s in &r.summary {
        summary.push(vec![s.dim.to_string(), s.transform.clone(), s.max_value.to_string(), opt(s.max_ratio)]);
    }
    Ok(vec![
        Artifact { name: "cells.csv".into(), bytes: csv_bytes(cells)? },
        Artifact { name: "summary.csv".into(), bytes: csv_bytes(summary)? },
    ])
}

fn ratio_artifacts(r: &RatioReport) -> Result<Vec<Artifact>> {
    let mut cells = Vec::new();
    r.write_cells_csv(&mut cells)?;
    let mut summary = Vec::new();
    r.write_summary_csv(&mut summary)?;
    Ok(vec![
        Artifact { name: "cells.csv".into(), bytes: cells },
        Artifact { name: "summary.csv".into(), bytes: summary },
    ])
}

fn estimate(p: &EstimateParams) -> Result<Outcome> {
    match p.kind {
        EstimateKind::Main | EstimateKind::Trace => {
            let r = main_estimate_experiment(&p.experiment())?;
            let env = RatioEnvelope { command: "estimate", config: p, report: &r };
            Ok(Outcome::from_report(r.all_finite(), &env, ratio_artifacts(&r)?))
        }
        _ => {
            let r = run_probes(p)?;
            Ok(Outcome::from_report(r.all_finite(), &r, probe_artifacts(&r)?))
        }
    }
}

/// Emits `report.json`, `cells.csv` and `summary.csv` (one row per dimension
/// and transform). Fails numerically only on NaN or infinite ratios.
pub fn cmd_estimate(config: &Config) -> Outcome {
    match EstimateParams::from_config(config).and_then(|p| estimate(&p)) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(&e),
    }
}
