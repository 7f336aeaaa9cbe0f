//! Ratio experiments for the Schatten and trace bounds on path derivatives.
//!
//! For a contraction pair and a random polynomial `f` the runner records
//!
//! ```text
//! r1 = ||d^n f(U_t0)||_{alpha/n} / (||f^(n)||_inf ||V||_alpha^n)
//! r2 = |tr d^n f(U_t0)|          / (||f^(n)||_inf ||V||_n^n)
//! ```
//!
//! Bounded ratios across dimensions are the expected trend. The constants of
//! the bounds are not known, so nothing here passes or fails on a threshold.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PathExpansion;
use crate::numlin::random::{child_seed, random_path, stream};
use crate::numlin::{schatten_norm, ContractionPair, PairOptions};
use crate::poly::Polynomial;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    /// Only `r1`; needs `alpha > n`.
    Norm,
    /// Only `r2`; `alpha` is not used.
    Trace,
    Both,
}

impl RatioKind {
    fn norm(self) -> bool {
        matches!(self, RatioKind::Norm | RatioKind::Both)
    }

    fn trace(self) -> bool {
        matches!(self, RatioKind::Trace | RatioKind::Both)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentParams {
    pub dims: Vec<usize>,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub kind: RatioKind,
    pub max_degree: usize,
}

impl ExperimentParams {
    pub fn new(dims: Vec<usize>, n: usize, alpha: f64, trials: usize, seed: u64) -> Self {
        Self { dims, n, alpha, trials, seed, kind: RatioKind::Both, max_degree: 16 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.max_degree < self.n {
            return Err(Error::InvalidArgument(format!("max degree {} is below n = {}", self.max_degree, self.n)));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidArgument("dims must be a non-empty list of positive sizes".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.kind.norm() && (self.alpha.is_nan() || self.alpha <= self.n as f64) {
            return Err(Error::InvalidArgument(format!(
                "the norm ratio needs alpha > n, got alpha = {} and n = {}",
                self.alpha, self.n
            )));
        }
        if self.kind.trace() && (self.alpha.is_nan() || self.alpha < self.n as f64) {
            return Err(Error::InvalidArgument(format!("alpha = {} is below n = {}", self.alpha, self.n)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioCell {
    pub dim: usize,
    pub trial: usize,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub t0: f64,
    pub degf: usize,
    /// `V = 0`; both ratios are reported as 0.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimMax {
    pub dim: usize,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimQuantile {
    pub dim: usize,
    pub q: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioSummary {
    pub per_dim_max: Vec<DimMax>,
    pub quantiles: Vec<DimQuantile>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub params: ExperimentParams,
    pub cells: Vec<RatioCell>,
    pub summary: RatioSummary,
}

pub const REPORTED_QUANTILES: [f64; 3] = [0.5, 0.9, 0.99];

/// Ratios `(r1, r2)` for one path, `f` and `t0`; both are 0 when `V = 0`.
pub fn path_ratios(
    pair: &ContractionPair,
    f: &Polynomial,
    n: usize,
    alpha: f64,
    t0: f64,
    kind: RatioKind,
) -> Result<(Option<f64>, Option<f64>, bool)> {
    let vn = schatten_norm(pair.v(), n as f64)?;
    if vn == 0.0 {
        return Ok((kind.norm().then_some(0.0), kind.trace().then_some(0.0), true));
    }
    let fsup = f.derivative(n).sup_norm_circle();
    let der = PathExpansion::new(pair, f).derivative(n, t0);
    let r1 = if kind.norm() {
        let va = schatten_norm(pair.v(), alpha)?;
        Some(schatten_norm(&der, alpha / n as f64)? / (fsup * va.powi(n as i32)))
    } else {
        None
    };
    let r2 = kind.trace().then(|| der.trace().norm() / (fsup * vn.powi(n as i32)));
    Ok((r1, r2, false))
}

fn run_cell(params: &ExperimentParams, dim: usize, trial: usize) -> Result<RatioCell> {
    let seed = child_seed(params.seed, &format!("main/{dim}/{trial}"));
    let (u0, u1, _) = random_path(dim, seed, PairOptions::default())?;
    let pair = ContractionPair::from_endpoints(u0, u1)?;
    let mut rng = stream(seed, "cell");
    let degf = rng.random_range(params.n..=params.max_degree);
    let f = Polynomial::random(&mut rng, degf);
    let t0: f64 = rng.random();
    let (r1, r2, skipped) = path_ratios(&pair, &f, params.n, params.alpha, t0, params.kind)?;
    Ok(RatioCell { dim, trial, r1, r2, t0, degf, skipped })
}

fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

fn summarize(params: &ExperimentParams, cells: &[RatioCell]) -> RatioSummary {
    let mut per_dim_max = Vec::new();
    let mut quantiles = Vec::new();
    for &dim in &params.dims {
        let sorted = |pick: fn(&RatioCell) -> Option<f64>| {
            let mut v: Vec<f64> = cells.iter().filter(|c| c.dim == dim).filter_map(pick).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let r1 = sorted(|c| c.r1);
        let r2 = sorted(|c| c.r2);
        per_dim_max.push(DimMax { dim, r1: r1.last().copied(), r2: r2.last().copied() });
        for q in REPORTED_QUANTILES {
            quantiles.push(DimQuantile { dim, q, r1: quantile(&r1, q), r2: quantile(&r2, q) });
        }
    }
    RatioSummary { per_dim_max, quantiles }
}

/// Runs every `(dim, trial)` cell in parallel; cells come back ordered by key.
pub fn main_estimate_experiment(params: &ExperimentParams) -> Result<RatioReport> {
    params.validate()?;
    let keys: Vec<(usize, usize)> = params.dims.iter().flat_map(|&d| (0..params.trials).map(move |t| (d, t))).collect();
    let cells = keys.par_iter().map(|&(d, t)| run_cell(params, d, t)).collect::<Result<Vec<_>>>()?;
    let summary = summarize(params, &cells);
    Ok(RatioReport { params: params.clone(), cells, summary })
}

impl RatioReport {
    /// Cells as CSV with header `dim,trial,r1,r2,t0,degf`; missing ratios are empty fields.
    pub fn write_cells_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["dim", "trial", "r1", "r2", "t0", "degf"])?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for c in &self.cells {
            w.write_record([
                c.dim.to_string(),
                c.trial.to_string(),
                opt(c.r1),
                opt(c.r2),
                c.t0.to_string(),
                c.degf.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One row per dimension: `dim,r1_max,r2_max`.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["dim", "r1_max", "r2_max"])?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for m in &self.summary.per_dim_max {
            w.write_record([m.dim.to_string(), opt(m.r1), opt(m.r2)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.cells.iter().all(|c| c.r1.is_none_or(f64::is_finite) && c.r2.is_none_or(f64::is_finite))
    }
}
