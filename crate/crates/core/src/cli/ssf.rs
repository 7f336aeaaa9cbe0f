//! Reconstruction and verification of the spectral shift series for one pair.

use std::path::PathBuf;

use rand::Rng;
use serde::Serialize;

use super::{Artifact, Config, Outcome};
use crate::numlin::random::{child_seed, random_path, stream};
use crate::numlin::{ContractionPair, PairOptions};
use crate::poly::Polynomial;
use crate::ssf::{check_truncation, moment_round_trip, reconstruct_with_moments, trace_formula_residual, SsfReport};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SsfParams {
    /// Used for random pairs; a pair read from `input` sets its own dimension.
    pub dim: usize,
    pub n: usize,
    #[serde(rename = "K")]
    pub truncation: usize,
    pub seed: u64,
    /// JSON file `{"u0": matrix, "v": matrix}`.
    pub input: Option<PathBuf>,
    /// Random test polynomials of degree `<= K + n` for the trace formula.
    pub polys: usize,
    /// Trace-formula tolerance.
    pub tolerance: f64,
    pub round_trip_tolerance: f64,
    /// Degree the truncation must cover; rejected up front when `> K + n`.
    pub check_degree: Option<usize>,
}

const KEYS: &[&str] =
    &["dim", "n", "K", "seed", "input", "polys", "tolerance", "round_trip_tolerance", "check_degree", "out"];

impl SsfParams {
    pub fn from_config(c: &Config) -> Result<Self> {
        c.check_keys(KEYS)?;
        let p = Self {
            dim: c.get_or("dim", 12)?,
            n: c.get_or("n", 3)?,
            truncation: c.get_or("K", 16)?,
            seed: c.get_or("seed", 7)?,
            input: c.get("input")?,
            polys: c.get_or("polys", 20)?,
            tolerance: c.get_or("tolerance", 1e-8)?,
            round_trip_tolerance: c.get_or("round_trip_tolerance", 1e-10)?,
            check_degree: c.get("check_degree")?,
        };
        if p.n == 0 || p.truncation == 0 || p.dim == 0 {
            return Err(Error::InvalidArgument("dim, n and K must be positive".into()));
        }
        if let Some(deg) = p.check_degree {
            check_truncation(p.n, p.truncation, deg)?;
        }
        Ok(p)
    }

    fn pair(&self) -> Result<ContractionPair> {
        match &self.input {
            Some(path) => Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?),
            None => {
                let (u0, u1, _) = random_path(self.dim, child_seed(self.seed, "ssf/pair"), PairOptions::default())?;
                ContractionPair::from_endpoints(u0, u1)
            }
        }
    }
}

#[derive(Serialize)]
struct SsfCommandReport<'a> {
    command: &'static str,
    config: &'a SsfParams,
    #[serde(flatten)]
    series: SsfReport,
    round_trip: f64,
    trace_samples: Vec<TraceSample>,
    trace_residual_max: f64,
    /// `|c_j|` for `j = 1 ..`.
    decay: Vec<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct TraceSample {
    degree: Option<usize>,
    residual: f64,
}

fn run(p: &SsfParams) -> Result<Outcome> {
    let pair = p.pair()?;
    let rec = reconstruct_with_moments(&pair, p.n, p.truncation)?;
    let round_trip = moment_round_trip(&rec)?;
    let mut rng = stream(child_seed(p.seed, "ssf/polys"), "polys");
    let mut trace_samples = Vec::with_capacity(p.polys);
    for _ in 0..p.polys {
        let deg = rng.random_range(0..=p.truncation + p.n);
        let f = Polynomial::random(&mut rng, deg);
        trace_samples
            .push(TraceSample { degree: f.degree(), residual: trace_formula_residual(&pair, &f, &rec.series)? });
    }
    let trace_residual_max = trace_samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let pass = round_trip <= p.round_trip_tolerance && trace_residual_max <= p.tolerance;
    let mut csv = Vec::new();
    rec.series.write_csv(&mut csv)?;
    let report = SsfCommandReport {
        command: "ssf",
        config: p,
        series: SsfReport::new(&pair, &rec)?,
        round_trip,
        trace_samples,
        trace_residual_max,
        decay: rec.series.decay(),
        pass,
    };
    Ok(Outcome::from_report(pass, &report, vec![Artifact { name: "coefficients.csv".into(), bytes: csv }]))
}

/// Emits `report.json` and `coefficients.csv` (`j,re,im`); exit 1 when the
/// moment round trip or any sampled trace-formula residual is out of tolerance.
pub fn cmd_ssf(config: &Config) -> Outcome {
    match SsfParams::from_config(config).and_then(|p| run(&p)) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(&e),
    }
}
