//! Seeded verification suites: MOI algebra and derivative routes, symbol
//! identities, and the spectral shift trace formula.

use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Config, Outcome};
use crate::deriv::{
    derivative_moi, derivative_poly_path, remainder_via_integral, taylor_remainder, trace_identity_check,
};
use crate::moi::{
    adjoint_identity_check, composition_identity_check, duality_identity_check, product_identity_check,
    region_additivity_check, MoiSymbol, Region, Rel,
};
use crate::numlin::random::{child_seed, circle_point, complex_normal, gaussian_matrix, random_path, stream};
use crate::numlin::{operator_norm, random_unitary, BasePoint, CMatrix, ContractionPair, PairOptions};
use crate::poly::{
    check_base_decomp, check_diagonal, check_green_identities, check_tmkh, GreenKind, Polynomial, TmkhPart,
};
use crate::ssf::{moment_round_trip, reconstruct_with_moments, trace_formula_residual};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Symbols,
    Ssf,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "symbols" => Ok(Suite::Symbols),
            "ssf" => Ok(Suite::Ssf),
            _ => Err(Error::Parse(format!("unknown suite '{s}' (identities, symbols, ssf)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyParams {
    pub suite: Suite,
    pub dim: usize,
    pub n: usize,
    pub seed: u64,
    /// Seeded instances per check.
    pub trials: usize,
    /// Replaces every per-check tolerance when set.
    pub tolerance: Option<f64>,
    /// Truncation for the ssf suite.
    #[serde(rename = "K")]
    pub truncation: usize,
    /// Random test polynomials per instance in the ssf suite.
    pub polys: usize,
}

const KEYS: &[&str] = &["suite", "dim", "n", "seed", "trials", "tolerance", "K", "polys", "out"];

impl VerifyParams {
    pub fn from_config(c: &Config) -> Result<Self> {
        c.check_keys(KEYS)?;
        let suite = c.get::<Suite>("suite")?.ok_or_else(|| Error::Parse("verify needs --suite".into()))?;
        let p = Self {
            suite,
            dim: c.get_or("dim", 8)?,
            n: c.get_or("n", 3)?,
            seed: c.get_or("seed", 42)?,
            trials: c.get_or("trials", 10)?,
            tolerance: c.get("tolerance")?,
            truncation: c.get_or("K", 16)?,
            polys: c.get_or("polys", 20)?,
        };
        if p.dim == 0 || p.n == 0 || p.trials == 0 {
            return Err(Error::InvalidArgument("dim, n and trials must be positive".into()));
        }
        if p.suite == Suite::Symbols && p.n > 6 {
            return Err(Error::InvalidArgument("symbols suite supports n <= 6".into()));
        }
        if p.suite == Suite::Identities && p.n > 4 {
            return Err(Error::InvalidArgument("identities suite supports n <= 4".into()));
        }
        if p.tolerance.is_some_and(|t| t.is_nan() || t <= 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Offender {
    pub check: String,
    pub instance: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub config: VerifyParams,
    pub checks: Vec<CheckResult>,
    pub offenders: Vec<Offender>,
    pub max_residual: f64,
    pub pass: bool,
}

/// One residual of one instance: `(check name, default tolerance, value)`.
type Sample = (&'static str, f64, Result<f64>);

fn unit_op(x: CMatrix) -> CMatrix {
    let s = operator_norm(&x).unwrap_or(1.0);
    x.scale_real(1.0 / s)
}

fn random_trig<R: Rng>(rng: &mut R, arity: usize) -> MoiSymbol {
    let terms = (0..3)
        .map(|_| {
            let powers = (0..arity).map(|_| rng.random_range(-2..=2)).collect();
            let c = complex_normal(rng);
            (powers, c / (3.0 * c.norm().max(1e-3)))
        })
        .collect();
    MoiSymbol::Trig { arity, terms }
}

fn order_region(arity: usize) -> Region {
    if arity >= 3 {
        Region::order(&[(0, Rel::Le, 2), (2, Rel::Lt, 1)])
    } else {
        Region::order(&[(0, Rel::Lt, 1)])
    }
}

fn relative(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let scale = operator_norm(a)?.max(operator_norm(b)?);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(operator_norm(&(a - b))? / scale)
}

fn identities_instance(p: &VerifyParams, i: usize) -> Vec<Sample> {
    let seed = child_seed(p.seed, &format!("verify/identities/{i}"));
    let mut rng = stream(seed, "inputs");
    let (d, n) = (p.dim, p.n);
    let mut out: Vec<Sample> = Vec::new();
    let spec = match random_unitary(d, child_seed(seed, "spec")) {
        Ok(s) => s,
        Err(e) => return vec![("moi.spectral_data", 0.0, Err(e))],
    };
    let xs: Vec<CMatrix> = (0..n).map(|_| unit_op(gaussian_matrix(&mut rng, d, d))).collect();
    let x0 = unit_op(gaussian_matrix(&mut rng, d, d));
    let sym = random_trig(&mut rng, n + 1);
    for region in [Region::Full, Region::Diagonal, order_region(n + 1)] {
        out.push(("moi.adjoint", 1e-10, adjoint_identity_check(&spec, &sym, &region, &xs)));
        out.push(("moi.duality", 1e-10, duality_identity_check(&spec, &sym, &region, &x0, &xs)));
    }
    out.push((
        "moi.additivity",
        1e-10,
        region_additivity_check(&spec, &sym, &Region::Diagonal, &Region::OffDiagonal, &xs),
    ));
    let ord = order_region(n + 1);
    out.push(("moi.additivity", 1e-10, region_additivity_check(&spec, &sym, &ord, &ord.clone().complement(), &xs)));
    if n >= 2 {
        let phi1 = random_trig(&mut rng, 2);
        let phi2 = random_trig(&mut rng, n);
        let b1 = Region::order(&[(0, Rel::Ne, 1)]);
        out.push(("moi.product", 1e-10, product_identity_check(&spec, (&phi1, &b1), (&phi2, &Region::Full), &xs)));
        let phi2 = random_trig(&mut rng, n + 1);
        out.push((
            "moi.composition",
            1e-10,
            composition_identity_check(&spec, (&phi1, &Region::Full), (&phi2, &order_region(n + 1)), &xs),
        ));
    }

    let opts = PairOptions { base: BasePoint::Unitary, ..PairOptions::default() };
    let (u0, u1, u0_spec) = match random_path(d, child_seed(seed, "pair"), opts) {
        Ok(x) => x,
        Err(e) => return vec![("deriv.pair", 0.0, Err(e))],
    };
    let pair = match ContractionPair::from_endpoints(u0, u1) {
        Ok(x) => x,
        Err(e) => return vec![("deriv.pair", 0.0, Err(e))],
    };
    let u0_spec = u0_spec.expect("unitary base point carries spectral data");
    let deg = rng.random_range(1..=12);
    let f = Polynomial::random(&mut rng, deg);
    for j in 1..=n {
        let r = derivative_poly_path(&pair, &f, j, 0.0)
            .and_then(|a| derivative_moi(&u0_spec, pair.v(), &f, j).and_then(|b| relative(&a, &b)));
        out.push(("deriv.route_equivalence_relative", 1e-9, r));
    }
    let t0: f64 = rng.random();
    out.push(("deriv.trace_identity", 1e-9, trace_identity_check(&pair, &f, n, t0)));
    let r = taylor_remainder(&pair, &f, n)
        .and_then(|a| remainder_via_integral(&pair, &f, n).and_then(|b| operator_norm(&(&a - &b))));
    out.push(("deriv.remainder_representation", 1e-10, r));
    out
}

fn symbols_instance(p: &VerifyParams, i: usize) -> Vec<Sample> {
    let mut rng = stream(child_seed(p.seed, &format!("verify/symbols/{i}")), "inputs");
    let n = p.n;
    let deg = rng.random_range(0..=8);
    let h = Polynomial::random(&mut rng, deg);
    let m = rng.random_range(1..=4);
    let k = rng.random_range(1..=4);
    let kappa = if i.is_multiple_of(2) { 1.0 } else { rng.random_range(0.2..1.0) };
    let (l, x, mu) = (circle_point(&mut rng), circle_point(&mut rng), circle_point(&mut rng));
    let mut out: Vec<Sample> = Vec::new();
    for (xi, label) in
        [(x, "symbols.base_decomp"), (l, "symbols.base_decomp_xi_eq_lambda"), (mu, "symbols.base_decomp_xi_eq_mu")]
    {
        out.push((label, 1e-9, check_base_decomp(&h, m, l, xi, mu)));
    }
    out.push(("symbols.base_decomp_mu_eq_lambda", 1e-9, check_base_decomp(&h, m, l, x, l)));
    out.push(("symbols.tmh", 1e-9, check_green_identities(GreenKind::Tmh, &h, m, kappa, l, x, mu)));
    out.push(("symbols.tmh_xi_eq_lambda", 1e-9, check_green_identities(GreenKind::Tmh, &h, m, kappa, l, l, mu)));
    out.push(("symbols.tkh", 1e-9, check_green_identities(GreenKind::Tkh, &h, k, kappa, l, x, mu)));
    out.push(("symbols.tkh_mu_eq_lambda", 1e-9, check_green_identities(GreenKind::Tkh, &h, k, kappa, l, x, l)));
    if n >= 2 {
        let nodes: Vec<Complex64> = (0..=n).map(|_| circle_point(&mut rng)).collect();
        out.push(("symbols.tmkh_i", 1e-9, check_tmkh(TmkhPart::I, n, &h, m, &nodes)));
        out.push(("symbols.tmkh_ii", 1e-9, check_tmkh(TmkhPart::Ii, n, &h, k, &nodes)));
        let mut tied = nodes.clone();
        tied[2] = tied[1];
        out.push(("symbols.tmkh_i_tied", 1e-9, check_tmkh(TmkhPart::I, n, &h, m, &tied)));
        let mut tied = nodes;
        tied[1] = tied[0];
        out.push(("symbols.tmkh_ii_tied", 1e-9, check_tmkh(TmkhPart::Ii, n, &h, k, &tied)));
    }
    out.push(("symbols.diagonal", 1e-9, check_diagonal(n, &h, m, k, l)));
    out
}

fn ssf_instance(p: &VerifyParams, i: usize) -> Vec<Sample> {
    let seed = child_seed(p.seed, &format!("verify/ssf/{i}"));
    let mut out: Vec<Sample> = Vec::new();
    let pair =
        random_path(p.dim, seed, PairOptions::default()).and_then(|(a, b, _)| ContractionPair::from_endpoints(a, b));
    let pair = match pair {
        Ok(x) => x,
        Err(e) => return vec![("ssf.pair", 0.0, Err(e))],
    };
    let rec = match reconstruct_with_moments(&pair, p.n, p.truncation) {
        Ok(r) => r,
        Err(e) => return vec![("ssf.reconstruct", 0.0, Err(e))],
    };
    out.push(("ssf.moment_round_trip", 1e-10, moment_round_trip(&rec)));
    let mut rng = stream(seed, "polys");
    for _ in 0..p.polys {
        let deg = rng.random_range(0..=p.truncation + p.n);
        let f = Polynomial::random(&mut rng, deg);
        out.push(("ssf.trace_formula", 1e-8, trace_formula_residual(&pair, &f, &rec.series)));
    }
    if i == 0 {
        let zero = ContractionPair::new(pair.u0().clone(), CMatrix::zeros(p.dim, p.dim))
            .and_then(|z| reconstruct_with_moments(&z, p.n, p.truncation))
            .map(|r| r.series.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max));
        out.push(("ssf.zero_perturbation", 0.0, zero));
    }
    out
}

fn run_suite(p: &VerifyParams) -> VerifyReport {
    let samples: Vec<Vec<Sample>> = (0..p.trials)
        .into_par_iter()
        .map(|i| match p.suite {
            Suite::Identities => identities_instance(p, i),
            Suite::Symbols => symbols_instance(p, i),
            Suite::Ssf => ssf_instance(p, i),
        })
        .collect();
    let mut checks: Vec<CheckResult> = Vec::new();
    let mut offenders = Vec::new();
    for (instance, list) in samples.into_iter().enumerate() {
        for (name, default_tol, r) in list {
            let tol = p.tolerance.unwrap_or(default_tol);
            let idx = match checks.iter().position(|c| c.name == name) {
                Some(i) => i,
                None => {
                    checks.push(CheckResult {
                        name: name.into(),
                        instances: 0,
                        max_residual: 0.0,
                        tolerance: tol,
                        pass: true,
                    });
                    checks.len() - 1
                }
            };
            let c = &mut checks[idx];
            c.instances += 1;
            match r {
                Ok(v) if v <= tol => c.max_residual = c.max_residual.max(v),
                Ok(v) => {
                    c.max_residual = if v.is_nan() { f64::INFINITY } else { c.max_residual.max(v) };
                    c.pass = false;
                    offenders.push(Offender { check: name.into(), instance, residual: Some(v), error: None });
                }
                Err(e) => {
                    c.max_residual = f64::INFINITY;
                    c.pass = false;
                    offenders.push(Offender {
                        check: name.into(),
                        instance,
                        residual: None,
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let max_residual = checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
    VerifyReport { command: "verify", config: p.clone(), checks, offenders, max_residual, pass }
}

/// Runs the configured suite; exit 0 iff every residual is within tolerance.
pub fn cmd_verify(config: &Config) -> Outcome {
    match VerifyParams::from_config(config) {
        Ok(p) => {
            let report = run_suite(&p);
            Outcome::from_report(report.pass, &report, Vec::new())
        }
        Err(e) => Outcome::from_error(&e),
    }
}
