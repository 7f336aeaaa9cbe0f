//! Fourier coefficients of the order-n spectral shift function recovered from
//! remainder traces, and the trace formula they reproduce.

use ssflab::numlin::random::{random_path, stream};
use ssflab::numlin::PairOptions;
use ssflab::ssf::{moment_round_trip, reconstruct_with_moments, trace_formula_residual, SsfReport};
use ssflab::{ContractionPair, Polynomial, Result};

pub fn run() -> Result<Vec<String>> {
    let (u0, u1, _) = random_path(8, 6, PairOptions::default())?;
    let pair = ContractionPair::from_endpoints(u0, u1)?;
    let (n, k) = (2, 12);
    let rec = reconstruct_with_moments(&pair, n, k)?;
    let report = SsfReport::new(&pair, &rec)?;
    let mut out = vec![
        format!("n = {n}, K = {k}: moment round trip {:.1e}", moment_round_trip(&rec)?),
        format!("L1 estimate {:.4e}, ||V||_n^n = {:.4e}", report.l1_estimate, report.vnorm_n),
    ];
    for (j, c) in rec.series.decay().iter().enumerate().take(5) {
        out.push(format!("|c_{}| = {c:.3e}", j + 1));
    }
    let mut rng = stream(6, "test functions");
    for deg in [n, n + 4, n + k] {
        let f = Polynomial::random(&mut rng, deg);
        out.push(format!("trace formula, deg f = {deg}: {:.1e}", trace_formula_residual(&pair, &f, &rec.series)?));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
