//! Reconstruction of the spectral shift series from remainder traces and the
//! trace formula `tr R_n(f) = <f^(n), eta_n>`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{l1_estimate, pairing, SsfSeries};
use crate::deriv::{taylor_remainder, unit_interval_rule, PathExpansion};
use crate::numlin::{schatten_norm, CMatrix, ContractionPair};
use crate::poly::{factorial, Polynomial};
use crate::{Error, Result};

/// `tr R_n(z^k, U_0, V)`.
pub fn remainder_moment(pair: &ContractionPair, n: usize, k: usize) -> Result<Complex64> {
    if k < n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(taylor_remainder(pair, &Polynomial::monomial(k), n)?.trace())
}

/// Series together with the moments it was solved from.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub series: SsfSeries,
    /// `tr R_n(z^k)` for `k = n ..= n + K`.
    pub moments: Vec<Complex64>,
}

fn check_order(n: usize, truncation: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("the spectral shift series needs n >= 1".into()));
    }
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation K must be at least 1".into()));
    }
    Ok(())
}

/// Solves `<(z^k)^(n), eta> = tr R_n(z^k)` for `k = n ..= n + K`, giving
/// `c_{k-n+1} = (k-n)! / (2 pi i k!) tr R_n(z^k)`.
pub fn reconstruct_with_moments(pair: &ContractionPair, n: usize, truncation: usize) -> Result<Reconstruction> {
    check_order(n, truncation)?;
    let moments =
        (n..=n + truncation).into_par_iter().map(|k| remainder_moment(pair, n, k)).collect::<Result<Vec<_>>>()?;
    let two_pi_i = Complex64::new(0.0, TAU);
    let coeffs = moments
        .iter()
        .enumerate()
        .map(|(i, &mom)| {
            let k = n + i;
            mom * (factorial(k - n) / factorial(k)) / two_pi_i
        })
        .collect();
    Ok(Reconstruction { series: SsfSeries { n, truncation, coeffs }, moments })
}

pub fn reconstruct_ssf(pair: &ContractionPair, n: usize, truncation: usize) -> Result<SsfSeries> {
    Ok(reconstruct_with_moments(pair, n, truncation)?.series)
}

/// Largest `|<(z^k)^(n), eta> - moment_k|` over the moments of a reconstruction.
pub fn moment_round_trip(rec: &Reconstruction) -> Result<f64> {
    let n = rec.series.n;
    let mut worst: f64 = 0.0;
    for (i, &mom) in rec.moments.iter().enumerate() {
        let test = Polynomial::monomial(n + i).derivative(n);
        worst = worst.max((pairing(&test, &rec.series)? - mom).norm());
    }
    Ok(worst)
}

/// `|tr R_n(f) - <f^(n), eta>|` for an already reconstructed series.
pub fn trace_formula_residual(pair: &ContractionPair, f: &Polynomial, series: &SsfSeries) -> Result<f64> {
    let n = series.n;
    if let Some(deg) = f.degree() {
        if deg > series.truncation + n {
            return Err(Error::InsufficientTruncation {
                given: series.truncation,
                degree: deg,
                order: n,
                required: deg - n,
            });
        }
    }
    let lhs = taylor_remainder(pair, f, n)?.trace();
    let rhs = pairing(&f.derivative(n), series)?;
    Ok((lhs - rhs).norm())
}

/// Rejects `deg f > K + n` before any work.
pub fn check_truncation(n: usize, truncation: usize, degree: usize) -> Result<()> {
    if degree > truncation + n {
        return Err(Error::InsufficientTruncation { given: truncation, degree, order: n, required: degree - n });
    }
    Ok(())
}

/// `|tr R_n(f) - <f^(n), reconstruct_ssf(pair, n, K)>|`.
pub fn verify_trace_formula(pair: &ContractionPair, n: usize, f: &Polynomial, truncation: usize) -> Result<f64> {
    check_order(n, truncation)?;
    if let Some(deg) = f.degree() {
        check_truncation(n, truncation, deg)?;
    }
    let series = reconstruct_ssf(pair, n, truncation)?;
    trace_formula_residual(pair, f, &series)
}

/// `(1/(n-1)!) int_0^1 (1-t)^{n-1} tr(d^{n-1}/dt^{n-1} f'(U_t) W) dt`, exact by
/// Gauss-Legendre since the integrand is a polynomial of degree `<= deg f - 1`.
pub fn averaged_functional(pair: &ContractionPair, w: &CMatrix, n: usize, f: &Polynomial) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("the averaged functional needs n >= 1".into()));
    }
    w.require_dim(pair.dim())?;
    let fp = f.derivative(1);
    let deg = match f.degree() {
        Some(deg) if deg >= n => deg,
        _ => return Ok(Complex64::new(0.0, 0.0)),
    };
    let exp = PathExpansion::new(pair, &fp);
    let mut total = Complex64::new(0.0, 0.0);
    for (t, wt) in unit_interval_rule(deg.div_ceil(2) + 1) {
        let weight = wt * (1.0 - t).powi(n as i32 - 1) / factorial(n - 1);
        total += exp.derivative(n - 1, t).trace_of_product(w) * weight;
    }
    Ok(total)
}

/// Grid used for [`SsfReport::l1_estimate`].
pub const L1_GRID_POINTS: usize = 4096;

/// JSON report `{n, K, dim, coefficients, l1_estimate, vnorm_n, moments}`.
#[derive(Clone, Debug, Serialize)]
pub struct SsfReport {
    pub n: usize,
    #[serde(rename = "K")]
    pub truncation: usize,
    pub dim: usize,
    pub coefficients: Vec<Complex64>,
    pub l1_estimate: f64,
    /// `||V||_n^n`.
    pub vnorm_n: f64,
    pub moments: Vec<Complex64>,
}

impl SsfReport {
    pub fn new(pair: &ContractionPair, rec: &Reconstruction) -> Result<Self> {
        let n = rec.series.n;
        Ok(Self {
            n,
            truncation: rec.series.truncation,
            dim: pair.dim(),
            coefficients: rec.series.coeffs.clone(),
            l1_estimate: l1_estimate(&rec.series, L1_GRID_POINTS)?,
            vnorm_n: schatten_norm(pair.v(), n as f64)?.powi(n as i32),
            moments: rec.moments.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::random::{random_path, stream};
    use crate::numlin::PairOptions;
    use crate::poly::binomial;

    fn pair(dim: usize, seed: u64) -> ContractionPair {
        let (u0, u1, _) = random_path(dim, seed, PairOptions::default()).unwrap();
        ContractionPair::from_endpoints(u0, u1).unwrap()
    }

    #[test]
    fn zero_perturbation_gives_zero_series() {
        let u0 = pair(4, 1).u0().clone();
        let p = ContractionPair::new(u0, CMatrix::zeros(4, 4)).unwrap();
        assert!(reconstruct_ssf(&p, 2, 6).unwrap().is_zero());
    }

    #[test]
    fn scalar_moments() {
        let (u, v) = (Complex64::new(0.2, 0.4), Complex64::new(0.3, -0.5));
        let p = ContractionPair::new(CMatrix::diagonal(&[u]), CMatrix::diagonal(&[v])).unwrap();
        let n = 2;
        let rec = reconstruct_with_moments(&p, n, 5).unwrap();
        for (i, &m) in rec.moments.iter().enumerate() {
            let k = n + i;
            let mut r = (u + v).powu(k as u32);
            for j in 0..n {
                r -= u.powu((k - j) as u32) * v.powu(j as u32) * binomial(k, j);
            }
            assert!((m - r).norm() < 1e-14);
        }
    }

    #[test]
    fn first_moment_is_trace_of_power() {
        let p = pair(5, 2);
        let n = 3;
        let expected = p.v().pow(n as u32).trace();
        assert!((remainder_moment(&p, n, n).unwrap() - expected).norm() < 1e-13);
        assert_eq!(remainder_moment(&p, n, 2).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn round_trip_and_trace_formula() {
        let p = pair(6, 3);
        let rec = reconstruct_with_moments(&p, 3, 10).unwrap();
        assert!(moment_round_trip(&rec).unwrap() < 1e-10);
        let f = Polynomial::random(&mut stream(3, "f"), 12);
        assert!(trace_formula_residual(&p, &f, &rec.series).unwrap() < 1e-8);
        let too_high = Polynomial::monomial(14);
        assert!(matches!(
            verify_trace_formula(&p, 3, &too_high, 10),
            Err(Error::InsufficientTruncation { required: 11, .. })
        ));
    }

    #[test]
    fn averaged_functional_at_v_is_remainder_trace() {
        let p = pair(4, 4);
        let f = Polynomial::random(&mut stream(4, "f"), 9);
        for n in 1..=3 {
            let a = averaged_functional(&p, p.v(), n, &f).unwrap();
            let b = taylor_remainder(&p, &f, n).unwrap().trace();
            assert!((a - b).norm() < 1e-10, "n={n}");
        }
        assert_eq!(averaged_functional(&p, p.v(), 3, &Polynomial::monomial(2)).unwrap(), Complex64::new(0.0, 0.0));
    }
}
