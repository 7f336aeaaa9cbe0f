//! Truncated anti-analytic series on the unit circle and the contour pairing.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::{Error, Result};

/// Quadrature points used to cross-check every pairing.
pub const PAIRING_QUADRATURE_POINTS: usize = 2048;

/// Allowed gap between the closed-form and quadrature pairings, relative to
/// `max(1, 2 pi sum_m |a_m c_{m+1}|)`.
pub const PAIRING_TOL: f64 = 1e-9;

/// `eta(e^{i theta}) = sum_{j=1}^{len} c_j e^{-i j theta}`.
///
/// Only negative frequencies are stored: the analytic part is invisible to
/// polynomial test functions under the contour pairing and is set to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsfSeries {
    /// Taylor order `n` of the remainder the series represents.
    pub n: usize,
    /// Truncation `K`; the series covers test polynomials of degree `<= K + n`.
    #[serde(rename = "K")]
    pub truncation: usize,
    /// `c_1 .. c_{K+1}`; `coeffs[j - 1]` is the coefficient of `e^{-i j theta}`.
    pub coeffs: Vec<Complex64>,
}

impl SsfSeries {
    pub fn zero(n: usize, truncation: usize) -> Self {
        Self { n, truncation, coeffs: vec![Complex64::new(0.0, 0.0); truncation + 1] }
    }

    /// `c_j` for `j >= 1`; zero outside the stored range.
    pub fn coeff(&self, j: usize) -> Complex64 {
        if j == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(j - 1).copied().unwrap_or_default()
    }

    /// Value at `z` on the unit circle, using `e^{-i j theta} = conj(z)^j`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z.conj();
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| (acc + c) * w)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// `|c_j|` for `j = 1 ..`.
    pub fn decay(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm()).collect()
    }

    /// Columns `j,re,im`, one row per stored coefficient.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["j", "re", "im"])?;
        for (i, c) in self.coeffs.iter().enumerate() {
            w.write_record([(i + 1).to_string(), c.re.to_string(), c.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `int_0^{2 pi} phi(e^{it}) eta(e^{it}) i e^{it} dt` by the `points`-point trapezoidal rule.
pub fn pairing_quadrature(phi: &Polynomial, eta: impl Fn(Complex64) -> Complex64, points: usize) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let sum: Complex64 = (0..points)
        .map(|k| {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / points as f64);
            phi.eval(z) * eta(z) * i * z
        })
        .sum();
    sum * (TAU / points as f64)
}

/// `<phi, eta> = 2 pi i sum_m a_m c_{m+1}` for `phi = sum_m a_m z^m`.
///
/// The closed form is compared against trapezoidal quadrature; a gap above
/// [`PAIRING_TOL`] is reported as a convention fault.
pub fn pairing(phi: &Polynomial, s: &SsfSeries) -> Result<Complex64> {
    let two_pi_i = Complex64::new(0.0, TAU);
    let mut closed = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (m, &a) in phi.coeffs().iter().enumerate() {
        let c = s.coeff(m + 1);
        closed += a * c;
        scale += a.norm() * c.norm();
    }
    closed *= two_pi_i;
    let points = PAIRING_QUADRATURE_POINTS.max(phi.coeffs().len() + s.coeffs.len() + 2);
    let quad = pairing_quadrature(phi, |z| s.eval(z), points);
    let gap = (closed - quad).norm();
    if gap > PAIRING_TOL * (TAU * scale).max(1.0) {
        return Err(Error::ConventionFault(gap));
    }
    Ok(closed)
}

/// `int_0^{2 pi} |eta(e^{it})| dt` on a uniform grid.
pub fn l1_estimate(s: &SsfSeries, grid_points: usize) -> Result<f64> {
    if grid_points == 0 {
        return Err(Error::InvalidArgument("grid_points must be positive".into()));
    }
    let sum: f64 =
        (0..grid_points).map(|k| s.eval(Complex64::from_polar(1.0, TAU * k as f64 / grid_points as f64)).norm()).sum();
    Ok(sum * TAU / grid_points as f64)
}
