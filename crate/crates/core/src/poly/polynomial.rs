//! Univariate complex polynomials.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numlin::random::complex_normal;
use crate::numlin::CMatrix;
use crate::{Error, Result};

/// `sum_k c_k z^k`, coefficients indexed by power with trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// Random polynomial of exactly the given degree with standard complex
    /// Gaussian coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Self {
        let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| complex_normal(rng)).collect();
        if coeffs[degree] == Complex64::new(0.0, 0.0) {
            coeffs[degree] = Complex64::new(1.0, 0.0);
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `f(a)` for a square matrix `a`, by Horner's scheme.
    pub fn eval_matrix(&self, a: &CMatrix) -> CMatrix {
        let d = a.rows();
        let mut acc = CMatrix::zeros(d, d);
        for &c in self.coeffs.iter().rev() {
            acc = acc.matmul(a);
            for i in 0..d {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    /// `n`-th formal derivative.
    pub fn derivative(&self, n: usize) -> Self {
        if n >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (n..self.coeffs.len()).map(|k| self.coeffs[k] * falling_factorial(k, n)).collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Estimate of `max |f(e^{i theta})|`.
    ///
    /// Scans a 4096-point uniform grid and refines the eight best grid points by
    /// golden-section search on the neighbouring grid cells.
    pub fn sup_norm_circle(&self) -> f64 {
        const GRID: usize = 4096;
        if self.coeffs.len() <= 1 {
            return self.coeff(0).norm();
        }
        let step = TAU / GRID as f64;
        let modulus = |theta: f64| self.eval(Complex64::from_polar(1.0, theta)).norm();
        let mut samples: Vec<(f64, usize)> = (0..GRID).map(|i| (modulus(i as f64 * step), i)).collect();
        samples.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut best = samples[0].0;
        for &(_, i) in samples.iter().take(8) {
            let centre = i as f64 * step;
            best = best.max(golden_max(&modulus, centre - step, centre + step));
        }
        best
    }
}

/// `k (k-1) ... (k-n+1)` as a float.
pub fn falling_factorial(k: usize, n: usize) -> f64 {
    ((k + 1 - n)..=k).map(|x| x as f64).product()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
        if b - a < 1e-13 {
            break;
        }
    }
    f1.max(f2)
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if wire.iter().flatten().any(|x| !x.is_finite()) {
            return Err(serde::de::Error::custom("polynomial coefficients must be finite"));
        }
        Ok(Self::new(wire.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    /// Accepts a JSON array `[[re, im], ...]` or a comma list of real coefficients.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            return serde_json::from_str(t).map_err(|e| Error::Parse(format!("polynomial: {e}")));
        }
        let coeffs: std::result::Result<Vec<f64>, _> = t.split(',').map(|x| x.trim().parse::<f64>()).collect();
        let coeffs = coeffs.map_err(|e| Error::Parse(format!("polynomial coefficient: {e}")))?;
        Ok(Self::from_real(&coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::from_real(&[0.0]).degree(), None);
        assert!(Polynomial::from_real(&[]).is_zero());
    }

    #[test]
    fn derivative_of_cube() {
        let d = Polynomial::monomial(3).derivative(1);
        assert_eq!(d, Polynomial::from_real(&[0.0, 0.0, 3.0]));
        assert!(Polynomial::monomial(3).derivative(4).is_zero());
        assert_eq!(Polynomial::monomial(3).derivative(0), Polynomial::monomial(3));
    }

    #[test]
    fn sup_norm_simple_cases() {
        for k in 0..6 {
            assert!((Polynomial::monomial(k).sup_norm_circle() - 1.0).abs() < 1e-12);
        }
        assert!((Polynomial::from_real(&[1.0, 1.0]).sup_norm_circle() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parse_forms() {
        let a: Polynomial = "1, 0, 2".parse().unwrap();
        assert_eq!(a, Polynomial::from_real(&[1.0, 0.0, 2.0]));
        let b: Polynomial = "[[1,0],[0,1]]".parse().unwrap();
        assert_eq!(b.coeff(1), Complex64::new(0.0, 1.0));
        assert!("x".parse::<Polynomial>().is_err());
    }
}
