//! Sparse multivariate polynomials and exact integration over ordered simplices.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::Polynomial;
use crate::{Error, Result};

/// Polynomial in `nvars` variables stored as exponent tuple -> coefficient.
///
/// The map is ordered so sums over terms run in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// Single monomial `c * prod x_i^{e_i}`.
    pub fn monomial(exponents: Vec<u32>, c: Complex64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// `c_0 + sum_i c_{i+1} x_i`.
    pub fn affine(constant: Complex64, linear: &[Complex64]) -> Self {
        let nvars = linear.len();
        let mut p = Self::constant(nvars, constant);
        for (i, &c) in linear.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    fn add_term(&mut self, exponents: Vec<u32>, c: Complex64) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(exponents) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == Complex64::new(0.0, 0.0) {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, &a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (ea, &a) in &self.terms {
            for (eb, &b) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    /// `h(self)` by Horner's scheme.
    pub fn compose(h: &Polynomial, inner: &Self) -> Self {
        let mut acc = Self::zero(inner.nvars);
        for &c in h.coeffs().iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(inner.nvars, c));
        }
        acc
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.nvars, "variable count mismatch");
        self.terms.iter().map(|(e, &c)| c * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>()).sum()
    }

    /// Integral over `0 <= x_0 <= x_1 <= ... <= x_{m-1} <= 1`.
    pub fn integrate_simplex(&self) -> Complex64 {
        self.integrate_simplex_to(1.0)
    }

    /// Integral over `0 <= x_0 <= ... <= x_{m-1} <= upper`.
    ///
    /// The innermost variable is antidifferentiated by the power rule and the
    /// next variable substituted as its upper limit, repeated outward.
    pub fn integrate_simplex_to(&self, upper: f64) -> Complex64 {
        if self.nvars == 0 {
            return self.terms.values().copied().sum();
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, &c) in &self.terms {
            let mut carried = 0u32;
            let mut weight = 1.0;
            for &k in e.iter() {
                let a = carried + k + 1;
                weight /= a as f64;
                carried = a;
            }
            acc += c * weight * upper.powi(carried as i32);
        }
        acc
    }
}

/// Checked form of [`MultiPoly::integrate_simplex`] for an `order`-dimensional simplex.
pub fn integrate_simplex(p: &MultiPoly, order: usize) -> Result<Complex64> {
    if p.nvars() != order {
        return Err(Error::ArityMismatch { expected: order, found: p.nvars() });
    }
    Ok(p.integrate_simplex())
}
