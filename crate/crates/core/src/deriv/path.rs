//! Derivatives of `t -> f(U_t)`, `U_t = U_0 + tV`, and Taylor remainders.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::moi::{MoiPlan, MoiSymbol, Region};
use crate::numlin::{CMatrix, ContractionPair, SpectralUnitary};
use crate::poly::{factorial, falling_factorial, Polynomial};
use crate::{Error, Result};

/// Matrix coefficients of `f(U_t) = sum_j t^j D_j`.
///
/// Built from `U_t^k = sum_j t^j C_{k,j}` with
/// `C_{k,j} = C_{k-1,j} U_0 + C_{k-1,j-1} V`, which costs `O(deg^2)` products.
#[derive(Clone, Debug)]
pub struct PathExpansion {
    coeffs: Vec<CMatrix>,
}

impl PathExpansion {
    pub fn new(pair: &ContractionPair, f: &Polynomial) -> Self {
        let d = pair.dim();
        let Some(deg) = f.degree() else {
            return Self { coeffs: vec![CMatrix::zeros(d, d)] };
        };
        let mut coeffs = vec![CMatrix::zeros(d, d); deg + 1];
        let mut row = vec![CMatrix::identity(d)];
        coeffs[0].axpy(f.coeff(0), &row[0]);
        for k in 1..=deg {
            let mut next = Vec::with_capacity(k + 1);
            for j in 0..=k {
                let mut c = if j < k { row[j].matmul(pair.u0()) } else { CMatrix::zeros(d, d) };
                if j > 0 {
                    c += &row[j - 1].matmul(pair.v());
                }
                next.push(c);
            }
            row = next;
            let a = f.coeff(k);
            if a != Complex64::new(0.0, 0.0) {
                for (dj, c) in coeffs.iter_mut().zip(&row) {
                    dj.axpy(a, c);
                }
            }
        }
        Self { coeffs }
    }

    /// Degree in `t` (at most `deg f`).
    pub fn t_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `D_j`, i.e. `(1/j!) d^j/dt^j f(U_t)` at `t = 0`.
    pub fn coefficient(&self, j: usize) -> Option<&CMatrix> {
        self.coeffs.get(j)
    }

    /// `d^n/dt^n f(U_t)` at `t0`, for any real `t0`.
    pub fn derivative(&self, n: usize, t0: f64) -> CMatrix {
        let d = self.coeffs[0].rows();
        let mut out = CMatrix::zeros(d, d);
        for j in n..self.coeffs.len() {
            let w = falling_factorial(j, n) * t0.powi((j - n) as i32);
            if w != 0.0 {
                out.axpy(Complex64::new(w, 0.0), &self.coeffs[j]);
            }
        }
        out
    }
}

fn check_t0(t0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t0) {
        return Err(Error::InvalidArgument(format!("t0 = {t0} is outside the path [0, 1]")));
    }
    Ok(())
}

/// `d^n/dt^n f(U_t)` at `t0 in [0, 1]`.
pub fn derivative_poly_path(pair: &ContractionPair, f: &Polynomial, n: usize, t0: f64) -> Result<CMatrix> {
    check_t0(t0)?;
    Ok(PathExpansion::new(pair, f).derivative(n, t0))
}

/// `n! T_{f^{[n]}}(V, ..., V)` over the spectral measure of the unitary `u0`,
/// the derivative at `t = 0` through the multiple operator integral.
pub fn derivative_moi(u0: &SpectralUnitary, v: &CMatrix, f: &Polynomial, n: usize) -> Result<CMatrix> {
    let d = u0.dim();
    v.require_dim(d)?;
    if n == 0 {
        return Ok(u0.functional_calculus(|z| f.eval(z)));
    }
    if f.degree().is_none_or(|deg| deg < n) {
        return Ok(CMatrix::zeros(d, d));
    }
    let sym = MoiSymbol::divided_difference(f.clone(), n);
    let xs = vec![v.clone(); n];
    Ok(MoiPlan::new(u0).apply(&sym, &Region::Full, &xs)?.scale_real(factorial(n)))
}

/// `|tr d^n/dt^n f(U_t) - tr(d^{n-1}/dt^{n-1} f'(U_t) V)|` at `t0`.
pub fn trace_identity_check(pair: &ContractionPair, f: &Polynomial, n: usize, t0: f64) -> Result<f64> {
    check_t0(t0)?;
    if n == 0 {
        return Err(Error::InvalidArgument("the trace identity needs n >= 1".into()));
    }
    let lhs = PathExpansion::new(pair, f).derivative(n, t0).trace();
    let rhs = PathExpansion::new(pair, &f.derivative(1)).derivative(n - 1, t0).trace_of_product(pair.v());
    Ok((lhs - rhs).norm())
}

/// `R_n(f, U_0, V) = f(U_0 + V) - sum_{j<n} (1/j!) d^j/dt^j f(U_t)|_{t=0}`.
pub fn taylor_remainder(pair: &ContractionPair, f: &Polynomial, n: usize) -> Result<CMatrix> {
    let mut r = f.eval_matrix(&pair.u1());
    let exp = PathExpansion::new(pair, f);
    for j in 0..n {
        if let Some(c) = exp.coefficient(j) {
            r -= c;
        }
    }
    Ok(r)
}

/// Gauss-Legendre rule on `[0, 1]` exact for polynomials of degree `2 * nodes - 1`.
pub(crate) fn unit_interval_rule(nodes: usize) -> Vec<(f64, f64)> {
    let nodes = NonZeroUsize::new(nodes.max(1)).expect("positive");
    GaussLegendre::new(nodes).as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

/// `(1/(n-1)!) int_0^1 (1-t)^{n-1} d^n/dt^n f(U_t) dt`.
///
/// The integrand is a matrix polynomial in `t` of degree at most `deg f - 1`,
/// so `ceil(deg f / 2) + 1` Gauss-Legendre nodes integrate it exactly.
pub fn remainder_via_integral(pair: &ContractionPair, f: &Polynomial, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("the integral remainder needs n >= 1".into()));
    }
    let d = pair.dim();
    let deg = match f.degree() {
        Some(deg) if deg >= n => deg,
        _ => return Ok(CMatrix::zeros(d, d)),
    };
    let exp = PathExpansion::new(pair, f);
    let mut out = CMatrix::zeros(d, d);
    for (t, w) in unit_interval_rule(deg.div_ceil(2) + 1) {
        let weight = w * (1.0 - t).powi(n as i32 - 1) / factorial(n - 1);
        out.axpy(Complex64::new(weight, 0.0), &exp.derivative(n, t));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::random::{gaussian_matrix, stream};
    use crate::numlin::{random_unitary, PairOptions};

    fn pair(dim: usize, seed: u64) -> ContractionPair {
        let (u0, u1, _) = crate::numlin::random::random_path(dim, seed, PairOptions::default()).unwrap();
        ContractionPair::from_endpoints(u0, u1).unwrap()
    }

    #[test]
    fn square_first_derivative() {
        let p = pair(4, 1);
        let f = Polynomial::monomial(2);
        for t0 in [0.0, 0.3, 1.0] {
            let u = p.at(t0);
            let expected = &u.matmul(p.v()) + &p.v().matmul(&u);
            assert!((&derivative_poly_path(&p, &f, 1, t0).unwrap() - &expected).max_abs() < 1e-14);
        }
        assert!(derivative_poly_path(&p, &f, 3, 0.5).unwrap().max_abs() == 0.0);
        assert!(derivative_poly_path(&p, &f, 1, 1.5).is_err());
    }

    #[test]
    fn zeroth_derivative_is_f_of_path() {
        let p = pair(3, 2);
        let f = Polynomial::random(&mut stream(2, "f"), 7);
        let t0 = 0.4;
        let direct = f.eval_matrix(&p.at(t0));
        assert!((&derivative_poly_path(&p, &f, 0, t0).unwrap() - &direct).max_abs() < 1e-12);
    }

    #[test]
    fn moi_route_identity_and_degree() {
        let spec = random_unitary(5, 3).unwrap();
        let v = gaussian_matrix(&mut stream(3, "v"), 5, 5);
        let id = Polynomial::monomial(1);
        assert!((&derivative_moi(&spec, &v, &id, 1).unwrap() - &v).max_abs() < 1e-13);
        assert_eq!(derivative_moi(&spec, &v, &Polynomial::monomial(2), 3).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn trace_identity_square() {
        let p = pair(4, 4);
        assert!(trace_identity_check(&p, &Polynomial::monomial(2), 1, 0.0).unwrap() < 1e-14);
        assert!(trace_identity_check(&p, &Polynomial::monomial(2), 0, 0.0).is_err());
    }

    #[test]
    fn remainders_small_cases() {
        let p = pair(3, 5);
        let f = Polynomial::monomial(2);
        let direct = &f.eval_matrix(&p.u1()) - &f.eval_matrix(p.u0());
        assert!((&taylor_remainder(&p, &f, 1).unwrap() - &direct).max_abs() < 1e-14);
        assert!((&remainder_via_integral(&p, &f, 1).unwrap() - &direct).max_abs() < 1e-14);
        assert!(taylor_remainder(&p, &f, 3).unwrap().max_abs() < 1e-15);
        assert_eq!(remainder_via_integral(&p, &f, 3).unwrap().max_abs(), 0.0);
        let cube = Polynomial::monomial(3);
        let v3 = p.v().pow(3);
        assert!((&taylor_remainder(&p, &cube, 3).unwrap() - &v3).max_abs() < 1e-14);
    }
}
