//! Residual checks for the decomposition identities satisfied by the symbols.
//!
//! Each check evaluates both sides exactly and returns `|LHS - RHS|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{binomial, diagonal_constant, phi_hm, simplex_moment, Polynomial, SymbolPhi};
use crate::{Error, Result};

fn coincide(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= super::COINCIDENCE_TOL
}

/// `phi_{h,m}(l, mu)` split through an intermediate point `xi`:
///
/// `r1^{m+1} phi_{h,m}(l, xi) + r2^{m+1} phi_{h,m}(xi, mu)
///  + sum_{k<m} C(m,k) r2^{k+1} r1^{m-k} phi_{h,k}(xi, mu)`
/// with `r1 = (xi - l)/(mu - l)` and `r2 = (mu - xi)/(mu - l)`.
///
/// For `mu = l` the identity is checked with the denominators `(mu - l)^{m+1}`
/// cleared, where the left side vanishes.
pub fn check_base_decomp(h: &Polynomial, m: usize, lambda: Complex64, xi: Complex64, mu: Complex64) -> Result<f64> {
    let (a, b) = (xi - lambda, mu - xi);
    let mut cleared = a.powu(m as u32 + 1) * phi_hm(h, m, lambda, xi) + b.powu(m as u32 + 1) * phi_hm(h, m, xi, mu);
    for k in 0..m {
        cleared += binomial(m, k) * b.powu(k as u32 + 1) * a.powu((m - k) as u32) * phi_hm(h, k, xi, mu);
    }
    if coincide(lambda, mu) {
        return Ok(cleared.norm());
    }
    let lhs = phi_hm(h, m, lambda, mu);
    Ok((lhs - cleared / (mu - lambda).powu(m as u32 + 1)).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GreenKind {
    /// Weight `t^{m-1}` on the triangle.
    Tmh,
    /// Weight `s^{k-1}` on the triangle.
    Tkh,
}

/// `h(kappa z)`.
fn dilate(h: &Polynomial, kappa: f64) -> Polynomial {
    let mut scale = 1.0;
    let coeffs = h
        .coeffs()
        .iter()
        .map(|&c| {
            let out = c * scale;
            scale *= kappa;
            out
        })
        .collect();
    Polynomial::new(coeffs)
}

/// `int_0^1 u^k g(b + (a - b) u) du`.
fn segment(g: &Polynomial, k: usize, a: Complex64, b: Complex64) -> Complex64 {
    simplex_moment(g, &[a, b], &[k, 0])
}

/// Reduction of the triangle integrals
///
/// - `tmh`: `int_0^kappa int_0^t t^{m-1} h(kappa xi + (mu - xi) t + (l - mu) s) ds dt`
/// - `tkh`: `int_0^kappa int_0^t s^{k-1} h(kappa xi + (l - xi) t + (mu - l) s) ds dt`
///
/// to segment integrals. Both sides are computed after rescaling the
/// integration variables to `[0, 1]`; the dilation by `kappa` moves into `h`.
pub fn check_green_identities(
    kind: GreenKind,
    h: &Polynomial,
    power: usize,
    kappa: f64,
    lambda: Complex64,
    xi: Complex64,
    mu: Complex64,
) -> Result<f64> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidArgument(format!("kappa must lie in (0, 1], got {kappa}")));
    }
    if power == 0 {
        return Err(Error::InvalidArgument("weight exponent must be at least 1".into()));
    }
    let g = dilate(h, kappa);
    let p = power as f64;
    let scale = kappa.powi(power as i32 + 1);
    let (lhs, rhs) = match kind {
        GreenKind::Tmh => {
            if coincide(lambda, mu) {
                return Err(Error::NodeCoincidence("tmh identity needs lambda != mu".into()));
            }
            let lhs = SymbolPhi { n: 2, h: g.clone(), m: power - 1, k: 0 }.eval_unchecked(&[lambda, mu, xi]);
            let a = (xi - lambda) / (mu - lambda);
            let b = (mu - xi) / (mu - lambda);
            let left = segment(&g, 0, lambda, xi) - segment(&g, power, lambda, xi);
            let right = segment(&g, 0, mu, xi) - segment(&g, power, mu, xi);
            (lhs, (a * left + b * right) / p)
        }
        GreenKind::Tkh => {
            if coincide(lambda, xi) {
                return Err(Error::NodeCoincidence("tkh identity needs lambda != xi".into()));
            }
            let lhs = SymbolPhi { n: 2, h: g.clone(), m: 0, k: power - 1 }.eval_unchecked(&[mu, lambda, xi]);
            let a = (mu - lambda) / (xi - lambda);
            let b = (mu - xi) / (xi - lambda);
            (lhs, (a * segment(&g, power, mu, lambda) - b * segment(&g, power, mu, xi)) / p)
        }
    };
    Ok(scale * (lhs - rhs).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TmkhPart {
    /// Reduction of `phi_{n,h,m-1,0}`, needs `l_0 != l_1`.
    I,
    /// Reduction of `phi_{n,h,0,k-1}`, needs `l_1 != l_2`.
    Ii,
}

/// Order reduction of `phi_{n,h,m-1,0}` (part i) or `phi_{n,h,0,k-1}` (part ii)
/// to order `n - 1` symbols.
pub fn check_tmkh(part: TmkhPart, n: usize, h: &Polynomial, power: usize, nodes: &[Complex64]) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("order reduction needs n >= 2, got {n}")));
    }
    if power == 0 {
        return Err(Error::InvalidArgument("weight exponent must be at least 1".into()));
    }
    if nodes.len() != n + 1 {
        return Err(Error::ArityMismatch { expected: n + 1, found: nodes.len() });
    }
    let lower = |m: usize, k: usize, pts: &[Complex64]| SymbolPhi { n: n - 1, h: h.clone(), m, k }.eval_unchecked(pts);
    let p = power as f64;
    let (l0, l1, l2) = (nodes[0], nodes[1], nodes[2]);
    let (lhs, rhs) = match part {
        TmkhPart::I => {
            if coincide(l0, l1) {
                return Err(Error::NodeCoincidence("part i needs lambda_0 != lambda_1".into()));
            }
            let lhs = SymbolPhi { n, h: h.clone(), m: power - 1, k: 0 }.eval_unchecked(nodes);
            let r = (l2 - l1) / (l1 - l0);
            let first: Vec<Complex64> = std::iter::once(l0).chain(nodes[2..].iter().copied()).collect();
            let second = &nodes[1..];
            let a = lower(power, 0, &first) - lower(0, power, &first);
            let b = lower(0, power, second) - lower(power, 0, second);
            (lhs, ((1.0 + r) * a + r * b) / p)
        }
        TmkhPart::Ii => {
            if coincide(l1, l2) {
                return Err(Error::NodeCoincidence("part ii needs lambda_1 != lambda_2".into()));
            }
            let lhs = SymbolPhi { n, h: h.clone(), m: 0, k: power - 1 }.eval_unchecked(nodes);
            let r = (l1 - l0) / (l2 - l1);
            let skip1: Vec<Complex64> = std::iter::once(l0).chain(nodes[2..].iter().copied()).collect();
            let skip2: Vec<Complex64> = [l0, l1].into_iter().chain(nodes[3..].iter().copied()).collect();
            (lhs, ((1.0 + r) * lower(0, power, &skip1) - r * lower(0, power, &skip2)) / p)
        }
    };
    Ok((lhs - rhs).norm())
}

/// `|phi_{n,h,m-1,k-1}(l, ..., l) - c_{n,m,k} h(l)|`.
pub fn check_diagonal(n: usize, h: &Polynomial, m: usize, k: usize, lambda: Complex64) -> Result<f64> {
    let c = diagonal_constant(n, m, k)?;
    let lhs = SymbolPhi::new(n, h.clone(), m - 1, k - 1)?.eval_unchecked(&vec![lambda; n + 1]);
    Ok((lhs - c * h.eval(lambda)).norm())
}
