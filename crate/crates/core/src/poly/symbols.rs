//! The simplex-integral symbols `phi_{n,h,m,k}` and `phi_{h,m}`.
//!
//! `phi_{n,h,m,k}(l_0..l_n)` integrates `t^m s^k h(l_n + sum_i (l_{i-1} - l_i) v_i)`
//! over `0 <= v_1 = s <= v_2 = t <= v_3 <= ... <= v_n <= 1`. For `n = 1` there is
//! no `t` and `m` plays no role.
//!
//! Evaluation switches to barycentric coordinates `w_0 = s, w_1 = t - s, ...,
//! w_n = 1 - v_n`, in which the argument of `h` is the convex combination
//! `sum_i l_i w_i`, and uses the Dirichlet moments
//! `int prod w_i^{c_i} = prod c_i! / (sum c_i + n)!`. Every expansion
//! coefficient is then positive, so nothing cancels except through the nodes.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MultiPoly, Polynomial};
use crate::{Error, Result};

const PASCAL_ROWS: usize = 65;

/// `C(m, k)` from a Pascal table, exact in floating point for `m <= 64`.
pub fn binomial(m: usize, k: usize) -> f64 {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    if k > m {
        return 0.0;
    }
    if m >= PASCAL_ROWS {
        return (0..k).map(|i| (m - i) as f64 / (i + 1) as f64).product();
    }
    let table = TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
        for r in 1..PASCAL_ROWS {
            let prev = &rows[r - 1];
            let mut row = vec![1.0; r + 1];
            for j in 1..r {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    });
    table[m][k]
}

/// `phi_{n,h,m,k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolPhi {
    pub n: usize,
    pub h: Polynomial,
    pub m: usize,
    pub k: usize,
}

impl SymbolPhi {
    pub fn new(n: usize, h: Polynomial, m: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("symbol order must be at least 1".into()));
        }
        Ok(Self { n, h, m, k })
    }

    /// Number of nodes, `n + 1`.
    pub fn arity(&self) -> usize {
        self.n + 1
    }

    pub fn eval(&self, nodes: &[Complex64]) -> Result<Complex64> {
        self.check_arity(nodes)?;
        Ok(self.eval_unchecked(nodes))
    }

    pub(crate) fn eval_unchecked(&self, nodes: &[Complex64]) -> Complex64 {
        let mut beta = vec![0usize; self.n + 1];
        if self.n == 1 {
            beta[0] = self.k;
            return simplex_moment(&self.h, nodes, &beta);
        }
        // t^m = (w_0 + w_1)^m
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=self.m {
            beta[0] = self.k + j;
            beta[1] = self.m - j;
            acc += binomial(self.m, j) * simplex_moment(&self.h, nodes, &beta);
        }
        acc
    }

    /// Literal evaluation: substitutes the affine argument into `h` as a
    /// [`MultiPoly`] in `(s, t, t_3, ..., t_n)` and integrates over the ordered
    /// simplex. Exact, but the expansion in nested variables loses accuracy
    /// for high degree; kept as an independent cross-check.
    pub fn eval_expanded(&self, nodes: &[Complex64]) -> Result<Complex64> {
        self.check_arity(nodes)?;
        let n = self.n;
        let linear: Vec<Complex64> = (0..n).map(|i| nodes[i] - nodes[i + 1]).collect();
        let inner = MultiPoly::affine(nodes[n], &linear);
        let mut weight = vec![0u32; n];
        weight[0] = self.k as u32;
        if n >= 2 {
            weight[1] = self.m as u32;
        }
        let integrand = MultiPoly::compose(&self.h, &inner).mul(&MultiPoly::monomial(weight, Complex64::new(1.0, 0.0)));
        super::integrate_simplex(&integrand, n)
    }

    fn check_arity(&self, nodes: &[Complex64]) -> Result<()> {
        if nodes.len() != self.n + 1 {
            return Err(Error::ArityMismatch { expected: self.n + 1, found: nodes.len() });
        }
        Ok(())
    }
}

pub fn eval_phi(sym: &SymbolPhi, nodes: &[Complex64]) -> Result<Complex64> {
    sym.eval(nodes)
}

/// `phi_{h,m}(l, mu) = int_0^1 t^m h(l + (mu - l) t) dt`.
///
/// This is the order-one symbol with weight `s^m` and the nodes swapped.
pub fn phi_hm(h: &Polynomial, m: usize, lambda: Complex64, mu: Complex64) -> Complex64 {
    simplex_moment(h, &[mu, lambda], &[m, 0])
}

/// `c_{n,m,k}`, the volume of `t^{m-1} s^{k-1}` over the ordered simplex, so
/// that `phi_{n,h,m-1,k-1}(l, ..., l) = c_{n,m,k} h(l)`.
pub fn diagonal_constant(n: usize, m: usize, k: usize) -> Result<f64> {
    if n == 0 || m == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("diagonal constant needs n, m, k >= 1, got ({n}, {m}, {k})")));
    }
    let mut e = vec![0u32; n];
    e[0] = (k - 1) as u32;
    if n >= 2 {
        e[1] = (m - 1) as u32;
    }
    let p = MultiPoly::monomial(e, Complex64::new(1.0, 0.0));
    Ok(super::integrate_simplex(&p, n)?.re)
}

/// `int_{simplex} h(sum_i l_i w_i) prod_i w_i^{beta_i} dw` over the standard
/// `N`-simplex, `N = nodes.len() - 1`.
pub fn simplex_moment(h: &Polynomial, nodes: &[Complex64], beta: &[usize]) -> Complex64 {
    debug_assert_eq!(nodes.len(), beta.len());
    let Some(deg) = h.degree() else {
        return Complex64::new(0.0, 0.0);
    };
    let order = nodes.len() - 1;
    let weight_row = |l: Complex64, b: usize| -> Vec<Complex64> {
        let mut row = Vec::with_capacity(deg + 1);
        let mut power = Complex64::new(1.0, 0.0);
        for a in 0..=deg {
            row.push(power * rising(a, b));
            power *= l;
        }
        row
    };
    // sums[d] = sum over compositions a of d of prod_i l_i^{a_i} (a_i + beta_i)! / a_i!
    let mut sums = weight_row(nodes[0], beta[0]);
    for i in 1..nodes.len() {
        let row = weight_row(nodes[i], beta[i]);
        let mut next = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (d, slot) in next.iter_mut().enumerate() {
            for a in 0..=d {
                *slot += sums[d - a] * row[a];
            }
        }
        sums = next;
    }
    let total_beta: usize = beta.iter().sum();
    (0..=deg).map(|d| h.coeff(d) * sums[d] / rising(d, total_beta + order)).sum()
}

/// `(a + b)! / a!`.
fn rising(a: usize, b: usize) -> f64 {
    ((a + 1)..=(a + b)).map(|x| x as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::divided_difference;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pascal_values() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(64, 32), 1832624140942590534.0);
        assert_eq!(binomial(3, 5), 0.0);
    }

    #[test]
    fn order_one_is_first_divided_difference() {
        let f = Polynomial::from_real(&[0.5, -1.0, 2.0, 0.0, 1.5]);
        let nodes = [c(0.6, 0.8), c(-1.0, 0.0)];
        let sym = SymbolPhi::new(1, f.derivative(1), 0, 0).unwrap();
        let dd = divided_difference(&f, &nodes);
        assert!((sym.eval(&nodes).unwrap() - dd).norm() < 1e-14);
    }

    #[test]
    fn all_equal_nodes_give_scaled_value() {
        let h = Polynomial::from_real(&[1.0, 2.0, -1.0]);
        let l = c(0.0, 1.0);
        for n in 1..5 {
            let sym = SymbolPhi::new(n, h.clone(), 0, 0).unwrap();
            let fact: f64 = (1..=n).map(|x| x as f64).product();
            let v = sym.eval(&vec![l; n + 1]).unwrap();
            assert!((v - h.eval(l) / fact).norm() < 1e-14);
        }
    }

    #[test]
    fn expanded_route_agrees() {
        let h = Polynomial::from_real(&[0.3, -1.0, 0.7, 2.0, -0.4]);
        let nodes = [c(0.6, 0.8), c(0.0, -1.0), c(-0.8, 0.6), c(1.0, 0.0)];
        for (m, k) in [(0, 0), (2, 1), (1, 3)] {
            let sym = SymbolPhi::new(3, h.clone(), m, k).unwrap();
            let a = sym.eval(&nodes).unwrap();
            let b = sym.eval_expanded(&nodes).unwrap();
            assert!((a - b).norm() < 1e-12, "m={m} k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn phi_hm_constant() {
        for m in 0..5 {
            let v = phi_hm(&Polynomial::one(), m, c(1.0, 0.0), c(0.0, 1.0));
            assert!((v.re - 1.0 / (m as f64 + 1.0)).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_constants() {
        assert!((diagonal_constant(2, 1, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((diagonal_constant(2, 2, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((diagonal_constant(1, 3, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!(diagonal_constant(2, 0, 1).is_err());
    }

    #[test]
    fn arity_checked() {
        let sym = SymbolPhi::new(2, Polynomial::one(), 0, 0).unwrap();
        assert!(sym.eval(&[c(1.0, 0.0)]).is_err());
        assert!(SymbolPhi::new(0, Polynomial::one(), 0, 0).is_err());
    }
}
