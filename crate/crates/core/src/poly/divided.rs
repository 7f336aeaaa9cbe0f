//! Divided differences of polynomials.

use num_complex::Complex64;

use super::{factorial, Polynomial};

/// Nodes closer than this are treated as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// `f^{[n]}(nodes)` for `n = nodes.len() - 1` by the confluent Newton table.
///
/// Nodes are grouped into clusters of mutually close points and each cluster is
/// replaced by its first member, so repeated nodes go through the derivative
/// branch `f^{(j)}(x)/j!`.
pub fn divided_difference(f: &Polynomial, nodes: &[Complex64]) -> Complex64 {
    assert!(!nodes.is_empty(), "divided difference needs at least one node");
    let x = clustered(nodes);
    let n = x.len();
    let derivs: Vec<Polynomial> = (0..n).map(|j| f.derivative(j)).collect();
    // table[i] holds f[x_i, ..., x_{i+len}] for the current len.
    let mut table: Vec<Complex64> = x.iter().map(|&xi| f.eval(xi)).collect();
    for len in 1..n {
        for i in 0..(n - len) {
            let (a, b) = (x[i], x[i + len]);
            table[i] = if a == b { derivs[len].eval(a) / factorial(len) } else { (table[i + 1] - table[i]) / (b - a) };
        }
    }
    table[0]
}

/// `sum over k_0 + ... + k_n = k - n` of `prod nodes_i^{k_i}`, i.e. the divided
/// difference of `z^k`, as a complete homogeneous symmetric polynomial.
pub fn divided_difference_monomial(k: usize, nodes: &[Complex64]) -> Complex64 {
    assert!(!nodes.is_empty(), "divided difference needs at least one node");
    let n = nodes.len() - 1;
    if k < n {
        return Complex64::new(0.0, 0.0);
    }
    complete_homogeneous(k - n, nodes)[k - n]
}

/// `h_r(nodes)` for `r = 0..=degree`.
///
/// One pass per node: `h_r(x_0..x_i) = h_r(x_0..x_{i-1}) + x_i h_{r-1}(x_0..x_i)`.
pub fn complete_homogeneous(degree: usize, nodes: &[Complex64]) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); degree + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &x in nodes {
        for r in 1..=degree {
            let prev = h[r - 1];
            h[r] += x * prev;
        }
    }
    h
}

/// `f^{[n]}` as `sum_k c_k h_{k-n}(nodes)`; no division, so stable for clustered nodes.
pub fn divided_difference_by_monomials(f: &Polynomial, nodes: &[Complex64]) -> Complex64 {
    assert!(!nodes.is_empty(), "divided difference needs at least one node");
    let n = nodes.len() - 1;
    let Some(deg) = f.degree() else {
        return Complex64::new(0.0, 0.0);
    };
    if deg < n {
        return Complex64::new(0.0, 0.0);
    }
    let h = complete_homogeneous(deg - n, nodes);
    (n..=deg).map(|k| f.coeff(k) * h[k - n]).sum()
}

/// Sorted copy of the nodes with near-coincident points snapped together.
fn clustered(nodes: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(nodes.len());
    let mut used = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        if used[i] {
            continue;
        }
        let rep = nodes[i];
        for j in i..nodes.len() {
            if !used[j] && (nodes[j] - rep).norm() <= COINCIDENCE_TOL {
                used[j] = true;
                out.push(rep);
            }
        }
    }
    out
}
