//! Singular values and Schatten-von Neumann norms.

use num_complex::Complex64;

use super::{hermitian_eigen, CMatrix};
use crate::{Error, Result};

/// Singular values in descending order, from the Jacobi eigenvalues of `x^* x`.
pub fn singular_values(x: &CMatrix) -> Result<Vec<f64>> {
    let gram = x.adjoint().matmul(x);
    let eig = hermitian_eigen(&gram)?;
    Ok(gram_singular_values(&eig.values))
}

/// Square roots of Gram eigenvalues with the round-off floor removed.
///
/// Eigenvalues of `x^* x` carry absolute error about `dim * eps * lambda_max`;
/// anything below that is indistinguishable from zero and would otherwise
/// surface as a spurious singular value of size `sqrt(eps) * sigma_max`.
fn gram_singular_values(values: &[f64]) -> Vec<f64> {
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    let floor = values.len() as f64 * f64::EPSILON * top;
    values.iter().map(|&l| if l <= floor { 0.0 } else { l.sqrt() }).collect()
}

/// Schatten norm of a singular-value vector.
pub fn schatten_from_singular(sigma: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let top = sigma.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return Ok(top);
    }
    // Scale by the largest value so large p cannot overflow.
    let s: f64 = sigma.iter().map(|&x| (x / top).powf(p)).sum();
    Ok(top * s.powf(1.0 / p))
}

/// `(sum sigma_i^p)^(1/p)`; `p = inf` gives the operator norm.
pub fn schatten_norm(x: &CMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p == 2.0 {
        return Ok(x.frobenius_norm());
    }
    schatten_from_singular(&singular_values(x)?, p)
}

pub fn operator_norm(x: &CMatrix) -> Result<f64> {
    schatten_norm(x, f64::INFINITY)
}

pub fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// Hoelder conjugate exponent `p/(p-1)`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Thin singular value decomposition `x = sum_i sigma_i u_i w_i^*` restricted
/// to numerically nonzero singular values.
#[derive(Clone, Debug)]
pub struct Svd {
    pub sigma: Vec<f64>,
    /// Left singular vectors as columns.
    pub left: CMatrix,
    /// Right singular vectors as columns.
    pub right: CMatrix,
}

pub fn svd(x: &CMatrix) -> Result<Svd> {
    let gram = x.adjoint().matmul(x);
    let eig = hermitian_eigen(&gram)?;
    let sig = gram_singular_values(&eig.values);
    let keep: Vec<usize> = (0..sig.len()).filter(|&i| sig[i] > 0.0).collect();
    let right = CMatrix::from_fn(x.cols(), keep.len(), |r, c| eig.vectors[(r, keep[c])]);
    let xw = x.matmul(&right);
    let left = CMatrix::from_fn(x.rows(), keep.len(), |r, c| xw[(r, c)] / sig[keep[c]]);
    Ok(Svd { sigma: keep.iter().map(|&i| sig[i]).collect(), left, right })
}

/// The matrix `y` with `||y||_p = 1` maximizing `Re tr(g y)`.
///
/// For `g = sum sigma_i u_i w_i^*` this is `sum d_i w_i u_i^*` with
/// `d_i` proportional to `sigma_i^(p' - 1)`. Returns `None` when `g = 0`.
pub fn dual_maximizer(g: &CMatrix, p: f64) -> Result<Option<CMatrix>> {
    check_exponent(p)?;
    let dec = svd(g)?;
    if dec.sigma.is_empty() {
        return Ok(None);
    }
    let q = conjugate_exponent(p);
    let weights: Vec<f64> = if q.is_infinite() {
        // p = 1: all mass on the top singular pair.
        let mut w = vec![0.0; dec.sigma.len()];
        w[0] = 1.0;
        w
    } else if q == 1.0 {
        vec![1.0; dec.sigma.len()]
    } else {
        let top = dec.sigma[0];
        dec.sigma.iter().map(|&s| (s / top).powf(q - 1.0)).collect()
    };
    let norm = schatten_from_singular(&weights, p)?;
    let n = g.rows();
    let m = g.cols();
    let mut y = CMatrix::zeros(m, n);
    for (k, &wk) in weights.iter().enumerate() {
        if wk == 0.0 {
            continue;
        }
        let c = wk / norm;
        for i in 0..m {
            let w = dec.right[(i, k)] * c;
            for j in 0..n {
                y[(i, j)] += w * dec.left[(j, k)].conj();
            }
        }
    }
    Ok(Some(y))
}

/// Closed-form singular values of a 2x2 matrix from `tr(x^* x)` and `|det x|`.
pub fn singular_values_2x2(x: &CMatrix) -> [f64; 2] {
    let fro2: f64 = x.as_slice().iter().map(Complex64::norm_sqr).sum();
    let det = (x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)]).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    let s2 = ((fro2 - disc) / 2.0).max(0.0).sqrt();
    [s1, s2]
}
