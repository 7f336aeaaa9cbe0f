//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::Rng;
use ssflab::moi::{MoiSymbol, Region};
use ssflab::numlin::random::{child_seed, gaussian_matrix, random_contraction, stream};
use ssflab::numlin::{operator_norm, random_unitary};
use ssflab::{CMatrix, Complex64, ContractionPair, Polynomial, SpectralUnitary};

/// `||a - b|| / max(||a||, ||b||)`, zero when both vanish.
pub fn relative_gap(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = operator_norm(a).unwrap().max(operator_norm(b).unwrap());
    if scale == 0.0 {
        return 0.0;
    }
    operator_norm(&(a - b)).unwrap() / scale
}

/// `f(A)` by Horner's rule with explicit matrix products.
fn horner(f: &Polynomial, a: &CMatrix) -> CMatrix {
    let d = a.rows();
    let mut acc = CMatrix::zeros(d, d);
    for &c in f.coeffs().iter().rev() {
        acc = acc.matmul(a);
        acc.axpy(c, &CMatrix::identity(d));
    }
    acc
}

/// `d^n/dt^n f(U_0 + tV)` at `t0` from the Cauchy integral over the circle
/// `|t - t0| = r` sampled at `m` points. The sum aliases the Taylor
/// coefficients `j = n ± m, n ± 2m, ..`, so it is exact up to round-off once
/// `m > max(n, deg f)`.
pub fn contour_derivative(pair: &ContractionPair, f: &Polynomial, n: usize, t0: f64, m: usize, r: f64) -> CMatrix {
    let d = pair.dim();
    let mut acc = CMatrix::zeros(d, d);
    for j in 0..m {
        let w = Complex64::from_polar(r, TAU * j as f64 / m as f64);
        let ut = &pair.u0().clone() + &pair.v().scale(w + t0);
        acc.axpy(w.powi(-(n as i32)), &horner(f, &ut));
    }
    let nfact: f64 = (1..=n).map(|i| i as f64).product();
    acc.scale_real(nfact / m as f64)
}

/// `sum_{j in B} phi(z_{j_0}, .., z_{j_n}) E_{j_0} x_1 E_{j_1} .. x_n E_{j_n}`
/// by an odometer over all group tuples, with projections in the standard basis.
pub fn naive_moi(spec: &SpectralUnitary, sym: &MoiSymbol, region: &Region, xs: &[CMatrix]) -> CMatrix {
    let d = spec.dim();
    let g = spec.groups().len();
    let projections: Vec<CMatrix> = spec.groups().iter().map(|gr| gr.projection()).collect();
    let ev = spec.eigenvalues();
    let arity = xs.len() + 1;
    let mut idx = vec![0usize; arity];
    let mut total = CMatrix::zeros(d, d);
    loop {
        if region.contains(&idx, &ev) {
            let pts: Vec<Complex64> = idx.iter().map(|&j| ev[j]).collect();
            let mut term = projections[idx[0]].clone();
            for (x, &j) in xs.iter().zip(&idx[1..]) {
                term = term.matmul(x).matmul(&projections[j]);
            }
            total.axpy(sym.eval(&pts), &term);
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return total;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < g {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Random matrices rescaled to operator norm one.
pub fn unit_matrices<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Vec<CMatrix> {
    (0..count)
        .map(|_| {
            let g = gaussian_matrix(rng, dim, dim);
            g.scale_real(1.0 / operator_norm(&g).unwrap())
        })
        .collect()
}

/// A path from a random unitary `U_0` to a random contraction.
pub fn unitary_path(dim: usize, seed: u64) -> (SpectralUnitary, ContractionPair) {
    let u0 = random_unitary(dim, child_seed(seed, "u0")).unwrap();
    let u1 = random_contraction(&mut stream(seed, "u1"), dim, 0.05).unwrap();
    let pair = ContractionPair::from_endpoints(u0.matrix(), u1).unwrap();
    (u0, pair)
}

/// A path between two random non-normal contractions.
pub fn contraction_path(dim: usize, seed: u64) -> ContractionPair {
    let u0 = random_contraction(&mut stream(seed, "u0"), dim, 0.05).unwrap();
    let u1 = random_contraction(&mut stream(seed, "u1"), dim, 0.05).unwrap();
    ContractionPair::from_endpoints(u0, u1).unwrap()
}

/// Singular values of a 2x2 matrix from `sigma^2 = (F ± sqrt(F^2 - 4 |det|^2)) / 2`
/// with `F` the squared Frobenius norm.
pub fn singular_values_closed_form(x: &CMatrix) -> [f64; 2] {
    let fro2 = x.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let det = (x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)]).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let big = ((fro2 + disc) / 2.0).sqrt();
    // det = s1 s2 avoids cancellation in the small value.
    let small = if big > 0.0 { det / big } else { 0.0 };
    [big, small]
}

/// Monte Carlo integral of `t^m s^k h(l_n + sum_i (l_{i-1} - l_i) v_i)` over the
/// ordered simplex `v_1 <= .. <= v_n` in `[0, 1]^n`, with `s = v_1`, `t = v_2`.
/// Returns the estimate and its standard error.
pub fn monte_carlo_phi<R: Rng>(
    rng: &mut R,
    n: usize,
    h: &Polynomial,
    m: usize,
    k: usize,
    nodes: &[Complex64],
    samples: usize,
) -> (Complex64, f64) {
    let volume: f64 = 1.0 / (1..=n).map(|i| i as f64).product::<f64>();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0;
    let mut v = vec![0.0; n];
    for _ in 0..samples {
        v.iter_mut().for_each(|x| *x = rng.random());
        v.sort_by(f64::total_cmp);
        let mut arg = nodes[n];
        for i in 0..n {
            arg += (nodes[i] - nodes[i + 1]) * v[i];
        }
        let t = if n >= 2 { v[1].powi(m as i32) } else { 1.0 };
        let val = h.eval(arg) * t * v[0].powi(k as i32) * volume;
        sum += val;
        sum_sq += val.norm_sqr();
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean.norm_sqr()).max(0.0);
    (mean, (var / samples as f64).sqrt())
}
