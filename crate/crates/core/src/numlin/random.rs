//! Seeded random sources and random operators.
//!
//! Every stream is keyed by `(seed, purpose tag)` through SHA-256, so two
//! experiments sharing a seed but drawing for different purposes never share
//! random numbers, and adding a new consumer never shifts an existing one.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use super::{operator_norm, schatten_norm, CMatrix, ContractionPair, SpectralGroup, SpectralUnitary};
use crate::{Error, Result};

/// Counter-based generator for the stream `(seed, tag)`.
pub fn stream(seed: u64, tag: &str) -> ChaCha20Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha20Rng::from_seed(key)
}

/// Derives a child seed, for handing a reproducible seed to a sub-experiment.
pub fn child_seed(seed: u64, tag: &str) -> u64 {
    stream(seed, tag).random()
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Random complex point in the closed unit disc, uniform by area.
pub fn disc_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r: f64 = rng.random::<f64>().sqrt();
    let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

pub fn circle_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

/// Orthonormalizes the columns of a square matrix by modified Gram-Schmidt
/// with one reorthogonalization pass.
pub fn orthonormalize(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let m = a.cols();
    let mut q = a.clone();
    for j in 0..m {
        for _pass in 0..2 {
            for k in 0..j {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    dot += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let qik = q[(i, k)];
                    q[(i, j)] -= dot * qik;
                }
            }
        }
        let norm: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// Haar-like random unitary with known spectral data.
///
/// Eigenvectors are the columns of the QR factor of a Gaussian matrix and the
/// eigenvalues `e^{i theta_j}` have `theta_j` uniform on `[0, 2 pi)`.
pub fn random_unitary(dim: usize, seed: u64) -> Result<SpectralUnitary> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dim must be positive".into()));
    }
    let mut rng = stream(seed, "random_unitary");
    let q = orthonormalize(&gaussian_matrix(&mut rng, dim, dim));
    let groups = (0..dim)
        .map(|j| {
            let theta = rng.random::<f64>() * std::f64::consts::TAU;
            SpectralGroup::new(Complex64::from_polar(1.0, theta), CMatrix::from_fn(dim, 1, |i, _| q[(i, j)]))
        })
        .collect();
    SpectralUnitary::from_groups(dim, groups)
}

/// How the base point `u0` of a random path is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasePoint {
    /// Gaussian matrix rescaled to operator norm `1 - margin`.
    Contraction,
    /// Random unitary.
    Unitary,
}

#[derive(Clone, Copy, Debug)]
pub struct PairOptions {
    pub base: BasePoint,
    /// Operator-norm gap kept below 1 for random non-unitary contractions.
    pub margin: f64,
}

impl Default for PairOptions {
    fn default() -> Self {
        Self { base: BasePoint::Contraction, margin: 0.05 }
    }
}

/// Random contraction with operator norm exactly `1 - margin`.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, dim: usize, margin: f64) -> Result<CMatrix> {
    let g = gaussian_matrix(rng, dim, dim);
    let norm = operator_norm(&g)?;
    Ok(g.scale_real((1.0 - margin) / norm))
}

/// Endpoints `(u0, u1)` of a random path of contractions, plus the spectral
/// data of `u0` when it was drawn unitary.
pub fn random_path(dim: usize, seed: u64, opts: PairOptions) -> Result<(CMatrix, CMatrix, Option<SpectralUnitary>)> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dim must be positive".into()));
    }
    let (u0, spec) = match opts.base {
        BasePoint::Unitary => {
            let s = random_unitary(dim, child_seed(seed, "pair/u0"))?;
            (s.matrix(), Some(s))
        }
        BasePoint::Contraction => {
            let mut rng = stream(seed, "pair/u0");
            (random_contraction(&mut rng, dim, opts.margin)?, None)
        }
    };
    let mut rng = stream(seed, "pair/u1");
    let u1 = random_contraction(&mut rng, dim, opts.margin)?;
    Ok((u0, u1, spec))
}

/// Random pair `(u0, v)` with `||v||_p = target_norm` and `u0 + v` a contraction.
///
/// `v` is `tau (u1 - u0)` for an independent contraction `u1`. For `tau <= 1`
/// the endpoint is a contraction by convexity; larger `tau` are accepted only
/// while `||u0 + tau (u1 - u0)|| <= 1` still holds.
pub fn random_contraction_pair(
    dim: usize,
    seed: u64,
    schatten_p: f64,
    target_norm: f64,
    opts: PairOptions,
) -> Result<ContractionPair> {
    if !target_norm.is_finite() || target_norm <= 0.0 {
        return Err(Error::InvalidArgument(format!("target norm must be positive, got {target_norm}")));
    }
    let (u0, u1, _) = random_path(dim, seed, opts)?;
    let dir = &u1 - &u0;
    let dir_norm = schatten_norm(&dir, schatten_p)?;
    let tau = target_norm / dir_norm;
    if tau > 1.0 {
        let endpoint = |t: f64| -> Result<f64> { operator_norm(&(&u0 + &dir.scale_real(t))) };
        if endpoint(tau)? > 1.0 + super::CONTRACTION_TOL {
            // The feasible set of tau is an interval containing [0, 1].
            let (mut lo, mut hi) = (1.0, tau);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if endpoint(mid)? <= 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Err(Error::InfeasibleTarget { requested: target_norm, largest_feasible: lo * dir_norm });
        }
    }
    ContractionPair::new(u0, dir.scale_real(tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_independent() {
        let a: Vec<u64> = (0..4).map(|_| 0).scan(stream(7, "x"), |r, _| Some(r.random())).collect();
        let b: Vec<u64> = (0..4).map(|_| 0).scan(stream(7, "x"), |r, _| Some(r.random())).collect();
        let c: Vec<u64> = (0..4).map(|_| 0).scan(stream(7, "y"), |r, _| Some(r.random())).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_dim_one() {
        let u = random_unitary(1, 3).unwrap();
        assert_eq!(u.groups().len(), 1);
        assert!((u.groups()[0].eigenvalue.norm() - 1.0).abs() < 1e-15);
        assert!((u.groups()[0].projection()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_reproducible_and_unitary() {
        let a = random_unitary(8, 11).unwrap().matrix();
        let b = random_unitary(8, 11).unwrap().matrix();
        assert_eq!(a, b);
        let defect = &a.adjoint().matmul(&a) - &CMatrix::identity(8);
        assert!(operator_norm(&defect).unwrap() < 1e-10);
    }

    #[test]
    fn pair_hits_target_norm() {
        for &p in &[1.0, 2.0, 3.0, f64::INFINITY] {
            let pair = random_contraction_pair(6, 5, p, 0.3, PairOptions::default()).unwrap();
            assert!((schatten_norm(pair.v(), p).unwrap() - 0.3).abs() < 1e-10);
            assert!(operator_norm(pair.u0()).unwrap() <= 1.0 + 1e-10);
            assert!(operator_norm(&pair.u1()).unwrap() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn pair_scalar_case() {
        let pair = random_contraction_pair(1, 9, 2.0, 0.2, PairOptions::default()).unwrap();
        assert!(pair.u0()[(0, 0)].norm() <= 1.0);
        assert!(pair.u1()[(0, 0)].norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn infeasible_pair_reports_bound() {
        match random_contraction_pair(4, 1, 2.0, 100.0, PairOptions::default()) {
            Err(Error::InfeasibleTarget { largest_feasible, .. }) => {
                assert!(largest_feasible > 0.0 && largest_feasible < 100.0);
                let ok = random_contraction_pair(4, 1, 2.0, 0.999 * largest_feasible, PairOptions::default());
                assert!(ok.is_ok());
            }
            other => panic!("expected infeasible target, got {other:?}"),
        }
    }
}
