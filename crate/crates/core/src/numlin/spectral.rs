//! Unitaries given by their spectral data, and contraction pairs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hermitian_eigen, operator_norm, CMatrix};
use crate::{Error, Result};

pub const UNIMODULAR_TOL: f64 = 1e-12;
pub const PROJECTION_TOL: f64 = 1e-10;
pub const CONTRACTION_TOL: f64 = 1e-10;

/// One eigenvalue together with an orthonormal basis of its eigenspace.
///
/// The spectral projection is `basis * basis^*`; a basis with zero columns
/// stands for an empty spectral projection.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralGroup {
    pub eigenvalue: Complex64,
    pub basis: CMatrix,
    /// Position `j` of the eigenvalue on the grid `e^{2 pi i j / N}`, if any.
    pub grid_index: Option<usize>,
}

impl SpectralGroup {
    pub fn new(eigenvalue: Complex64, basis: CMatrix) -> Self {
        Self { eigenvalue, basis, grid_index: None }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn projection(&self) -> CMatrix {
        self.basis.matmul(&self.basis.adjoint())
    }
}

/// Unitary `sum_j z_j E_j` with a discrete spectral measure.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralUnitary {
    dim: usize,
    groups: Vec<SpectralGroup>,
    grid: Option<usize>,
}

impl SpectralUnitary {
    /// Validates and wraps spectral groups.
    pub fn from_groups(dim: usize, groups: Vec<SpectralGroup>) -> Result<Self> {
        let s = Self { dim, groups, grid: None };
        s.validate()?;
        Ok(s)
    }

    /// Builds spectral data from `(eigenvalue, projection)` pairs.
    pub fn from_projections(dim: usize, pairs: &[(Complex64, CMatrix)]) -> Result<Self> {
        let mut groups = Vec::with_capacity(pairs.len());
        for (z, p) in pairs {
            p.require_dim(dim)?;
            let eig = hermitian_eigen(p)?;
            let keep: Vec<usize> = (0..dim).filter(|&i| eig.values[i] > 0.5).collect();
            let basis = CMatrix::from_fn(dim, keep.len(), |r, c| eig.vectors[(r, keep[c])]);
            let g = SpectralGroup::new(*z, basis);
            if (&g.projection() - p).max_abs() > PROJECTION_TOL {
                return Err(Error::InvalidSpectralData("projection is not idempotent".into()));
            }
            groups.push(g);
        }
        Self::from_groups(dim, groups)
    }

    /// Diagonal unitary with the given eigenvalues on the standard basis.
    pub fn diagonal(eigenvalues: &[Complex64]) -> Result<Self> {
        let dim = eigenvalues.len();
        let groups = eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let mut b = CMatrix::zeros(dim, 1);
                b[(i, 0)] = Complex64::new(1.0, 0.0);
                SpectralGroup::new(z, b)
            })
            .collect();
        Self::from_groups(dim, groups)
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpectralData("dim must be positive".into()));
        }
        let mut total = CMatrix::zeros(self.dim, self.dim);
        for (i, g) in self.groups.iter().enumerate() {
            if g.basis.rows() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: g.basis.rows() });
            }
            if (g.eigenvalue.norm() - 1.0).abs() > UNIMODULAR_TOL {
                return Err(Error::InvalidSpectralData(format!(
                    "eigenvalue {} of group {i} is not unimodular",
                    g.eigenvalue
                )));
            }
            total += &g.projection();
        }
        // Orthonormal columns across all groups give projections that are
        // idempotent, mutually orthogonal and summing to the identity.
        let q = self.eigenbasis();
        if q.cols() != self.dim {
            return Err(Error::InvalidSpectralData(format!("ranks sum to {}, expected {}", q.cols(), self.dim)));
        }
        let gram = &q.adjoint().matmul(&q) - &CMatrix::identity(self.dim);
        if gram.max_abs() > PROJECTION_TOL {
            return Err(Error::InvalidSpectralData("projections are not mutually orthogonal".into()));
        }
        if (&total - &CMatrix::identity(self.dim)).max_abs() > PROJECTION_TOL {
            return Err(Error::InvalidSpectralData("projections do not sum to the identity".into()));
        }
        let u = self.matrix();
        let defect = &u.adjoint().matmul(&u) - &CMatrix::identity(self.dim);
        if defect.max_abs() > PROJECTION_TOL {
            return Err(Error::InvalidSpectralData("reconstruction is not unitary".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[SpectralGroup] {
        &self.groups
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.groups.iter().map(|g| g.eigenvalue).collect()
    }

    /// Grid size `N` when every eigenvalue sits on `e^{2 pi i j / N}`.
    pub fn grid(&self) -> Option<usize> {
        self.grid
    }

    /// True when the groups carry ascending grid indices.
    pub fn is_grid_ordered(&self) -> bool {
        self.grid.is_some()
            && self.groups.windows(2).all(|w| match (w[0].grid_index, w[1].grid_index) {
                (Some(a), Some(b)) => a < b,
                _ => false,
            })
            && self.groups.iter().all(|g| g.grid_index.is_some())
    }

    /// Concatenated group bases, a unitary whose columns are eigenvectors.
    pub fn eigenbasis(&self) -> CMatrix {
        let blocks: Vec<&CMatrix> = self.groups.iter().map(|g| &g.basis).collect();
        CMatrix::hstack(&blocks, self.dim)
    }

    /// `sum_j phi(z_j) E_j`.
    pub fn functional_calculus(&self, phi: impl Fn(Complex64) -> Complex64) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for g in &self.groups {
            if g.rank() > 0 {
                out.axpy(phi(g.eigenvalue), &g.projection());
            }
        }
        out
    }

    /// The unitary `sum_j z_j E_j`.
    pub fn matrix(&self) -> CMatrix {
        self.functional_calculus(|z| z)
    }

    pub fn power(&self, k: u32) -> CMatrix {
        self.functional_calculus(|z| z.powu(k))
    }

    /// Same measure with a zero-rank group at every unoccupied grid point.
    pub fn on_full_grid(&self) -> Result<Self> {
        let n = self.grid.ok_or_else(|| Error::Unordered("spectral data is not on a grid".into()))?;
        let mut groups: Vec<SpectralGroup> = (0..n)
            .map(|j| SpectralGroup {
                eigenvalue: grid_point(j, n),
                basis: CMatrix::zeros(self.dim, 0),
                grid_index: Some(j),
            })
            .collect();
        for g in &self.groups {
            let j = g.grid_index.ok_or_else(|| Error::Unordered("group without grid index".into()))?;
            groups[j].basis = g.basis.clone();
        }
        Ok(Self { dim: self.dim, groups, grid: Some(n) })
    }

    /// Spectral data of `U_{0,N} = sum_j e^{2 pi i j/N} E([j/N, (j+1)/N))`.
    ///
    /// Eigenvalue `e^{2 pi i phi}` with `phi` in `[0, 1)` moves to grid index
    /// `floor(N phi)`; groups landing on the same index are merged.
    pub fn discretize(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid size must be positive".into()));
        }
        let mut slots: Vec<Vec<&CMatrix>> = vec![Vec::new(); n];
        for g in &self.groups {
            if g.rank() == 0 {
                continue;
            }
            slots[grid_slot(g.eigenvalue, n)].push(&g.basis);
        }
        let groups = slots
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(j, blocks)| SpectralGroup {
                eigenvalue: grid_point(j, n),
                basis: CMatrix::hstack(blocks, self.dim),
                grid_index: Some(j),
            })
            .collect();
        Ok(Self { dim: self.dim, groups, grid: Some(n) })
    }
}

/// `e^{2 pi i j / n}`.
pub fn grid_point(j: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * j as f64 / n as f64)
}

/// Grid index `floor(n phi)` of the arc `[j/n, (j+1)/n)` containing `z = e^{2 pi i phi}`.
///
/// Points within `1e-9` (relative to the arc length) of a grid point count as
/// lying on it, so eigenvalues already on the grid are left in place.
pub fn grid_slot(z: Complex64, n: usize) -> usize {
    let mut phi = z.arg() / TAU;
    if phi < 0.0 {
        phi += 1.0;
    }
    let x = phi * n as f64;
    let nearest = x.round();
    let j = if (x - nearest).abs() < 1e-9 { nearest } else { x.floor() };
    (j as usize) % n
}

pub fn discretize_unitary(u: &SpectralUnitary, n: usize) -> Result<SpectralUnitary> {
    u.discretize(n)
}

/// Base point `u0` and perturbation `v` of the path `U_t = u0 + t v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairWire", into = "PairWire")]
pub struct ContractionPair {
    u0: CMatrix,
    v: CMatrix,
}

/// JSON form `{"u0": matrix, "v": matrix}`.
#[derive(Clone, Serialize, Deserialize)]
struct PairWire {
    u0: CMatrix,
    v: CMatrix,
}

impl TryFrom<PairWire> for ContractionPair {
    type Error = Error;
    fn try_from(w: PairWire) -> Result<Self> {
        Self::new(w.u0, w.v)
    }
}

impl From<ContractionPair> for PairWire {
    fn from(p: ContractionPair) -> Self {
        Self { u0: p.u0, v: p.v }
    }
}

impl ContractionPair {
    /// Checks that both endpoints are contractions, hence every `U_t`.
    pub fn new(u0: CMatrix, v: CMatrix) -> Result<Self> {
        let dim = u0.require_square()?;
        v.require_dim(dim)?;
        let n0 = operator_norm(&u0)?;
        if n0 > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotContraction(n0));
        }
        let n1 = operator_norm(&(&u0 + &v))?;
        if n1 > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotContraction(n1));
        }
        Ok(Self { u0, v })
    }

    pub fn from_endpoints(u0: CMatrix, u1: CMatrix) -> Result<Self> {
        let v = &u1 - &u0;
        Self::new(u0, v)
    }

    pub fn dim(&self) -> usize {
        self.u0.rows()
    }

    pub fn u0(&self) -> &CMatrix {
        &self.u0
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn u1(&self) -> CMatrix {
        &self.u0 + &self.v
    }

    /// `U_t = u0 + t v`.
    pub fn at(&self, t: f64) -> CMatrix {
        let mut u = self.u0.clone();
        u.axpy(Complex64::new(t, 0.0), &self.v);
        u
    }

    /// Same base point with the perturbation scaled by `s`.
    pub fn with_scaled_perturbation(&self, s: f64) -> Result<Self> {
        Self::new(self.u0.clone(), self.v.scale_real(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::random_unitary;

    #[test]
    fn on_grid_eigenvalue_unchanged() {
        let z = grid_point(3, 8);
        let u = SpectralUnitary::diagonal(&[z]).unwrap();
        let d = u.discretize(8).unwrap();
        assert_eq!(d.groups()[0].grid_index, Some(3));
        assert!((d.groups()[0].eigenvalue - z).norm() < 1e-15);
    }

    #[test]
    fn sixty_degrees_on_eighth_grid() {
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert_eq!(grid_slot(z, 8), 1);
        let u = SpectralUnitary::diagonal(&[z]).unwrap().discretize(8).unwrap();
        assert!((u.groups()[0].eigenvalue - Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn grid_slot_matches_arc_membership() {
        // [j/N, (j+1)/N) membership by direct angle comparison.
        for k in 0..200 {
            let phi = (k as f64 * 0.6180339887) % 1.0;
            let z = Complex64::from_polar(1.0, TAU * phi);
            for &n in &[3usize, 8, 13] {
                let j = grid_slot(z, n);
                let lo = j as f64 / n as f64;
                let hi = (j + 1) as f64 / n as f64;
                assert!(phi >= lo - 1e-9 && phi < hi + 1e-9, "phi={phi} n={n} j={j}");
            }
        }
    }

    #[test]
    fn merging_and_full_grid() {
        let a = Complex64::from_polar(1.0, 0.1);
        let b = Complex64::from_polar(1.0, 0.2);
        let u = SpectralUnitary::diagonal(&[a, b, -a]).unwrap().discretize(4).unwrap();
        assert_eq!(u.groups().len(), 2);
        assert_eq!(u.groups()[0].rank(), 2);
        let full = u.on_full_grid().unwrap();
        assert_eq!(full.groups().len(), 4);
        assert!(full.is_grid_ordered());
        assert!((&full.matrix() - &u.matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_spectral_data() {
        let bad = SpectralGroup::new(Complex64::new(2.0, 0.0), CMatrix::identity(1));
        assert!(SpectralUnitary::from_groups(1, vec![bad]).is_err());
        let half = SpectralGroup::new(Complex64::new(1.0, 0.0), CMatrix::zeros(2, 1));
        assert!(SpectralUnitary::from_groups(2, vec![half]).is_err());
    }

    #[test]
    fn projection_round_trip() {
        let u = random_unitary(5, 2).unwrap();
        let pairs: Vec<(Complex64, CMatrix)> = u.groups().iter().map(|g| (g.eigenvalue, g.projection())).collect();
        let back = SpectralUnitary::from_projections(5, &pairs).unwrap();
        assert!((&back.matrix() - &u.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn contraction_pair_checks_endpoints() {
        let u0 = CMatrix::identity(2).scale_real(0.5);
        assert!(ContractionPair::new(u0.clone(), CMatrix::identity(2).scale_real(0.4)).is_ok());
        assert!(matches!(ContractionPair::new(u0, CMatrix::identity(2)), Err(Error::NotContraction(_))));
    }
}
