//! Concrete transforms: triangular truncation, phase and modulus multipliers,
//! and the diagonal operator `Delta_phi`.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{moi_apply, MoiSymbol, Region, Rel};
use crate::numlin::{CMatrix, SpectralUnitary};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    /// `sum_{i<j} E_i x E_j`
    StrictUpper,
    /// `sum_{i>j} E_i x E_j`
    StrictLower,
    /// `sum_j E_j x E_j`
    Diagonal,
}

/// Truncation of `x` relative to the grid-ordered spectral projections.
pub fn triangular_truncation(spec: &SpectralUnitary, x: &CMatrix, mode: TruncationMode) -> Result<CMatrix> {
    if !spec.is_grid_ordered() {
        return Err(Error::Unordered("triangular truncation needs grid-ordered spectral groups".into()));
    }
    let rel = match mode {
        TruncationMode::StrictUpper => Rel::Lt,
        TruncationMode::StrictLower => Rel::Gt,
        TruncationMode::Diagonal => Rel::Eq,
    };
    moi_apply(spec, &MoiSymbol::one(2), &Region::order(&[(0, rel, 1)]), std::slice::from_ref(x))
}

/// Multiplier `w(z_i, z_j)` of a phase or modulus transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    /// `((z_i - z_j)/|z_i - z_j|)^m`; negative `m` gives the conjugate power.
    Upsilon(i32),
    /// `|z_i - z_j|^{i s}`.
    Gamma(f64),
}

impl PhaseKind {
    pub fn symbol(self) -> MoiSymbol {
        match self {
            PhaseKind::Upsilon(m) => MoiSymbol::Phase { arity: 2, i: 0, j: 1, power: m },
            PhaseKind::Gamma(s) => MoiSymbol::ModulusPower { arity: 2, i: 0, j: 1, s },
        }
    }
}

/// `sum_{i in rows, j in cols} w(z_i, z_j) E_i x E_j`, with `w = 0` on coincident
/// points (except for the trivial parameter, where `w = 1` everywhere).
pub fn upsilon_gamma_transform(
    spec: &SpectralUnitary,
    x: &CMatrix,
    kind: PhaseKind,
    rows: &BTreeSet<usize>,
    cols: &BTreeSet<usize>,
) -> Result<CMatrix> {
    let g = spec.groups().len();
    if let Some(&j) = rows.iter().chain(cols).find(|&&j| j >= g) {
        return Err(Error::InvalidArgument(format!("group index {j} out of range (have {g} groups)")));
    }
    let region = Region::Product(vec![rows.clone(), cols.clone()]);
    moi_apply(spec, &kind.symbol(), &region, std::slice::from_ref(x))
}

/// `Delta_phi(x_1..x_n) = sum_j phi(z_j, ..., z_j) E_j x_1 E_j ... x_n E_j`.
pub fn diagonal_moi(spec: &SpectralUnitary, sym: &MoiSymbol, xs: &[CMatrix]) -> Result<CMatrix> {
    moi_apply(spec, sym, &Region::Diagonal, xs)
}

/// `sum_j E_j x E_j`.
pub fn diagonal_compression(spec: &SpectralUnitary, x: &CMatrix) -> Result<CMatrix> {
    diagonal_moi(spec, &MoiSymbol::one(2), std::slice::from_ref(x))
}

/// Product of the diagonal compressions of each input, equal to `Delta_1` by orthogonality.
pub fn diagonal_compression_product(spec: &SpectralUnitary, xs: &[CMatrix]) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(spec.dim());
    for x in xs {
        acc = acc.matmul(&diagonal_compression(spec, x)?);
    }
    Ok(acc)
}

/// Largest number of terms `N^n` summed by [`discrete_unitary_average`].
pub const AVERAGE_TERM_CAP: usize = 1 << 20;

/// `(1/N^n) sum_{k_1..k_n} prod_i U_{k_i}^* x_i U_{k_i}` with
/// `U_k = sum_j e^{2 pi i j k / N} E_j` over grid indices `j`.
pub fn discrete_unitary_average(spec: &SpectralUnitary, xs: &[CMatrix]) -> Result<CMatrix> {
    let n_grid = spec.grid().ok_or_else(|| Error::Unordered("spectral data is not on a grid".into()))?;
    let mut grid_of = Vec::with_capacity(spec.groups().len());
    for g in spec.groups() {
        grid_of.push(g.grid_index.ok_or_else(|| Error::Unordered("group without grid index".into()))?);
    }
    let n = xs.len();
    let terms = (n_grid as f64).powi(n as i32);
    if terms > AVERAGE_TERM_CAP as f64 {
        return Err(Error::BudgetExceeded { groups: n_grid, arity: n + 1, cap: AVERAGE_TERM_CAP });
    }
    let unitaries: Vec<CMatrix> = (0..n_grid)
        .map(|k| {
            let mut u = CMatrix::zeros(spec.dim(), spec.dim());
            for (g, &j) in spec.groups().iter().zip(&grid_of) {
                if g.rank() > 0 {
                    u.axpy(Complex64::from_polar(1.0, TAU * (j * k) as f64 / n_grid as f64), &g.projection());
                }
            }
            u
        })
        .collect();
    let conjugated: Vec<Vec<CMatrix>> =
        xs.iter().map(|x| unitaries.iter().map(|u| u.adjoint().matmul(x).matmul(u)).collect()).collect();
    let mut total = CMatrix::zeros(spec.dim(), spec.dim());
    let mut ks = vec![0usize; n];
    loop {
        let mut term = CMatrix::identity(spec.dim());
        for (i, &k) in ks.iter().enumerate() {
            term = term.matmul(&conjugated[i][k]);
        }
        total += &term;
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(total.scale_real(1.0 / terms));
            }
            pos -= 1;
            ks[pos] += 1;
            if ks[pos] < n_grid {
                break;
            }
            ks[pos] = 0;
        }
    }
}
