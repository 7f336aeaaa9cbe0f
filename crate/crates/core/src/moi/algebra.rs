//! Residual checks for the algebraic identities of multiple operator integrals.

use num_complex::Complex64;

use super::{check_budget, MoiPlan, MoiSymbol, Region};
use crate::numlin::{operator_norm, CMatrix, SpectralUnitary};
use crate::{Error, Result};

/// `||T^{B u C} - T^B - T^C||_inf` for disjoint regions `B`, `C`.
pub fn region_additivity_check(
    spec: &SpectralUnitary,
    sym: &MoiSymbol,
    b: &Region,
    c: &Region,
    xs: &[CMatrix],
) -> Result<f64> {
    let arity = xs.len() + 1;
    b.validate(arity)?;
    c.validate(arity)?;
    if let Some(t) = first_common_tuple(spec, b, c, arity)? {
        return Err(Error::OverlappingRegions(t));
    }
    let plan = MoiPlan::new(spec);
    let union = b.clone().union(c.clone());
    let whole = plan.apply(sym, &union, xs)?;
    let parts = &plan.apply(sym, b, xs)? + &plan.apply(sym, c, xs)?;
    operator_norm(&(&whole - &parts))
}

fn first_common_tuple(spec: &SpectralUnitary, b: &Region, c: &Region, arity: usize) -> Result<Option<Vec<usize>>> {
    let g = spec.groups().len();
    check_budget(g, arity - 1)?;
    let ev = spec.eigenvalues();
    let mut idx = vec![0usize; arity];
    loop {
        if b.contains(&idx, &ev) && c.contains(&idx, &ev) {
            return Ok(Some(idx));
        }
        // odometer over g^arity tuples
        let mut pos = arity;
        loop {
            if pos == 0 {
                return Ok(None);
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

/// `||T_phi^B(x_1..x_n)^* - T_{phi-bar}^{B-bar}(x_n^*, ..., x_1^*)||_inf` where
/// `phi-bar(z_0..z_n) = conj phi(z_n..z_0)` and `B-bar` is `B` reversed.
pub fn adjoint_identity_check(spec: &SpectralUnitary, sym: &MoiSymbol, region: &Region, xs: &[CMatrix]) -> Result<f64> {
    let plan = MoiPlan::new(spec);
    let lhs = plan.apply(sym, region, xs)?.adjoint();
    let rev: Vec<CMatrix> = xs.iter().rev().map(CMatrix::adjoint).collect();
    let rhs = plan.apply(&sym.clone().adjoint(), &region.clone().reversed(), &rev)?;
    operator_norm(&(&lhs - &rhs))
}

/// `|tr(x_0 T_phi^B(x_1..x_n)) - tr(T_{phi*}^{B*}(x_0..x_{n-1}) x_n)|` where
/// `phi*(z_0..z_n) = phi(z_1..z_n, z_0)` and `B* = {z : (z_1..z_n, z_0) in B}`.
pub fn duality_identity_check(
    spec: &SpectralUnitary,
    sym: &MoiSymbol,
    region: &Region,
    x0: &CMatrix,
    xs: &[CMatrix],
) -> Result<f64> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::InvalidArgument("duality needs at least one argument".into()));
    }
    let plan = MoiPlan::new(spec);
    let lhs: Complex64 = x0.trace_of_product(&plan.apply(sym, region, xs)?);
    let mut shifted_args = vec![x0.clone()];
    shifted_args.extend_from_slice(&xs[..n - 1]);
    let dual = plan.apply(&sym.clone().cyclic_shift(), &region.clone().cyclic_shift(), &shifted_args)?;
    let rhs = dual.trace_of_product(&xs[n - 1]);
    Ok((lhs - rhs).norm())
}

/// `||T_psi(x_1..x_n) - T_{phi_1}^{B_1}(x_1..x_k) T_{phi_2}^{B_2}(x_{k+1}..x_n)||_inf`
/// with `psi = phi_1(z_0..z_k) phi_2(z_k..z_n)` on the tensor region.
pub fn product_identity_check(
    spec: &SpectralUnitary,
    (phi1, b1): (&MoiSymbol, &Region),
    (phi2, b2): (&MoiSymbol, &Region),
    xs: &[CMatrix],
) -> Result<f64> {
    let k = phi1.arity() - 1;
    let expected = k + phi2.arity() - 1;
    if xs.len() != expected {
        return Err(Error::ArityMismatch { expected, found: xs.len() });
    }
    let plan = MoiPlan::new(spec);
    let psi = MoiSymbol::tensor(phi1.clone(), phi2.clone());
    let region = Region::Tensor { left: Box::new(b1.clone()), k, right: Box::new(b2.clone()) };
    let lhs = plan.apply(&psi, &region, xs)?;
    let rhs = plan.apply(phi1, b1, &xs[..k])?.matmul(&plan.apply(phi2, b2, &xs[k..])?);
    operator_norm(&(&lhs - &rhs))
}

/// `||T_psi(x_1..x_n) - T_{phi_2}^{B_2}(T_{phi_1}^{B_1}(x_1..x_k), x_{k+1}..x_n)||_inf`
/// with `psi = phi_1(z_0..z_k) phi_2(z_0, z_k, ..., z_n)` on the composed region.
pub fn composition_identity_check(
    spec: &SpectralUnitary,
    (phi1, b1): (&MoiSymbol, &Region),
    (phi2, b2): (&MoiSymbol, &Region),
    xs: &[CMatrix],
) -> Result<f64> {
    let k = phi1.arity() - 1;
    if k == 0 || phi2.arity() < 2 {
        return Err(Error::InvalidArgument("composition needs transforms of order at least one".into()));
    }
    let expected = k + phi2.arity() - 2;
    if xs.len() != expected {
        return Err(Error::ArityMismatch { expected, found: xs.len() });
    }
    let plan = MoiPlan::new(spec);
    let psi = MoiSymbol::composed(phi1.clone(), phi2.clone());
    let region = Region::Composed { inner: Box::new(b1.clone()), k, outer: Box::new(b2.clone()) };
    let lhs = plan.apply(&psi, &region, xs)?;
    let mut args = vec![plan.apply(phi1, b1, &xs[..k])?];
    args.extend_from_slice(&xs[k..]);
    let rhs = plan.apply(phi2, b2, &args)?;
    operator_norm(&(&lhs - &rhs))
}
