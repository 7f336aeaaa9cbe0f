//! Multiple operator integrals from text names of symbols and regions, the
//! algebraic identities they satisfy, and triangular truncation.

use ssflab::moi::{
    adjoint_identity_check, duality_identity_check, moi_apply, parse_region, parse_symbol, region_additivity_check,
    triangular_truncation, TruncationMode,
};
use ssflab::numlin::random::{gaussian_matrix, stream};
use ssflab::numlin::{discretize_unitary, operator_norm, random_unitary};
use ssflab::{CMatrix, Result};

pub fn run() -> Result<Vec<String>> {
    let spec = random_unitary(6, 4)?;
    let mut rng = stream(4, "moi");
    let xs: Vec<CMatrix> = (0..2).map(|_| gaussian_matrix(&mut rng, 6, 6)).collect();
    let sym = parse_symbol("phi:2,1,0:1,0.5,-0.25", 2)?;
    let mut out = Vec::new();
    for text in ["full", "diagonal", "order:j0<j1<=j2"] {
        let region = parse_region(text)?;
        let y = moi_apply(&spec, &sym, &region, &xs)?;
        let adj = adjoint_identity_check(&spec, &sym, &region, &xs)?;
        let dual = duality_identity_check(&spec, &sym, &region, &x0(&xs), &xs)?;
        out.push(format!(
            "{text:>16}: ||T(x1, x2)|| = {:.4}, adjoint {adj:.1e}, duality {dual:.1e}",
            operator_norm(&y)?
        ));
    }
    let b = parse_region("order:j0<j1")?;
    let c = parse_region("order:j0>=j1")?;
    out.push(format!("additivity: {:.1e}", region_additivity_check(&spec, &sym, &b, &c, &xs)?));

    // Truncations need grid-ordered spectral data.
    let grid = discretize_unitary(&spec, 16)?;
    let x = &xs[0];
    let parts = [TruncationMode::StrictUpper, TruncationMode::StrictLower, TruncationMode::Diagonal]
        .map(|m| triangular_truncation(&grid, x, m))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let sum = &(&parts[0] + &parts[1]) + &parts[2];
    out.push(format!("upper + lower + diagonal - x: {:.1e}", operator_norm(&(&sum - x))?));
    Ok(out)
}

fn x0(xs: &[CMatrix]) -> CMatrix {
    xs[0].adjoint().matmul(&xs[1])
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
