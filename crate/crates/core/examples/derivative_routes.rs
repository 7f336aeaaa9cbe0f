//! The n-th derivative of `t -> f(U_0 + tV)` along a path through a unitary,
//! computed from the t-expansion and as `n!` times a multiple operator
//! integral, plus the two forms of the Taylor remainder.

use ssflab::deriv::{
    derivative_moi, derivative_poly_path, remainder_via_integral, taylor_remainder, trace_identity_check,
};
use ssflab::numlin::random::{random_contraction, stream};
use ssflab::numlin::{operator_norm, random_unitary};
use ssflab::{ContractionPair, Polynomial, Result};

pub fn run() -> Result<Vec<String>> {
    let u0 = random_unitary(8, 5)?;
    let mut rng = stream(5, "path");
    let u1 = random_contraction(&mut rng, 8, 0.05)?;
    let pair = ContractionPair::from_endpoints(u0.matrix(), u1)?;
    let f = Polynomial::random(&mut rng, 9);
    let mut out = Vec::new();
    for n in 1..=3 {
        let path = derivative_poly_path(&pair, &f, n, 0.0)?;
        let moi = derivative_moi(&u0, pair.v(), &f, n)?;
        let gap = operator_norm(&(&path - &moi))? / operator_norm(&path)?;
        let trace = trace_identity_check(&pair, &f, n, 0.3)?;
        let taylor = taylor_remainder(&pair, &f, n)?;
        let integral = remainder_via_integral(&pair, &f, n)?;
        out.push(format!(
            "n = {n}: relative route gap {gap:.1e}, trace identity {trace:.1e}, remainder gap {:.1e}",
            operator_norm(&(&taylor - &integral))?
        ));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
