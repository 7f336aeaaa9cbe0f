//! Residuals of the reduction identities for the simplex symbols
//! `phi_{n,h,m,k}`, including coincident nodes.

use ssflab::numlin::random::{circle_point, stream};
use ssflab::poly::{check_base_decomp, check_diagonal, check_green_identities, check_tmkh, GreenKind, TmkhPart};
use ssflab::{Complex64, Polynomial, Result};

pub fn run() -> Result<Vec<String>> {
    let mut rng = stream(3, "symbols");
    let h = Polynomial::random(&mut rng, 6);
    let [l, xi, mu]: [Complex64; 3] = std::array::from_fn(|_| circle_point(&mut rng));
    let mut out = Vec::new();
    for m in 0..=3 {
        out.push(format!("base decomposition m = {m}: {:.1e}", check_base_decomp(&h, m, l, xi, mu)?));
    }
    for (kind, name) in [(GreenKind::Tmh, "tmh"), (GreenKind::Tkh, "tkh")] {
        for kappa in [0.5, 1.0] {
            let r = check_green_identities(kind, &h, 2, kappa, l, xi, mu)?;
            out.push(format!("{name} p = 2, kappa = {kappa}: {r:.1e}"));
        }
    }
    for n in 2..=4 {
        let mut nodes: Vec<Complex64> = (0..=n).map(|_| circle_point(&mut rng)).collect();
        // Ties are allowed away from the pairs each part divides by.
        nodes[n] = nodes[0];
        let i = check_tmkh(TmkhPart::I, n, &h, 2, &nodes)?;
        let ii = check_tmkh(TmkhPart::Ii, n, &h, 2, &nodes)?;
        out.push(format!("order reduction n = {n}: part i {i:.1e}, part ii {ii:.1e}"));
    }
    out.push(format!("diagonal n = 3, m = 2, k = 1: {:.1e}", check_diagonal(3, &h, 2, 1, l)?));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
