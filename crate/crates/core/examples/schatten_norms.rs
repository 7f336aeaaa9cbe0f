//! Singular values, Schatten norms and Hölder duality on a random matrix.

use ssflab::numlin::random::{gaussian_matrix, stream};
use ssflab::numlin::{conjugate_exponent, dual_maximizer, schatten_norm, singular_values};
use ssflab::Result;

pub fn run() -> Result<Vec<String>> {
    let x = gaussian_matrix(&mut stream(1, "schatten"), 6, 6);
    let mut out = vec![format!("singular values: {:.4?}", singular_values(&x)?)];
    for p in [1.0, 2.0, 3.0, f64::INFINITY] {
        let norm = schatten_norm(&x, p)?;
        // w has unit norm in the conjugate class and attains Re tr(w x) = ||x||_p.
        let q = conjugate_exponent(p);
        let w = dual_maximizer(&x, q)?.expect("x is nonzero");
        out.push(format!(
            "p = {p:>3}: ||x||_p = {norm:.6}, Re tr(w x) = {:.6}, ||w||_q = {:.6}",
            w.trace_of_product(&x).re,
            schatten_norm(&w, q)?
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
