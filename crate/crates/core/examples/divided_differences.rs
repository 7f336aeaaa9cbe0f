//! Divided differences three ways: the recursive table, the monomial
//! expansion, and the simplex integral of `f^(n)`.

use ssflab::numlin::random::{circle_point, stream};
use ssflab::poly::{divided_difference, divided_difference_by_monomials, SymbolPhi};
use ssflab::{Complex64, Polynomial, Result};

pub fn run() -> Result<Vec<String>> {
    let mut rng = stream(2, "divided");
    let f = Polynomial::random(&mut rng, 10);
    let mut out = Vec::new();
    for n in 1..=4 {
        let nodes: Vec<Complex64> = (0..=n).map(|_| circle_point(&mut rng)).collect();
        let recursive = divided_difference(&f, &nodes);
        let monomial = divided_difference_by_monomials(&f, &nodes);
        let simplex = SymbolPhi::new(n, f.derivative(n), 0, 0)?.eval(&nodes)?;
        out.push(format!(
            "n = {n}: f^[n] = {recursive:.6}, monomial gap {:.1e}, simplex gap {:.1e}",
            (monomial - recursive).norm(),
            (simplex - recursive).norm()
        ));
    }
    // All nodes equal: f^[3](z, z, z, z) = f'''(z) / 3!
    let z = Complex64::from_polar(1.0, 0.7);
    let confluent = divided_difference(&f, &[z; 4]);
    out.push(format!(
        "confluent n = 3: gap to f'''(z)/6 is {:.1e}",
        (confluent - f.derivative(3).eval(z) / 6.0).norm()
    ));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
