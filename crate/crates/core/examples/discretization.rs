//! Snapping a unitary's spectrum to the N-th roots of unity and the resulting
//! error in powers, against the bound `2 pi k / N`.

use std::f64::consts::TAU;

use ssflab::numlin::{discretize_unitary, operator_norm, random_unitary};
use ssflab::Result;

pub fn run() -> Result<Vec<String>> {
    let u = random_unitary(10, 8)?;
    let mut out = Vec::new();
    for grid in [8, 32, 128] {
        let un = discretize_unitary(&u, grid)?;
        let worst = [1u32, 5, 20]
            .iter()
            .map(|&k| Ok(operator_norm(&(&u.power(k) - &un.power(k)))? / (TAU * k as f64 / grid as f64)))
            .collect::<Result<Vec<f64>>>()?;
        out.push(format!("N = {grid:>3}: error / bound for k = 1, 5, 20: {worst:.3?}"));
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
