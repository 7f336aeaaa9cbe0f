//! Lower bounds for transform norms between Schatten classes from the
//! randomized dual-ascent estimator, next to the derivative ratio table.

use ssflab::deriv::{main_estimate_experiment, ExperimentParams};
use ssflab::moi::{estimate_multilinear_norm, parse_symbol, EstimateOptions, MoiOperator, Region};
use ssflab::numlin::random_unitary;
use ssflab::Result;

pub fn run() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let opts = EstimateOptions { trials: 4, seed: 7, polish_rounds: 3 };
    for dim in [4, 8, 16] {
        let spec = random_unitary(dim, 7)?;
        for text in ["psi:1", "gamma:1"] {
            let op = MoiOperator::new(&spec, parse_symbol(text, 1)?, Region::Full)?;
            let est = estimate_multilinear_norm(&op, &[3.0], opts)?;
            out.push(format!("dim {dim:>2}, {text:>7} on S^3: >= {:.4}", est.value));
        }
    }
    let report = main_estimate_experiment(&ExperimentParams::new(vec![4, 8], 2, 3.0, 8, 7))?;
    for m in &report.summary.per_dim_max {
        out.push(format!("dim {:>2}: max r1 = {:.4}, max r2 = {:.4}", m.dim, m.r1.unwrap_or(0.0), m.r2.unwrap_or(0.0)));
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
