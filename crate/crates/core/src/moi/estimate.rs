//! Empirical lower bounds for norms of multilinear transforms
//! `S^{a_1} x ... x S^{a_n} -> S^a` with `1/a = sum 1/a_i`.

use rayon::prelude::*;
use serde::Serialize;

use super::MoiOperator;
use crate::numlin::random::{gaussian_matrix, stream};
use crate::numlin::{check_exponent, conjugate_exponent, dual_maximizer, schatten_norm, CMatrix};
use crate::{Error, Result};

/// A multilinear map on square matrices of one dimension.
pub trait Multilinear: Sync {
    /// Number of matrix arguments.
    fn arity(&self) -> usize;

    fn dim(&self) -> usize;

    fn apply(&self, xs: &[CMatrix]) -> Result<CMatrix>;

    /// The matrix `g` with `tr(w T(xs)) = tr(g x_slot)` for the other arguments fixed.
    ///
    /// The default probes every matrix unit in `slot`.
    fn pairing_gradient(&self, slot: usize, xs: &[CMatrix], w: &CMatrix) -> Result<CMatrix> {
        let d = self.dim();
        let mut args = xs.to_vec();
        let mut g = CMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let mut unit = CMatrix::zeros(d, d);
                unit[(a, b)] = num_complex::Complex64::new(1.0, 0.0);
                args[slot] = unit;
                g[(b, a)] = w.trace_of_product(&self.apply(&args)?);
            }
        }
        Ok(g)
    }
}

impl Multilinear for MoiOperator {
    fn arity(&self) -> usize {
        self.order()
    }

    fn dim(&self) -> usize {
        self.plan().dim()
    }

    fn apply(&self, xs: &[CMatrix]) -> Result<CMatrix> {
        MoiOperator::apply(self, xs)
    }

    /// Uses the trace duality `n - slot` times, so slot `i` moves to the end.
    fn pairing_gradient(&self, slot: usize, xs: &[CMatrix], w: &CMatrix) -> Result<CMatrix> {
        let n = xs.len();
        let mut dual = self.clone();
        for _ in 0..(n - slot) {
            dual = dual.trace_dual();
        }
        let mut args: Vec<CMatrix> = xs[slot + 1..].to_vec();
        args.push(w.clone());
        args.extend_from_slice(&xs[..slot]);
        dual.apply(&args)
    }
}

/// Closure-backed multilinear map.
pub struct FnTransform<F> {
    arity: usize,
    dim: usize,
    f: F,
}

impl<F> FnTransform<F>
where
    F: Fn(&[CMatrix]) -> Result<CMatrix> + Sync,
{
    pub fn new(arity: usize, dim: usize, f: F) -> Self {
        Self { arity, dim, f }
    }
}

impl<F> Multilinear for FnTransform<F>
where
    F: Fn(&[CMatrix]) -> Result<CMatrix> + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, xs: &[CMatrix]) -> Result<CMatrix> {
        (self.f)(xs)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EstimateOptions {
    pub trials: usize,
    pub seed: u64,
    /// Alternating dual-ascent sweeps over all slots after each random start.
    pub polish_rounds: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { trials: 8, seed: 0, polish_rounds: 3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormEstimate {
    /// `max ||T(x)||_a` found over inputs with `||x_i||_{a_i} = 1`.
    pub value: f64,
    /// Output exponent `a`.
    pub alpha: f64,
    pub best_trial: usize,
    #[serde(skip)]
    pub inputs: Vec<CMatrix>,
}

/// Output exponent `a` with `1/a = sum 1/a_i`; rejects `a < 1`.
pub fn output_exponent(alphas: &[f64]) -> Result<f64> {
    for &a in alphas {
        check_exponent(a)?;
    }
    let s: f64 = alphas.iter().map(|&a| 1.0 / a).sum();
    if s > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!("exponents {alphas:?} give 1/alpha = {s} > 1")));
    }
    Ok(if s == 0.0 { f64::INFINITY } else { 1.0 / s.min(1.0) })
}

/// Lower bound for the norm of `t` from seeded random starts followed by
/// alternating dual ascent: with `w` dual to the current output, each slot is
/// replaced by the unit-norm maximizer of `Re tr(w T(...))`, which never
/// decreases the output norm. Trial `i` draws from its own stream, so adding
/// trials never lowers the result.
pub fn estimate_multilinear_norm(t: &dyn Multilinear, alphas: &[f64], opts: EstimateOptions) -> Result<NormEstimate> {
    let n = t.arity();
    if alphas.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: alphas.len() });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("norm estimate needs at least one argument".into()));
    }
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let alpha = output_exponent(alphas)?;
    let results: Vec<(f64, Vec<CMatrix>)> = (0..opts.trials)
        .into_par_iter()
        .map(|trial| run_trial(t, alphas, alpha, opts, trial))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = i;
        }
    }
    let (value, inputs) = results.into_iter().nth(best).expect("at least one trial");
    Ok(NormEstimate { value, alpha, best_trial: best, inputs })
}

fn run_trial(
    t: &dyn Multilinear,
    alphas: &[f64],
    alpha: f64,
    opts: EstimateOptions,
    trial: usize,
) -> Result<(f64, Vec<CMatrix>)> {
    let d = t.dim();
    let mut rng = stream(opts.seed, &format!("estimate/trial/{trial}"));
    let mut xs = Vec::with_capacity(alphas.len());
    for &a in alphas {
        let g = gaussian_matrix(&mut rng, d, d);
        xs.push(g.scale_real(1.0 / schatten_norm(&g, a)?));
    }
    let mut y = t.apply(&xs)?;
    let mut value = schatten_norm(&y, alpha)?;
    let dual_exp = conjugate_exponent(alpha);
    for _ in 0..opts.polish_rounds {
        for slot in 0..xs.len() {
            let Some(w) = dual_maximizer(&y, dual_exp)? else {
                return Ok((value, xs));
            };
            let g = t.pairing_gradient(slot, &xs, &w)?;
            let Some(candidate) = dual_maximizer(&g, alphas[slot])? else {
                continue;
            };
            let previous = std::mem::replace(&mut xs[slot], candidate);
            let y_new = t.apply(&xs)?;
            let v_new = schatten_norm(&y_new, alpha)?;
            if v_new >= value {
                value = v_new;
                y = y_new;
            } else {
                xs[slot] = previous;
            }
        }
    }
    Ok((value, xs))
}
