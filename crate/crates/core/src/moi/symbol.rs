//! Symbols of multiple operator integrals.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::poly::{divided_difference_by_monomials, phi_hm, simplex_moment, Polynomial, SymbolPhi};
use crate::{Error, Result};

type SymbolFn = dyn Fn(&[Complex64]) -> Complex64 + Send + Sync;

/// A function of `arity` points on the unit circle.
#[derive(Clone)]
pub enum MoiSymbol {
    Const {
        arity: usize,
        value: Complex64,
    },
    /// `f^{[n]}`, arity `n + 1`.
    DividedDifference {
        f: Polynomial,
        n: usize,
    },
    /// `phi_{n,h,m,k}`, arity `n + 1`.
    Phi(SymbolPhi),
    /// `phi_{h,m}(l, mu) = int_0^1 t^m h(l + (mu - l) t) dt`, arity 2.
    PhiHm {
        h: Polynomial,
        m: usize,
    },
    /// `((z_i - z_j)/|z_i - z_j|)^power`; zero where `z_i = z_j` unless `power = 0`.
    Phase {
        arity: usize,
        i: usize,
        j: usize,
        power: i32,
    },
    /// `|z_i - z_j|^{i s}`; zero where `z_i = z_j` unless `s = 0`.
    ModulusPower {
        arity: usize,
        i: usize,
        j: usize,
        s: f64,
    },
    /// `sum_e c_e prod_i z_i^{e_i}` with integer exponents.
    Trig {
        arity: usize,
        terms: Vec<(Vec<i32>, Complex64)>,
    },
    /// Pointwise product of symbols of equal arity.
    Product(Vec<MoiSymbol>),
    /// `inner(z_{slots[0]}, z_{slots[1]}, ...)` as a symbol of the given arity.
    Select {
        arity: usize,
        slots: Vec<usize>,
        inner: Box<MoiSymbol>,
    },
    /// Complex conjugate.
    Conj(Box<MoiSymbol>),
    /// `phi(z_n, ..., z_0)`.
    Reverse(Box<MoiSymbol>),
    /// `phi(z_1, ..., z_n, z_0)`.
    CyclicShift(Box<MoiSymbol>),
    /// Arbitrary evaluator without a certified bound.
    Custom {
        arity: usize,
        name: String,
        eval: Arc<SymbolFn>,
    },
}

/// Points closer than this count as equal for the `0/|0|` convention.
pub const POINT_TOL: f64 = 1e-13;

impl MoiSymbol {
    pub fn one(arity: usize) -> Self {
        MoiSymbol::Const { arity, value: Complex64::new(1.0, 0.0) }
    }

    pub fn divided_difference(f: Polynomial, n: usize) -> Self {
        MoiSymbol::DividedDifference { f, n }
    }

    pub fn custom(arity: usize, name: &str, eval: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static) -> Self {
        MoiSymbol::Custom { arity, name: name.to_string(), eval: Arc::new(eval) }
    }

    pub fn arity(&self) -> usize {
        match self {
            MoiSymbol::Const { arity, .. }
            | MoiSymbol::Phase { arity, .. }
            | MoiSymbol::ModulusPower { arity, .. }
            | MoiSymbol::Trig { arity, .. }
            | MoiSymbol::Select { arity, .. }
            | MoiSymbol::Custom { arity, .. } => *arity,
            MoiSymbol::DividedDifference { n, .. } => n + 1,
            MoiSymbol::Phi(s) => s.arity(),
            MoiSymbol::PhiHm { .. } => 2,
            MoiSymbol::Product(parts) => parts.first().map_or(0, MoiSymbol::arity),
            MoiSymbol::Conj(s) | MoiSymbol::Reverse(s) | MoiSymbol::CyclicShift(s) => s.arity(),
        }
    }

    /// Checks internal consistency of slot references and arities.
    pub fn validate(&self) -> Result<()> {
        let arity = self.arity();
        if arity == 0 {
            return Err(Error::InvalidArgument("symbol arity must be positive".into()));
        }
        match self {
            MoiSymbol::Phase { i, j, .. } | MoiSymbol::ModulusPower { i, j, .. } if *i >= arity || *j >= arity => {
                Err(Error::InvalidArgument(format!("slots ({i}, {j}) exceed arity {arity}")))
            }
            MoiSymbol::Trig { terms, .. } => match terms.iter().find(|(e, _)| e.len() != arity) {
                Some((e, _)) => Err(Error::ArityMismatch { expected: arity, found: e.len() }),
                None => Ok(()),
            },
            MoiSymbol::Product(parts) => {
                for p in parts {
                    p.validate()?;
                    if p.arity() != arity {
                        return Err(Error::ArityMismatch { expected: arity, found: p.arity() });
                    }
                }
                Ok(())
            }
            MoiSymbol::Select { slots, inner, .. } => {
                inner.validate()?;
                if slots.len() != inner.arity() {
                    return Err(Error::ArityMismatch { expected: inner.arity(), found: slots.len() });
                }
                match slots.iter().find(|&&s| s >= arity) {
                    Some(s) => Err(Error::InvalidArgument(format!("slot {s} exceeds arity {arity}"))),
                    None => Ok(()),
                }
            }
            MoiSymbol::Conj(s) | MoiSymbol::Reverse(s) | MoiSymbol::CyclicShift(s) => s.validate(),
            _ => Ok(()),
        }
    }

    /// Value at the points `z` (length = arity, not checked here).
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        match self {
            MoiSymbol::Const { value, .. } => *value,
            MoiSymbol::DividedDifference { f, .. } => divided_difference_by_monomials(f, z),
            MoiSymbol::Phi(s) => s.eval_unchecked(z),
            MoiSymbol::PhiHm { h, m } => phi_hm(h, *m, z[0], z[1]),
            MoiSymbol::Phase { i, j, power, .. } => {
                if *power == 0 {
                    return Complex64::new(1.0, 0.0);
                }
                let d = z[*i] - z[*j];
                let r = d.norm();
                if r <= POINT_TOL {
                    return Complex64::new(0.0, 0.0);
                }
                let u = d / r;
                if *power > 0 {
                    u.powu(*power as u32)
                } else {
                    u.conj().powu(power.unsigned_abs())
                }
            }
            MoiSymbol::ModulusPower { i, j, s, .. } => {
                if *s == 0.0 {
                    return Complex64::new(1.0, 0.0);
                }
                let r = (z[*i] - z[*j]).norm();
                if r <= POINT_TOL {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::from_polar(1.0, s * r.ln())
            }
            MoiSymbol::Trig { terms, .. } => terms
                .iter()
                .map(|(e, c)| {
                    e.iter().zip(z).fold(*c, |acc, (&k, &zi)| {
                        if k >= 0 {
                            acc * zi.powu(k as u32)
                        } else {
                            acc * zi.conj().powu(k.unsigned_abs())
                        }
                    })
                })
                .sum(),
            MoiSymbol::Product(parts) => parts.iter().map(|p| p.eval(z)).product(),
            MoiSymbol::Select { slots, inner, .. } => {
                let sub: Vec<Complex64> = slots.iter().map(|&s| z[s]).collect();
                inner.eval(&sub)
            }
            MoiSymbol::Conj(s) => s.eval(z).conj(),
            MoiSymbol::Reverse(s) => {
                let rev: Vec<Complex64> = z.iter().rev().copied().collect();
                s.eval(&rev)
            }
            MoiSymbol::CyclicShift(s) => {
                let mut rot: Vec<Complex64> = z[1..].to_vec();
                rot.push(z[0]);
                s.eval(&rot)
            }
            MoiSymbol::Custom { eval, .. } => eval(z),
        }
    }

    /// A certified bound for `sup |phi|` on the torus, when one is known.
    pub fn bound(&self) -> Option<f64> {
        match self {
            MoiSymbol::Const { value, .. } => Some(value.norm()),
            MoiSymbol::DividedDifference { f, n } => {
                // h_{k-n} of n+1 unimodular points has C(k, n) unimodular terms.
                Some(f.coeffs().iter().enumerate().skip(*n).map(|(k, c)| c.norm() * crate::poly::binomial(k, *n)).sum())
            }
            MoiSymbol::Phi(s) => {
                let abs_h = Polynomial::new(s.h.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect());
                let one = vec![Complex64::new(1.0, 0.0); s.n + 1];
                let weightless = SymbolPhi { n: s.n, h: abs_h, m: s.m, k: s.k };
                Some(weightless.eval_unchecked(&one).re)
            }
            MoiSymbol::PhiHm { h, m } => {
                let abs_h = Polynomial::new(h.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect());
                let one = Complex64::new(1.0, 0.0);
                Some(simplex_moment(&abs_h, &[one, one], &[*m, 0]).re)
            }
            MoiSymbol::Phase { .. } | MoiSymbol::ModulusPower { .. } => Some(1.0),
            MoiSymbol::Trig { terms, .. } => Some(terms.iter().map(|(_, c)| c.norm()).sum()),
            MoiSymbol::Product(parts) => parts.iter().map(MoiSymbol::bound).product(),
            MoiSymbol::Select { inner, .. } => inner.bound(),
            MoiSymbol::Conj(s) | MoiSymbol::Reverse(s) | MoiSymbol::CyclicShift(s) => s.bound(),
            MoiSymbol::Custom { .. } => None,
        }
    }

    /// `conj phi(z_n, ..., z_0)`, the symbol of the adjoint transform.
    pub fn adjoint(self) -> Self {
        MoiSymbol::Conj(Box::new(MoiSymbol::Reverse(Box::new(self))))
    }

    /// `phi(z_1, ..., z_n, z_0)`, the symbol of the trace-dual transform.
    pub fn cyclic_shift(self) -> Self {
        MoiSymbol::CyclicShift(Box::new(self))
    }

    /// `phi_1(z_0..z_k) phi_2(z_k..z_n)` for the product of transforms.
    pub fn tensor(left: MoiSymbol, right: MoiSymbol) -> Self {
        let k = left.arity() - 1;
        let arity = k + right.arity();
        MoiSymbol::Product(vec![
            MoiSymbol::Select { arity, slots: (0..=k).collect(), inner: Box::new(left) },
            MoiSymbol::Select { arity, slots: (k..arity).collect(), inner: Box::new(right) },
        ])
    }

    /// `phi_1(z_0..z_k) phi_2(z_0, z_k, ..., z_n)` for the composition of transforms.
    pub fn composed(inner: MoiSymbol, outer: MoiSymbol) -> Self {
        let k = inner.arity() - 1;
        let arity = k + outer.arity() - 1;
        let mut outer_slots = vec![0];
        outer_slots.extend(k..arity);
        MoiSymbol::Product(vec![
            MoiSymbol::Select { arity, slots: (0..=k).collect(), inner: Box::new(inner) },
            MoiSymbol::Select { arity, slots: outer_slots, inner: Box::new(outer) },
        ])
    }
}

impl fmt::Debug for MoiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MoiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoiSymbol::Const { arity, value } => write!(f, "const[{arity}]({value})"),
            MoiSymbol::DividedDifference { f: p, n } => write!(f, "divdiff[{n}](deg {:?})", p.degree()),
            MoiSymbol::Phi(s) => write!(f, "phi({},{},{})", s.n, s.m, s.k),
            MoiSymbol::PhiHm { m, .. } => write!(f, "phihm({m})"),
            MoiSymbol::Phase { i, j, power, .. } => write!(f, "psi(z{i},z{j})^{power}"),
            MoiSymbol::ModulusPower { i, j, s, .. } => write!(f, "gamma(z{i},z{j};{s})"),
            MoiSymbol::Trig { arity, terms } => write!(f, "trig[{arity}]({} terms)", terms.len()),
            MoiSymbol::Product(parts) => {
                let p: Vec<String> = parts.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", p.join("*"))
            }
            MoiSymbol::Select { slots, inner, .. } => write!(f, "{inner}@{slots:?}"),
            MoiSymbol::Conj(s) => write!(f, "conj({s})"),
            MoiSymbol::Reverse(s) => write!(f, "rev({s})"),
            MoiSymbol::CyclicShift(s) => write!(f, "shift({s})"),
            MoiSymbol::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}
