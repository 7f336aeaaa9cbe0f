//! Index regions restricting the sum of a multiple operator integral.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Comparison between two tuple coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Rel {
    fn holds(self, a: usize, b: usize) -> bool {
        match self {
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Eq => a == b,
            Rel::Ne => a != b,
            Rel::Ge => a >= b,
            Rel::Gt => a > b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

/// `j_left rel j_right` on group indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub left: usize,
    pub rel: Rel,
    pub right: usize,
}

/// A set of index tuples `(j_0, ..., j_n)` into the spectral groups.
///
/// Group indices are positions in [`crate::SpectralUnitary::groups`]; order
/// constraints are meaningful when the groups are sorted, e.g. on a grid.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Full,
    Empty,
    /// `j_0 = j_1 = ... = j_n`.
    Diagonal,
    /// Complement of the diagonal.
    OffDiagonal,
    /// All constraints hold.
    Order(Vec<Constraint>),
    /// `z_{j_i}` lies in the arc `[2 pi k_i / count, 2 pi (k_i + 1) / count)`.
    Arcs {
        count: usize,
        ks: Vec<usize>,
    },
    /// `j_i` belongs to `sets[i]` for every slot.
    Product(Vec<BTreeSet<usize>>),
    /// Explicit tuple list.
    Tuples(BTreeSet<Vec<usize>>),
    Not(Box<Region>),
    And(Vec<Region>),
    Or(Vec<Region>),
    /// `(j_0, ..., j_n)` such that `(j_n, ..., j_0)` lies in the inner region.
    Reversed(Box<Region>),
    /// `(j_0, ..., j_n)` such that `(j_1, ..., j_n, j_0)` lies in the inner region.
    CyclicShift(Box<Region>),
    /// `(j_0..j_k)` in `left` and `(j_k..j_n)` in `right`.
    Tensor {
        left: Box<Region>,
        k: usize,
        right: Box<Region>,
    },
    /// `(j_0..j_k)` in `inner` and `(j_0, j_k, j_{k+1}, ..., j_n)` in `outer`.
    Composed {
        inner: Box<Region>,
        k: usize,
        outer: Box<Region>,
    },
}

impl Region {
    pub fn order(constraints: &[(usize, Rel, usize)]) -> Self {
        Region::Order(constraints.iter().map(|&(left, rel, right)| Constraint { left, rel, right }).collect())
    }

    pub fn reversed(self) -> Self {
        Region::Reversed(Box::new(self))
    }

    pub fn cyclic_shift(self) -> Self {
        Region::CyclicShift(Box::new(self))
    }

    pub fn union(self, other: Region) -> Self {
        Region::Or(vec![self, other])
    }

    pub fn complement(self) -> Self {
        Region::Not(Box::new(self))
    }

    /// Membership of the tuple `idx` given the eigenvalue of every group.
    pub fn contains(&self, idx: &[usize], eigenvalues: &[Complex64]) -> bool {
        match self {
            Region::Full => true,
            Region::Empty => false,
            Region::Diagonal => idx.windows(2).all(|w| w[0] == w[1]),
            Region::OffDiagonal => !idx.windows(2).all(|w| w[0] == w[1]),
            Region::Order(cs) => cs.iter().all(|c| c.rel.holds(idx[c.left], idx[c.right])),
            Region::Arcs { count, ks } => idx.iter().zip(ks).all(|(&j, &k)| arc_index(eigenvalues[j], *count) == k),
            Region::Product(sets) => idx.iter().zip(sets).all(|(j, s)| s.contains(j)),
            Region::Tuples(set) => set.contains(idx),
            Region::Not(r) => !r.contains(idx, eigenvalues),
            Region::And(rs) => rs.iter().all(|r| r.contains(idx, eigenvalues)),
            Region::Or(rs) => rs.iter().any(|r| r.contains(idx, eigenvalues)),
            Region::Reversed(r) => {
                let rev: Vec<usize> = idx.iter().rev().copied().collect();
                r.contains(&rev, eigenvalues)
            }
            Region::CyclicShift(r) => {
                let mut rot: Vec<usize> = idx[1..].to_vec();
                rot.push(idx[0]);
                r.contains(&rot, eigenvalues)
            }
            Region::Tensor { left, k, right } => {
                left.contains(&idx[..=*k], eigenvalues) && right.contains(&idx[*k..], eigenvalues)
            }
            Region::Composed { inner, k, outer } => {
                let mut tail = vec![idx[0]];
                tail.extend_from_slice(&idx[*k..]);
                inner.contains(&idx[..=*k], eigenvalues) && outer.contains(&tail, eigenvalues)
            }
        }
    }

    /// Checks that the region is well formed for tuples of length `arity`.
    pub fn validate(&self, arity: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            Region::Order(cs) => {
                for c in cs {
                    if c.left >= arity || c.right >= arity {
                        return bad(format!("order constraint on j{} / j{} exceeds arity {arity}", c.left, c.right));
                    }
                }
                Ok(())
            }
            Region::Arcs { count, ks } => {
                if ks.len() != arity {
                    return Err(Error::ArityMismatch { expected: arity, found: ks.len() });
                }
                if *count == 0 || ks.iter().any(|&k| k >= *count) {
                    return bad(format!("arc labels must lie below the arc count {count}"));
                }
                Ok(())
            }
            Region::Product(sets) if sets.len() != arity => {
                Err(Error::ArityMismatch { expected: arity, found: sets.len() })
            }
            Region::Tuples(set) => match set.iter().find(|t| t.len() != arity) {
                Some(t) => Err(Error::ArityMismatch { expected: arity, found: t.len() }),
                None => Ok(()),
            },
            Region::Not(r) | Region::Reversed(r) | Region::CyclicShift(r) => r.validate(arity),
            Region::And(rs) | Region::Or(rs) => rs.iter().try_for_each(|r| r.validate(arity)),
            Region::Tensor { left, k, right } => {
                if *k >= arity {
                    return bad(format!("split point {k} exceeds arity {arity}"));
                }
                left.validate(k + 1)?;
                right.validate(arity - k)
            }
            Region::Composed { inner, k, outer } => {
                if *k == 0 || *k >= arity {
                    return bad(format!("split point {k} must lie in 1..{arity}"));
                }
                inner.validate(k + 1)?;
                outer.validate(arity - k + 1)
            }
            _ => Ok(()),
        }
    }
}

/// Label `k` of the arc `[2 pi k / count, 2 pi (k + 1) / count)` containing `z`.
pub fn arc_index(z: Complex64, count: usize) -> usize {
    let mut phi = z.arg() / TAU;
    if phi < 0.0 {
        phi += 1.0;
    }
    if phi >= 1.0 {
        phi = 0.0;
    }
    ((phi * count as f64).floor() as usize).min(count - 1)
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Full => write!(f, "full"),
            Region::Empty => write!(f, "empty"),
            Region::Diagonal => write!(f, "diagonal"),
            Region::OffDiagonal => write!(f, "offdiagonal"),
            Region::Order(cs) => {
                write!(f, "order:")?;
                let mut prev: Option<usize> = None;
                for c in cs {
                    if prev != Some(c.left) {
                        if prev.is_some() {
                            write!(f, ",")?;
                        }
                        write!(f, "j{}", c.left)?;
                    }
                    write!(f, "{}j{}", c.rel.symbol(), c.right)?;
                    prev = Some(c.right);
                }
                Ok(())
            }
            Region::Arcs { count, ks } => {
                let ks: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                write!(f, "arcs/{count}:{}", ks.join(","))
            }
            Region::Product(sets) => {
                let parts: Vec<String> =
                    sets.iter().map(|s| s.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" ")).collect();
                write!(f, "product[{}]", parts.join("; "))
            }
            Region::Tuples(set) => write!(f, "tuples[{}]", set.len()),
            Region::Not(r) => write!(f, "not({r})"),
            Region::And(rs) => write!(f, "and({})", join(rs)),
            Region::Or(rs) => write!(f, "or({})", join(rs)),
            Region::Reversed(r) => write!(f, "reversed({r})"),
            Region::CyclicShift(r) => write!(f, "shift({r})"),
            Region::Tensor { left, k, right } => write!(f, "tensor({left}; {k}; {right})"),
            Region::Composed { inner, k, outer } => write!(f, "composed({inner}; {k}; {outer})"),
        }
    }
}

fn join(rs: &[Region]) -> String {
    rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: usize, n: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
    }

    #[test]
    fn order_chain() {
        let r = Region::order(&[(0, Rel::Le, 2), (2, Rel::Lt, 1)]);
        let ev: Vec<Complex64> = (0..4).map(|k| z(k, 4)).collect();
        assert!(r.contains(&[0, 3, 1], &ev));
        assert!(r.contains(&[1, 2, 1], &ev));
        assert!(!r.contains(&[2, 1, 1], &ev));
        assert!(r.validate(3).is_ok());
        assert!(r.validate(2).is_err());
    }

    #[test]
    fn reversal_and_shift() {
        let ev: Vec<Complex64> = (0..3).map(|k| z(k, 3)).collect();
        let r = Region::order(&[(0, Rel::Lt, 1)]);
        assert!(r.clone().reversed().contains(&[2, 1, 0], &ev));
        // shift: (j0, j1, j2) in B* iff (j1, j2, j0) in B
        assert!(r.clone().cyclic_shift().contains(&[0, 1, 2], &ev));
        assert!(!r.cyclic_shift().contains(&[0, 2, 1], &ev));
    }

    #[test]
    fn arcs_by_angle() {
        assert_eq!(arc_index(z(0, 12), 3), 0);
        assert_eq!(arc_index(z(4, 12), 3), 1);
        assert_eq!(arc_index(z(11, 12), 3), 2);
        assert_eq!(arc_index(Complex64::new(1.0, -1e-300), 3), 0);
    }
}
