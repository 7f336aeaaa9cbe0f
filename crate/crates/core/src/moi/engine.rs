//! Evaluation of `T_phi^B(x_1..x_n) = sum_{(j_0..j_n) in B} phi(z_{j_0}..z_{j_n}) E_{j_0} x_1 E_{j_1} ... x_n E_{j_n}`.
//!
//! All inputs are rotated into the eigenbasis of the spectral data, where
//! `E_j` is a coordinate projection. With rank-one groups every tuple costs a
//! scalar multiply-accumulate; otherwise partial products are small blocks.
//! Work is split over `j_0` and reassembled in index order, so the result does
//! not depend on the thread count.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{MoiSymbol, Region};
use crate::numlin::{CMatrix, SpectralUnitary};
use crate::{Error, Result};

/// Largest number of occupied spectral groups for arity up to 4 (`n <= 3`).
pub const GROUP_CAP_LOW_ORDER: usize = 64;
/// Largest number of occupied spectral groups for `n = 4`.
pub const GROUP_CAP_ORDER_FOUR: usize = 32;
/// Tuple budget `G^{n+1}` for `n >= 5`.
pub const TUPLE_CAP: f64 = 33_554_432.0; // 32^5

/// Checks the `O(G^{n+1})` cost against the supported budget.
pub fn check_budget(groups: usize, n: usize) -> Result<()> {
    let over = match n {
        0..=3 => groups > GROUP_CAP_LOW_ORDER,
        4 => groups > GROUP_CAP_ORDER_FOUR,
        _ => (groups as f64).powi(n as i32 + 1) > TUPLE_CAP,
    };
    if over {
        let cap = match n {
            0..=3 => GROUP_CAP_LOW_ORDER,
            4 => GROUP_CAP_ORDER_FOUR,
            _ => TUPLE_CAP.powf(1.0 / (n as f64 + 1.0)).floor() as usize,
        };
        return Err(Error::BudgetExceeded { groups, arity: n + 1, cap });
    }
    Ok(())
}

/// Precomputed eigenbasis data for repeated evaluation on one spectral measure.
#[derive(Clone, Debug)]
pub struct MoiPlan {
    dim: usize,
    q: CMatrix,
    q_adj: CMatrix,
    /// Original indices of the groups with positive rank.
    active: Vec<usize>,
    offsets: Vec<usize>,
    ranks: Vec<usize>,
    eigenvalues: Vec<Complex64>,
}

impl MoiPlan {
    pub fn new(spec: &SpectralUnitary) -> Self {
        let q = spec.eigenbasis();
        let mut active = Vec::new();
        let mut offsets = Vec::new();
        let mut ranks = Vec::new();
        let mut offset = 0;
        for (j, g) in spec.groups().iter().enumerate() {
            if g.rank() > 0 {
                active.push(j);
                offsets.push(offset);
                ranks.push(g.rank());
            }
            offset += g.rank();
        }
        Self { dim: spec.dim(), q_adj: q.adjoint(), q, active, offsets, ranks, eigenvalues: spec.eigenvalues() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of groups with positive rank.
    pub fn occupied_groups(&self) -> usize {
        self.active.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    fn rotate_in(&self, x: &CMatrix) -> CMatrix {
        self.q_adj.matmul(x).matmul(&self.q)
    }

    fn rotate_out(&self, x: &CMatrix) -> CMatrix {
        self.q.matmul(x).matmul(&self.q_adj)
    }

    /// Evaluates the transform on `xs`.
    pub fn apply(&self, sym: &MoiSymbol, region: &Region, xs: &[CMatrix]) -> Result<CMatrix> {
        let n = xs.len();
        if sym.arity() != n + 1 {
            return Err(Error::ArityMismatch { expected: sym.arity(), found: n + 1 });
        }
        sym.validate()?;
        region.validate(n + 1)?;
        for x in xs {
            x.require_dim(self.dim)?;
        }
        check_budget(self.active.len(), n)?;
        let rotated: Vec<CMatrix> = xs.iter().map(|x| self.rotate_in(x)).collect();
        let inner = if self.ranks.iter().all(|&r| r == 1) {
            self.scalar_sum(sym, region, &rotated)?
        } else {
            self.block_sum(sym, region, &rotated)?
        };
        Ok(self.rotate_out(&inner))
    }

    fn symbol_value(&self, sym: &MoiSymbol, pts: &[Complex64]) -> Result<Complex64> {
        let v = sym.eval(pts);
        if !v.is_finite() {
            return Err(Error::NonFiniteSymbol(format!("{sym} at {pts:?}")));
        }
        Ok(v)
    }

    fn scalar_sum(&self, sym: &MoiSymbol, region: &Region, xs: &[CMatrix]) -> Result<CMatrix> {
        let g = self.active.len();
        let n = xs.len();
        let col = &self.offsets;
        // entries[i][a * g + b] = (x_{i+1})_{c_a, c_b}
        let entries: Vec<Vec<Complex64>> =
            xs.iter().map(|x| (0..g * g).map(|ab| x[(col[ab / g], col[ab % g])]).collect()).collect();
        let rows: Vec<Vec<Complex64>> = (0..g)
            .into_par_iter()
            .map(|a| {
                let mut row = vec![Complex64::new(0.0, 0.0); g];
                let mut idx = vec![self.active[a]];
                let mut pts = vec![self.eigenvalues[self.active[a]]];
                self.scalar_dfs(sym, region, &entries, n, a, Complex64::new(1.0, 0.0), &mut idx, &mut pts, &mut row)?;
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, row) in rows.iter().enumerate() {
            if n == 0 {
                out[(col[a], col[a])] = row[a];
                continue;
            }
            for (b, &v) in row.iter().enumerate() {
                out[(col[a], col[b])] = v;
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn scalar_dfs(
        &self,
        sym: &MoiSymbol,
        region: &Region,
        entries: &[Vec<Complex64>],
        n: usize,
        prev: usize,
        partial: Complex64,
        idx: &mut Vec<usize>,
        pts: &mut Vec<Complex64>,
        row: &mut [Complex64],
    ) -> Result<()> {
        let g = self.active.len();
        let level = idx.len();
        if n == 0 {
            if region.contains(idx, &self.eigenvalues) {
                row[prev] += self.symbol_value(sym, pts)?;
            }
            return Ok(());
        }
        let x = &entries[level - 1];
        for b in 0..g {
            let p = partial * x[prev * g + b];
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let j = self.active[b];
            idx.push(j);
            pts.push(self.eigenvalues[j]);
            if level == n {
                if region.contains(idx, &self.eigenvalues) {
                    row[b] += self.symbol_value(sym, pts)? * p;
                }
            } else {
                self.scalar_dfs(sym, region, entries, n, b, p, idx, pts, row)?;
            }
            idx.pop();
            pts.pop();
        }
        Ok(())
    }

    fn block_sum(&self, sym: &MoiSymbol, region: &Region, xs: &[CMatrix]) -> Result<CMatrix> {
        let g = self.active.len();
        let n = xs.len();
        let ranges: Vec<Vec<usize>> =
            (0..g).map(|a| (self.offsets[a]..self.offsets[a] + self.ranks[a]).collect()).collect();
        let blocks: Vec<Vec<CMatrix>> =
            xs.iter().map(|x| (0..g * g).map(|ab| x.submatrix(&ranges[ab / g], &ranges[ab % g])).collect()).collect();
        let rows: Vec<Vec<CMatrix>> = (0..g)
            .into_par_iter()
            .map(|a| {
                let mut row: Vec<CMatrix> = (0..g).map(|b| CMatrix::zeros(self.ranks[a], self.ranks[b])).collect();
                let mut idx = vec![self.active[a]];
                let mut pts = vec![self.eigenvalues[self.active[a]]];
                let start = CMatrix::identity(self.ranks[a]);
                self.block_dfs(sym, region, &blocks, n, a, &start, &mut idx, &mut pts, &mut row)?;
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, row) in rows.iter().enumerate() {
            for (b, block) in row.iter().enumerate() {
                if n == 0 && a != b {
                    continue;
                }
                for (r, &gr) in ranges[a].iter().enumerate() {
                    for (c, &gc) in ranges[b].iter().enumerate() {
                        out[(gr, gc)] = block[(r, c)];
                    }
                }
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn block_dfs(
        &self,
        sym: &MoiSymbol,
        region: &Region,
        blocks: &[Vec<CMatrix>],
        n: usize,
        prev: usize,
        partial: &CMatrix,
        idx: &mut Vec<usize>,
        pts: &mut Vec<Complex64>,
        row: &mut [CMatrix],
    ) -> Result<()> {
        let g = self.active.len();
        let level = idx.len();
        if n == 0 {
            if region.contains(idx, &self.eigenvalues) {
                let v = self.symbol_value(sym, pts)?;
                row[prev].axpy(v, partial);
            }
            return Ok(());
        }
        for b in 0..g {
            let block = &blocks[level - 1][prev * g + b];
            if block.max_abs() == 0.0 {
                continue;
            }
            let p = partial.matmul(block);
            let j = self.active[b];
            idx.push(j);
            pts.push(self.eigenvalues[j]);
            if level == n {
                if region.contains(idx, &self.eigenvalues) {
                    let v = self.symbol_value(sym, pts)?;
                    row[b].axpy(v, &p);
                }
            } else {
                self.block_dfs(sym, region, blocks, n, b, &p, idx, pts, row)?;
            }
            idx.pop();
            pts.pop();
        }
        Ok(())
    }
}

impl MoiPlan {
    /// Region-masked symbol values over all index tuples of occupied groups,
    /// flattened with `j_0` most significant; `None` when not applicable.
    fn tabulate(&self, sym: &MoiSymbol, region: &Region) -> Result<Option<Vec<Complex64>>> {
        let g = self.active.len();
        let arity = sym.arity();
        let total = (g as f64).powi(arity as i32);
        if g == 0 || !self.ranks.iter().all(|&r| r == 1) || total > TABLE_CAP as f64 {
            return Ok(None);
        }
        check_budget(g, arity - 1)?;
        let total = total as usize;
        let chunks: Vec<Vec<Complex64>> = (0..g)
            .into_par_iter()
            .map(|a| {
                let per = total / g;
                let mut out = Vec::with_capacity(per);
                let mut idx = vec![0usize; arity];
                let mut pts = vec![Complex64::new(0.0, 0.0); arity];
                for rest in 0..per {
                    let mut r = rest;
                    for slot in (1..arity).rev() {
                        idx[slot] = self.active[r % g];
                        r /= g;
                    }
                    idx[0] = self.active[a];
                    for (p, &j) in pts.iter_mut().zip(&idx) {
                        *p = self.eigenvalues[j];
                    }
                    out.push(if region.contains(&idx, &self.eigenvalues) {
                        self.symbol_value(sym, &pts)?
                    } else {
                        Complex64::new(0.0, 0.0)
                    });
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(Some(chunks.concat()))
    }

    /// Contraction of the rotated inputs against a table from [`Self::tabulate`].
    fn apply_tabulated(&self, table: &[Complex64], n: usize, xs: &[CMatrix]) -> Result<CMatrix> {
        if xs.len() != n {
            return Err(Error::ArityMismatch { expected: n + 1, found: xs.len() + 1 });
        }
        for x in xs {
            x.require_dim(self.dim)?;
        }
        let g = self.active.len();
        let col = &self.offsets;
        let entries: Vec<Vec<Complex64>> = xs
            .iter()
            .map(|x| {
                let r = self.rotate_in(x);
                (0..g * g).map(|ab| r[(col[ab / g], col[ab % g])]).collect()
            })
            .collect();
        let rows: Vec<Vec<Complex64>> = (0..g)
            .into_par_iter()
            .map(|a| {
                let mut row = vec![Complex64::new(0.0, 0.0); g];
                if n == 0 {
                    row[a] = table[a];
                    return row;
                }
                // acc over partial tuples (j_0 = a, j_1 .. j_level), indexed by the flat suffix
                let mut acc = vec![Complex64::new(1.0, 0.0)];
                let mut last: Vec<usize> = vec![a];
                for x in entries.iter() {
                    let mut next = Vec::with_capacity(acc.len() * g);
                    let mut next_last = Vec::with_capacity(acc.len() * g);
                    for (p, &prev) in acc.iter().zip(&last) {
                        for b in 0..g {
                            next.push(p * x[prev * g + b]);
                            next_last.push(b);
                        }
                    }
                    acc = next;
                    last = next_last;
                }
                let base = a * acc.len();
                for (flat, (p, &b)) in acc.iter().zip(&last).enumerate() {
                    row[b] += p * table[base + flat];
                }
                row
            })
            .collect();
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, row) in rows.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                out[(col[a], col[b])] = v;
            }
        }
        if !out.is_finite() {
            return Err(Error::NonFiniteSymbol("tabulated transform produced a non-finite value".into()));
        }
        Ok(self.rotate_out(&out))
    }
}

/// `T_phi^B(x_1, ..., x_n)` over the spectral measure of `spec`.
pub fn moi_apply(spec: &SpectralUnitary, sym: &MoiSymbol, region: &Region, xs: &[CMatrix]) -> Result<CMatrix> {
    MoiPlan::new(spec).apply(sym, region, xs)
}

/// Largest number of tuples for which [`MoiOperator`] tabulates its symbol.
pub const TABLE_CAP: usize = 1 << 21;

/// A transform bound to its spectral data, symbol and region.
///
/// When every spectral group has rank one and there are at most
/// [`TABLE_CAP`] index tuples, the symbol restricted to the region is
/// tabulated once, so repeated applications only do the contraction.
#[derive(Clone, Debug)]
pub struct MoiOperator {
    plan: MoiPlan,
    symbol: MoiSymbol,
    region: Region,
    table: Option<Arc<Vec<Complex64>>>,
}

impl MoiOperator {
    pub fn new(spec: &SpectralUnitary, symbol: MoiSymbol, region: Region) -> Result<Self> {
        symbol.validate()?;
        region.validate(symbol.arity())?;
        let plan = MoiPlan::new(spec);
        let table = plan.tabulate(&symbol, &region)?.map(Arc::new);
        Ok(Self { plan, symbol, region, table })
    }

    pub fn order(&self) -> usize {
        self.symbol.arity() - 1
    }

    pub fn symbol(&self) -> &MoiSymbol {
        &self.symbol
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn plan(&self) -> &MoiPlan {
        &self.plan
    }

    pub fn apply(&self, xs: &[CMatrix]) -> Result<CMatrix> {
        match &self.table {
            Some(t) => self.plan.apply_tabulated(t, self.order(), xs),
            None => self.plan.apply(&self.symbol, &self.region, xs),
        }
    }

    pub fn is_tabulated(&self) -> bool {
        self.table.is_some()
    }

    /// The transform with symbol `phi*` and region `B*`, satisfying
    /// `tr(x_0 T(x_1..x_n)) = tr(T*(x_0..x_{n-1}) x_n)`.
    pub fn trace_dual(&self) -> Self {
        let g = self.plan.occupied_groups();
        let arity = self.symbol.arity();
        // dual[(m_0, .., m_n)] = table[(m_1, .., m_n, m_0)]
        let table = self.table.as_ref().map(|t| {
            let top = g.pow(arity as u32 - 1);
            Arc::new((0..t.len()).map(|flat| t[(flat % top) * g + flat / top]).collect())
        });
        Self {
            plan: self.plan.clone(),
            symbol: self.symbol.clone().cyclic_shift(),
            region: self.region.clone().cyclic_shift(),
            table,
        }
    }
}
