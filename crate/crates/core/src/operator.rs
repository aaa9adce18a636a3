//! Finite-propagation operators: per-component sparse matrices whose
//! nonzero entries are confined to a tracked controlled set.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::numeric;
use crate::relation::Relation;
use crate::space::{BoxSpace, PointSet};
use crate::Result;

/// One component block in CSR form. Row `x`, column `y`: entry at `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CsrBlock {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl CsrBlock {
    fn from_triplets(n: usize, mut triplets: Vec<(u32, u32, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(x, y, _)| (x, y));
        // Accumulate duplicates, drop exact zeros.
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(triplets.len());
        for (x, y, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == x && last.1 == y => last.2 += v,
                _ => merged.push((x, y, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != 0.0);
        let mut row_ptr = vec![0usize; n + 1];
        for &(x, _, _) in &merged {
            row_ptr[x as usize + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col = merged.iter().map(|&(_, y, _)| y).collect();
        let val = merged.iter().map(|&(_, _, v)| v).collect();
        CsrBlock {
            n,
            row_ptr,
            col,
            val,
        }
    }

    fn nnz(&self) -> usize {
        self.col.len()
    }

    fn entry(&self, x: u32, y: u32) -> f64 {
        let lo = self.row_ptr[x as usize];
        let hi = self.row_ptr[x as usize + 1];
        match self.col[lo..hi].binary_search(&y) {
            Ok(i) => self.val[lo + i],
            Err(_) => 0.0,
        }
    }

    /// out = A v
    fn matvec(&self, v: &[f64], out: &mut [f64]) {
        for (x, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[x]..self.row_ptr[x + 1] {
                acc += self.val[k] * v[self.col[k] as usize];
            }
            *slot = acc;
        }
    }

    /// out = A^T v
    fn matvec_transpose(&self, v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (x, &vx) in v.iter().enumerate() {
            if vx == 0.0 {
                continue;
            }
            for k in self.row_ptr[x]..self.row_ptr[x + 1] {
                out[self.col[k] as usize] += self.val[k] * vx;
            }
        }
    }

    fn transpose(&self) -> Self {
        let triplets = self.triplets().map(|(x, y, v)| (y, x, v)).collect();
        CsrBlock::from_triplets(self.n, triplets)
    }

    fn triplets(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.n).flat_map(move |x| {
            (self.row_ptr[x]..self.row_ptr[x + 1])
                .map(move |k| (x as u32, self.col[k], self.val[k]))
        })
    }

    /// Column squared norms, i.e. the diagonal of A^T A.
    fn column_norms_sq(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for k in 0..self.nnz() {
            d[self.col[k] as usize] += self.val[k] * self.val[k];
        }
        d
    }
}

/// A finite-propagation operator: sparse real entries per component plus a
/// `propagation` relation that bounds the nonzero support. The propagation
/// is a conservative superset; it is never pruned after cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationOperator {
    space: Arc<BoxSpace>,
    blocks: Vec<CsrBlock>,
    propagation: Relation,
}

impl PropagationOperator {
    /// The identity operator; propagation is the diagonal.
    pub fn identity(space: Arc<BoxSpace>) -> Self {
        let blocks = space
            .sizes()
            .iter()
            .map(|&s| {
                let n = s as usize;
                CsrBlock::from_triplets(n, (0..s).map(|i| (i, i, 1.0)).collect())
            })
            .collect();
        PropagationOperator {
            space: space.clone(),
            blocks,
            propagation: Relation::diagonal(space),
        }
    }

    /// The 0/1 indicator operator of a relation (e.g. a graph adjacency
    /// matrix when the relation is an edge set). Propagation is the
    /// relation itself.
    pub fn indicator(relation: &Relation) -> Self {
        let space = relation.space().clone();
        let blocks = space
            .sizes()
            .iter()
            .enumerate()
            .map(|(c, &s)| {
                let triplets = relation
                    .component_pairs(c as u32)
                    .iter()
                    .map(|&(x, y)| (x, y, 1.0))
                    .collect();
                CsrBlock::from_triplets(s as usize, triplets)
            })
            .collect();
        PropagationOperator {
            space,
            blocks,
            propagation: relation.clone(),
        }
    }

    /// Builds an operator from `(component, (row, col, value))` entries.
    /// With `propagation = None` the support pattern itself is used; an
    /// explicit propagation must contain the support.
    pub fn from_entries<I>(
        space: Arc<BoxSpace>,
        entries: I,
        propagation: Option<Relation>,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, (u32, u32, f64))>,
    {
        let mut per_comp: Vec<Vec<(u32, u32, f64)>> = vec![Vec::new(); space.component_count()];
        for (c, (x, y, v)) in entries {
            let size = space.size(c)?;
            if x >= size {
                return Err(Error::PointOutOfRange {
                    component: c,
                    index: x,
                });
            }
            if y >= size {
                return Err(Error::PointOutOfRange {
                    component: c,
                    index: y,
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidValue { value: v });
            }
            per_comp[c as usize].push((x, y, v));
        }
        let blocks: Vec<CsrBlock> = per_comp
            .into_iter()
            .zip(space.sizes())
            .map(|(t, &s)| CsrBlock::from_triplets(s as usize, t))
            .collect();
        let support = support_relation(&space, &blocks)?;
        let propagation = match propagation {
            None => support,
            Some(p) => {
                if p.space() != &space {
                    return Err(Error::SpaceMismatch);
                }
                if !support.is_subset_of(&p) {
                    return Err(Error::Invalid(alloc::string::String::from(
                        "nonzero entries fall outside the declared propagation",
                    )));
                }
                p
            }
        };
        Ok(PropagationOperator {
            space,
            blocks,
            propagation,
        })
    }

    pub fn space(&self) -> &Arc<BoxSpace> {
        &self.space
    }

    pub fn propagation(&self) -> &Relation {
        &self.propagation
    }

    /// The exact nonzero pattern (a subset of the propagation).
    pub fn support(&self) -> Relation {
        support_relation(&self.space, &self.blocks).expect("entries are in range")
    }

    pub fn entry(&self, component: u32, x: u32, y: u32) -> f64 {
        self.blocks[component as usize].entry(x, y)
    }

    pub fn nnz(&self) -> usize {
        self.blocks.iter().map(CsrBlock::nnz).sum()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Matrix product per component; propagation composes.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let n = a.n;
            let mut triplets = Vec::new();
            let mut acc = vec![0.0f64; n];
            let mut touched: Vec<u32> = Vec::new();
            for x in 0..n {
                for k in a.row_ptr[x]..a.row_ptr[x + 1] {
                    let z = a.col[k] as usize;
                    let axz = a.val[k];
                    for j in b.row_ptr[z]..b.row_ptr[z + 1] {
                        let y = b.col[j];
                        if acc[y as usize] == 0.0 {
                            touched.push(y);
                        }
                        acc[y as usize] += axz * b.val[j];
                    }
                }
                for &y in &touched {
                    let v = acc[y as usize];
                    if v != 0.0 {
                        triplets.push((x as u32, y, v));
                    }
                    acc[y as usize] = 0.0;
                }
                touched.clear();
            }
            blocks.push(CsrBlock::from_triplets(n, triplets));
        }
        let propagation = self.propagation.compose(&other.propagation)?;
        Ok(PropagationOperator {
            space: self.space.clone(),
            blocks,
            propagation,
        })
    }

    /// Entry-wise sum; propagation is the union.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let mut t: Vec<(u32, u32, f64)> = a.triplets().collect();
                t.extend(b.triplets());
                CsrBlock::from_triplets(a.n, t)
            })
            .collect();
        let propagation = self.propagation.union(&other.propagation)?;
        Ok(PropagationOperator {
            space: self.space.clone(),
            blocks,
            propagation,
        })
    }

    /// Scalar multiple; propagation unchanged.
    pub fn scale(&self, factor: f64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let t = b.triplets().map(|(x, y, v)| (x, y, v * factor)).collect();
                CsrBlock::from_triplets(b.n, t)
            })
            .collect();
        PropagationOperator {
            space: self.space.clone(),
            blocks,
            propagation: self.propagation.clone(),
        }
    }

    /// Conjugate transpose (entries are real, so just the transpose);
    /// propagation inverts.
    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(CsrBlock::transpose).collect();
        PropagationOperator {
            space: self.space.clone(),
            blocks,
            propagation: self.propagation.inverse(),
        }
    }

    /// Zeroes every column listed in `drop` (a set within one component);
    /// other components are untouched. This is `a (1 - P_drop)`.
    pub fn zero_columns(&self, drop: &PointSet) -> Self {
        let c = drop.component() as usize;
        let mut blocks = self.blocks.clone();
        if c < blocks.len() {
            let t = blocks[c]
                .triplets()
                .filter(|&(_, y, _)| !drop.contains(y))
                .collect();
            blocks[c] = CsrBlock::from_triplets(blocks[c].n, t);
        }
        let prop_pairs: Vec<(u32, (u32, u32))> = self
            .propagation
            .iter()
            .filter(|&(pc, (_, y))| pc as usize != c || !drop.contains(y))
            .collect();
        let propagation =
            Relation::from_pairs(self.space.clone(), prop_pairs).expect("pairs stay in range");
        PropagationOperator {
            space: self.space.clone(),
            blocks,
            propagation,
        }
    }

    /// Per-component spectral norm via power iteration on `a* a`, converged
    /// when successive norm estimates differ by less than `tol`.
    pub fn operator_norm(&self, tol: f64) -> Result<Vec<f64>> {
        self.blocks
            .iter()
            .map(|b| {
                if b.nnz() == 0 {
                    return Ok(0.0);
                }
                let mut tmp = vec![0.0; b.n];
                let (lambda, _) = numeric::top_eigenpair(
                    |v, out| {
                        b.matvec(v, &mut tmp);
                        b.matvec_transpose(&tmp, out);
                    },
                    b.n,
                    tol,
                    f64::INFINITY,
                )?;
                Ok(numeric::sqrt(lambda.max(0.0)))
            })
            .collect()
    }

    /// The overall spectral norm: the maximum over components.
    pub fn norm(&self, tol: f64) -> Result<f64> {
        Ok(self.operator_norm(tol)?.into_iter().fold(0.0, f64::max))
    }

    /// Norm of the column restriction `a P_Y`, computed as the top
    /// eigenvalue of the dense Gram matrix of the selected columns.
    /// An empty `Y` gives 0.
    pub fn compressed_norm(&self, set: &PointSet, tol: f64) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        let block = &self.blocks[set.component() as usize];
        let m = set.len();
        // Columns of the block, restricted to Y.
        let csc = block.transpose(); // rows of csc = columns of block
        let sel: Vec<u32> = set.iter().collect();
        let mut gram = vec![0.0f64; m * m];
        for (i, &yi) in sel.iter().enumerate() {
            for (j, &yj) in sel.iter().enumerate().skip(i) {
                let mut acc = 0.0;
                let (li, hi) = (csc.row_ptr[yi as usize], csc.row_ptr[yi as usize + 1]);
                let (lj, hj) = (csc.row_ptr[yj as usize], csc.row_ptr[yj as usize + 1]);
                let (mut p, mut q) = (li, lj);
                while p < hi && q < hj {
                    match csc.col[p].cmp(&csc.col[q]) {
                        core::cmp::Ordering::Less => p += 1,
                        core::cmp::Ordering::Greater => q += 1,
                        core::cmp::Ordering::Equal => {
                            acc += csc.val[p] * csc.val[q];
                            p += 1;
                            q += 1;
                        }
                    }
                }
                gram[i * m + j] = acc;
                gram[j * m + i] = acc;
            }
        }
        let (lambda, _) = numeric::top_eigenpair(
            |v, out| {
                for (r, o) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (cidx, x) in v.iter().enumerate() {
                        acc += gram[r * m + cidx] * x;
                    }
                    *o = acc;
                }
            },
            m,
            tol,
            f64::INFINITY,
        )?;
        Ok(numeric::sqrt(lambda.max(0.0)))
    }

    /// Applies the component block: `out = A_c v`.
    pub(crate) fn apply_component(&self, component: u32, v: &[f64], out: &mut [f64]) {
        self.blocks[component as usize].matvec(v, out);
    }

    /// Applies the transposed component block: `out = A_c^T v`.
    pub(crate) fn apply_component_transpose(&self, component: u32, v: &[f64], out: &mut [f64]) {
        self.blocks[component as usize].matvec_transpose(v, out);
    }

    /// Diagonal of `A_c^T A_c` (column squared norms).
    pub(crate) fn gram_diagonal(&self, component: u32) -> Vec<f64> {
        self.blocks[component as usize].column_norms_sq()
    }

    /// Entries of one component as `(row, col, value)` triplets.
    pub fn component_triplets(&self, component: u32) -> Vec<(u32, u32, f64)> {
        self.blocks[component as usize].triplets().collect()
    }

    pub fn component_dim(&self, component: u32) -> usize {
        self.blocks[component as usize].n
    }
}

fn support_relation(space: &Arc<BoxSpace>, blocks: &[CsrBlock]) -> Result<Relation> {
    let mut pairs = Vec::new();
    for (c, b) in blocks.iter().enumerate() {
        for (x, y, _) in b.triplets() {
            pairs.push((c as u32, (x, y)));
        }
    }
    Relation::from_pairs(space.clone(), pairs)
}
