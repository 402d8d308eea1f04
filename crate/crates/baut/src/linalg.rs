//! Exact sparse linear algebra over the rationals.
//!
//! Everything here works with sparse rational vectors sorted by index. Bases
//! handed back to callers are in reduced row echelon form, so outputs are
//! deterministic given canonical bases. Rank-only computations use forward
//! elimination without back-substitution. No floating point anywhere.

use std::collections::BTreeMap;

use crate::algebra::Q;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Sparse vector: (index, coefficient) pairs sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Q)>;

pub fn sparse_from_dense(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

pub fn sparse_is_zero(v: &SparseVec) -> bool {
    v.is_empty()
}

pub fn sparse_scale(v: &SparseVec, c: &Q) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// a + c*b
pub fn sparse_add_scaled(a: &SparseVec, c: &Q, b: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + c * &b[j].1;
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Forward echelon basis: one row per pivot, rows normalized to leading 1 but
/// not back-substituted. Used for ranks and membership on large spaces.
#[derive(Clone, Debug, Default)]
pub struct ForwardEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl ForwardEchelon {
    pub fn new() -> Self {
        ForwardEchelon { rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduces v against the basis (the residual has no support on
    /// pivot indices).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut work: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut out = SparseVec::new();
        while let Some((&i, _)) = work.iter().next() {
            let c = work.remove(&i).unwrap();
            if c.is_zero() {
                continue;
            }
            if let Some(row) = self.rows.get(&i) {
                for (j, x) in row.iter().skip(1) {
                    let e = work.entry(*j).or_insert_with(Q::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        work.remove(j);
                    }
                }
            } else {
                out.push((i, c));
            }
        }
        out
    }

    /// Inserts v; returns true when the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        // Reduce only until a fresh pivot is found.
        let mut work: BTreeMap<usize, Q> = v.iter().cloned().collect();
        while let Some((&i, _)) = work.iter().next() {
            let c = work[&i].clone();
            if c.is_zero() {
                work.remove(&i);
                continue;
            }
            match self.rows.get(&i) {
                Some(row) => {
                    work.remove(&i);
                    for (j, x) in row.iter().skip(1) {
                        let e = work.entry(*j).or_insert_with(Q::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            work.remove(j);
                        }
                    }
                }
                None => {
                    let inv = Q::one() / c;
                    let row: SparseVec =
                        work.iter().map(|(j, x)| (*j, x * &inv)).collect();
                    self.rows.insert(i, row);
                    return true;
                }
            }
        }
        false
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        sparse_is_zero(&self.reduce(v))
    }
}

/// A subspace of Q^n held as reduced row echelon rows (leading 1 per row,
/// pivot columns cleared from the other rows).
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    pub ncols: usize,
    rows: Vec<SparseVec>, // pivot columns strictly increasing
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces v against the rows; the result has no support on pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_with_coords(v).0
    }

    /// Reduces v and records the coefficient taken on each row.
    pub fn reduce_with_coords(&self, v: &SparseVec) -> (SparseVec, Vec<Q>) {
        let mut work: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut coords = vec![Q::zero(); self.rows.len()];
        let mut out = SparseVec::new();
        while let Some((&i, _)) = work.iter().next() {
            let c = work.remove(&i).unwrap();
            if c.is_zero() {
                continue;
            }
            match self.pivots.binary_search(&i) {
                Ok(r) => {
                    coords[r] = &coords[r] + &c;
                    for (j, x) in self.rows[r].iter().skip(1) {
                        let e = work.entry(*j).or_insert_with(Q::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            work.remove(j);
                        }
                    }
                }
                Err(_) => out.push((i, c)),
            }
        }
        (out, coords)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        sparse_is_zero(&self.reduce(v))
    }

    /// Inserts v, keeping reduced echelon form. Returns true when the
    /// dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let red = self.reduce(v);
        match red.first() {
            None => false,
            Some((pivot, lead)) => {
                let pivot = *pivot;
                let inv = Q::one() / lead.clone();
                let new_row = sparse_scale(&red, &inv);
                for r in 0..self.rows.len() {
                    let c = self.rows[r]
                        .iter()
                        .find(|(j, _)| *j == pivot)
                        .map(|(_, c)| c.clone());
                    if let Some(c) = c {
                        self.rows[r] = sparse_add_scaled(&self.rows[r], &-c, &new_row);
                    }
                }
                let pos = self.pivots.partition_point(|&p| p < pivot);
                self.pivots.insert(pos, pivot);
                self.rows.insert(pos, new_row);
                true
            }
        }
    }

    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut s = RowSpace::new(ncols);
        for r in rows {
            s.insert(&r);
        }
        s
    }

    /// Representatives of Q^ncols / self: the standard basis vectors at
    /// non-pivot columns, in index order.
    pub fn quotient_basis(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|i| self.pivots.binary_search(i).is_err())
            .collect()
    }
}

/// Sparse rational matrix, row major.
#[derive(Clone, Debug)]
pub struct QMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<SparseVec>,
}

impl QMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        QMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        QMatrix { nrows: rows.len(), ncols, rows }
    }

    /// Builds the matrix whose j-th column is `cols[j]` (entries in Q^nrows).
    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                rows[*i].push((j, c.clone()));
            }
        }
        for r in &mut rows {
            r.sort_by_key(|&(j, _)| j);
        }
        QMatrix { nrows, ncols: cols.len(), rows }
    }

    pub fn set(&mut self, i: usize, j: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(p) => row[p].1 = c,
            Err(p) => row.insert(p, (j, c)),
        }
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    /// Matrix-vector product (x indexed by columns).
    pub fn apply(&self, x: &SparseVec) -> Result<SparseVec, LinalgError> {
        if let Some((i, _)) = x.last() {
            if *i >= self.ncols {
                return Err(LinalgError::DimensionMismatch { expected: self.ncols, got: i + 1 });
            }
        }
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Q::zero();
            let (mut a, mut b) = (0, 0);
            while a < row.len() && b < x.len() {
                match row[a].0.cmp(&x[b].0) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        acc += &row[a].1 * &x[b].1;
                        a += 1;
                        b += 1;
                    }
                }
            }
            if !acc.is_zero() {
                out.push((i, acc));
            }
        }
        Ok(out)
    }

    /// Row space of the matrix in reduced echelon form.
    pub fn row_space(&self) -> RowSpace {
        let mut s = RowSpace::new(self.ncols);
        for r in &self.rows {
            s.insert(r);
        }
        s
    }

    /// Rank via forward elimination only.
    pub fn rank(&self) -> usize {
        let mut e = ForwardEchelon::new();
        for r in &self.rows {
            e.insert(r);
        }
        e.dim()
    }

    /// Basis of ker(M) ⊆ Q^ncols in reduced echelon form; one vector per free
    /// column with unit coefficient there, in column order.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let rs = self.row_space();
        let pivots = rs.pivots();
        let mut out = Vec::new();
        for free in rs.quotient_basis() {
            let mut v: SparseVec = vec![(free, Q::one())];
            for (r, &p) in pivots.iter().enumerate() {
                let c = rs.rows()[r]
                    .iter()
                    .find(|(j, _)| *j == free)
                    .map(|(_, c)| c.clone());
                if let Some(c) = c {
                    v = sparse_add_scaled(&v, &-c, &vec![(p, Q::one())]);
                }
            }
            v.sort_by_key(|&(j, _)| j);
            out.push(v);
        }
        out
    }

    /// Basis of the column space, as echelon vectors in Q^nrows.
    pub fn image_basis(&self) -> Vec<SparseVec> {
        self.transpose().row_space().rows().to_vec()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row {
                rows[*j].push((i, c.clone()));
            }
        }
        QMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// Solves M x = v; None when v is not in the image.
    pub fn preimage(&self, v: &SparseVec) -> Result<Option<SparseVec>, LinalgError> {
        if let Some((i, _)) = v.last() {
            if *i >= self.nrows {
                return Err(LinalgError::DimensionMismatch { expected: self.nrows, got: i + 1 });
            }
        }
        // Forward-eliminate the columns of M while tracking the combination of
        // columns that produced each basis row.
        let t = self.transpose();
        let mut basis: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
        let reduce = |basis: &BTreeMap<usize, (SparseVec, SparseVec)>,
                      vec: &SparseVec,
                      comb: SparseVec| {
            let mut work: BTreeMap<usize, Q> = vec.iter().cloned().collect();
            let mut comb = comb;
            let mut out = SparseVec::new();
            while let Some((&i, _)) = work.iter().next() {
                let c = work.remove(&i).unwrap();
                if c.is_zero() {
                    continue;
                }
                match basis.get(&i) {
                    Some((row, rcomb)) => {
                        for (j, x) in row.iter().skip(1) {
                            let e = work.entry(*j).or_insert_with(Q::zero);
                            *e -= &c * x;
                            if e.is_zero() {
                                work.remove(j);
                            }
                        }
                        comb = sparse_add_scaled(&comb, &-c, rcomb);
                    }
                    None => out.push((i, c)),
                }
            }
            (out, comb)
        };
        for (j, col) in t.rows.iter().enumerate() {
            let (red, comb) = reduce(&basis, col, vec![(j, Q::one())]);
            if let Some((pivot, lead)) = red.first().cloned() {
                let inv = Q::one() / lead;
                basis.insert(pivot, (sparse_scale(&red, &inv), sparse_scale(&comb, &inv)));
            }
        }
        let (red, comb) = reduce(&basis, v, SparseVec::new());
        if sparse_is_zero(&red) {
            let mut sol = sparse_scale(&comb, &-Q::one());
            sol.sort_by_key(|&(j, _)| j);
            Ok(Some(sol))
        } else {
            Ok(None)
        }
    }
}

/// Kernel-mod-image data for one degree of a chain complex, with canonical
/// class representatives in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim_space: usize,
    pub cycles: RowSpace,
    pub boundaries: RowSpace,
    pub reps: RowSpace,
}

impl Homology {
    /// cycles: kernel vectors; boundaries: image vectors (inside the cycles).
    pub fn new(dim_space: usize, cycles: Vec<SparseVec>, boundaries: Vec<SparseVec>) -> Self {
        let cyc = RowSpace::from_rows(dim_space, cycles.clone());
        let bnd = RowSpace::from_rows(dim_space, boundaries);
        let mut reps = RowSpace::new(dim_space);
        for c in &cycles {
            let r = bnd.reduce(c);
            reps.insert(&r);
        }
        Homology { dim_space, cycles: cyc, boundaries: bnd, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        self.reps.rows()
    }

    /// Class coordinates of a cycle in the representative basis; None when the
    /// vector is not a cycle.
    pub fn class_coords(&self, v: &SparseVec) -> Option<Vec<Q>> {
        if !self.cycles.contains(v) {
            return None;
        }
        let red = self.boundaries.reduce(v);
        let (rest, coords) = self.reps.reduce_with_coords(&red);
        debug_assert!(sparse_is_zero(&rest));
        Some(coords)
    }

    pub fn is_boundary(&self, v: &SparseVec) -> bool {
        self.boundaries.contains(v)
    }
}
