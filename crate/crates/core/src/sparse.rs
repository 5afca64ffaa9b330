//! Exact sparse matrices in column-major form.
//!
//! Zero entries are never stored, so two matrices are equal exactly when their
//! entry maps are equal.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type SparseVector<S> = BTreeMap<usize, S>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    rows: usize,
    cols: usize,
    columns: BTreeMap<usize, BTreeMap<usize, S>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, S)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in entries {
            m.add_at(r, c, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&S> {
        self.columns.get(&col).and_then(|c| c.get(&row))
    }

    /// Entry value, with absent entries read as zero.
    pub fn value(&self, row: usize, col: usize) -> S {
        self.get(row, col).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        assert!(
            row < self.rows && col < self.cols,
            "entry ({row}, {col}) outside {}x{}",
            self.rows,
            self.cols
        );
        if value.is_zero() {
            if let Some(column) = self.columns.get_mut(&col) {
                column.remove(&row);
                if column.is_empty() {
                    self.columns.remove(&col);
                }
            }
        } else {
            self.columns.entry(col).or_default().insert(row, value);
        }
    }

    pub fn add_at(&mut self, row: usize, col: usize, value: S) {
        let sum = self.value(row, col) + value;
        self.set(row, col, sum);
    }

    pub fn column(&self, col: usize) -> Option<&BTreeMap<usize, S>> {
        self.columns.get(&col)
    }

    /// Entries ordered by column, then row.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.columns
            .iter()
            .flat_map(|(&c, col)| col.iter().map(move |(&r, v)| (r, c, v)))
    }

    /// Entries ordered by row, then column.
    pub fn entries_row_major(&self) -> Vec<(usize, usize, &S)> {
        let mut all: Vec<_> = self.entries().collect();
        all.sort_by_key(|&(r, c, _)| (r, c));
        all
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::DimensionMismatch {
            left: format!("{}x{}", self.rows, self.cols),
            right: format!("{}x{}", other.rows, other.cols),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::from_entries(
            self.rows,
            self.cols,
            self.entries()
                .map(|(r, c, v)| (r, c, factor.clone() * v.clone())),
        )
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&c, other_col) in &other.columns {
            let mut acc: BTreeMap<usize, S> = BTreeMap::new();
            for (&k, b) in other_col {
                if let Some(self_col) = self.columns.get(&k) {
                    for (&r, a) in self_col {
                        let term = a.clone() * b.clone();
                        match acc.get_mut(&r) {
                            Some(slot) => *slot = slot.clone() + term,
                            None => {
                                acc.insert(r, term);
                            }
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            if !acc.is_empty() {
                out.columns.insert(c, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_entries(
            self.cols,
            self.rows,
            self.entries().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn apply(&self, vector: &SparseVector<S>) -> SparseVector<S> {
        let mut out: SparseVector<S> = BTreeMap::new();
        for (&k, x) in vector {
            if let Some(col) = self.columns.get(&k) {
                for (&r, a) in col {
                    let term = a.clone() * x.clone();
                    let sum = out.remove(&r).map_or(term.clone(), |s| s + term);
                    if !sum.is_zero() {
                        out.insert(r, sum);
                    }
                }
            }
        }
        out
    }

    /// The block `rows × cols`, re-indexed from zero.
    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (&c, col) in self.columns.range(cols.clone()) {
            for (&r, v) in col.range(rows.clone()) {
                out.set(r - rows.start, c - cols.start, v.clone());
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        SparseMatrix::from_entries(
            self.rows,
            self.cols,
            self.entries().map(|(r, c, v)| (r, c, f(v))),
        )
    }

    /// True when every column has exactly one entry, equal to one, and every row
    /// is hit exactly once.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols || self.nnz() != self.rows {
            return false;
        }
        let mut hit = vec![false; self.rows];
        for (r, _, v) in self.entries() {
            if !v.is_one() || hit[r] {
                return false;
            }
            hit[r] = true;
        }
        self.columns.len() == self.cols
    }
}
