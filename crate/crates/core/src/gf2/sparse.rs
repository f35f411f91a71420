//! Row-compressed sparse matrices over GF(2).

use super::gf64::Gf64;
use super::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// CSR matrix with 0/1 entries; each row's columns are strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseGF2Matrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
}

impl SparseGF2Matrix {
    pub fn empty(n_cols: usize) -> Self {
        Self {
            n_rows: 0,
            n_cols,
            row_ptr: vec![0],
            cols: Vec::new(),
        }
    }

    pub fn from_rows(n_cols: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let mut m = Self::empty(n_cols);
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    /// Append a row given by its sorted nonzero columns.
    pub fn push_row(&mut self, cols: &[usize]) -> Result<()> {
        for w in cols.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid("row columns must be strictly increasing"));
            }
        }
        if let Some(&last) = cols.last() {
            if last >= self.n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "column {last} out of range {}",
                    self.n_cols
                )));
            }
        }
        self.cols.extend(cols.iter().map(|&c| c as u32));
        self.row_ptr.push(self.cols.len());
        self.n_rows += 1;
        Ok(())
    }

    /// Append an already validated row.
    pub(crate) fn push_row_unchecked(&mut self, cols: &[u32]) {
        debug_assert!(cols.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(cols.last().is_none_or(|&c| (c as usize) < self.n_cols));
        self.cols.extend_from_slice(cols);
        self.row_ptr.push(self.cols.len());
        self.n_rows += 1;
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    /// `A·x` over GF(2^64).
    pub fn apply(&self, x: &[Gf64]) -> Result<Vec<Gf64>> {
        if x.len() != self.n_cols {
            return Err(self.mismatch("apply", x.len(), self.n_cols));
        }
        let mut out = vec![Gf64::ZERO; self.n_rows];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_into(&self, x: &[Gf64], out: &mut [Gf64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n_rows) {
            *o = self
                .row(i)
                .iter()
                .fold(Gf64::ZERO, |acc, &c| acc + x[c as usize]);
        }
    }

    /// `Aᵀ·u` over GF(2^64).
    pub fn apply_transpose(&self, u: &[Gf64]) -> Result<Vec<Gf64>> {
        if u.len() != self.n_rows {
            return Err(self.mismatch("apply_transpose", u.len(), self.n_rows));
        }
        let mut out = vec![Gf64::ZERO; self.n_cols];
        self.apply_transpose_into(u, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_transpose_into(&self, u: &[Gf64], out: &mut [Gf64]) {
        out[..self.n_cols].fill(Gf64::ZERO);
        for (i, &ui) in u.iter().enumerate().take(self.n_rows) {
            if ui.is_zero() {
                continue;
            }
            for &c in self.row(i) {
                out[c as usize] += ui;
            }
        }
    }

    /// `A·x` over GF(2).
    pub fn mul_bits(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.n_cols {
            return Err(self.mismatch("mul_bits", x.len(), self.n_cols));
        }
        let mut out = BitVec::zeros(self.n_rows);
        for i in 0..self.n_rows {
            let bit = self
                .row(i)
                .iter()
                .fold(false, |acc, &c| acc ^ x.get(c as usize));
            out.set(i, bit);
        }
        Ok(out)
    }

    /// `u·A` over GF(2).
    pub fn left_mul_bits(&self, u: &BitVec) -> Result<BitVec> {
        if u.len() != self.n_rows {
            return Err(self.mismatch("left_mul_bits", u.len(), self.n_rows));
        }
        let mut out = BitVec::zeros(self.n_cols);
        for i in u.ones() {
            for &c in self.row(i) {
                out.toggle(c as usize);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseGF2Matrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.cols {
            counts[c as usize + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut cols = vec![0u32; self.cols.len()];
        let mut fill = counts;
        for i in 0..self.n_rows {
            for &c in self.row(i) {
                cols[fill[c as usize]] = i as u32;
                fill[c as usize] += 1;
            }
        }
        SparseGF2Matrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr,
            cols,
        }
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            for &c in self.row(i) {
                m.set(i, c as usize, true);
            }
        }
        m
    }

    pub fn from_dense(m: &BitMatrix) -> Self {
        let mut s = Self::empty(m.n_cols());
        for i in 0..m.n_rows() {
            let cols: Vec<u32> = m.row(i).ones().map(|c| c as u32).collect();
            s.push_row_unchecked(&cols);
        }
        s
    }

    /// Random matrix with about `per_row` distinct nonzeros in each row.
    pub fn random(n_rows: usize, n_cols: usize, per_row: usize, rng: &mut SplitMix64) -> Self {
        let mut m = Self::empty(n_cols);
        for _ in 0..n_rows {
            let mut cols: Vec<u32> = (0..per_row.min(n_cols))
                .map(|_| rng.below(n_cols as u64) as u32)
                .collect();
            cols.sort_unstable();
            cols.dedup();
            m.push_row_unchecked(&cols);
        }
        m
    }

    fn mismatch(&self, op: &str, got: usize, want: usize) -> Error {
        Error::DimensionMismatch(format!(
            "{op}: vector of length {got}, matrix is {}x{} (expected {want})",
            self.n_rows, self.n_cols
        ))
    }
}
