//! Bit-packed dense matrices over GF(2).

use super::BitVec;
use crate::error::{Error, Result};

/// Row-major GF(2) matrix; padding bits past `n_cols` are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Result of [`BitMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    /// Reduced echelon form; rows `rank..` are zero.
    pub echelon: BitMatrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// `transform · input = echelon`; rows `rank..` span the left kernel.
    pub transform: BitMatrix,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let stride = n_cols.div_ceil(64);
        Self {
            n_rows,
            n_cols,
            stride,
            data: vec![0; stride * n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    pub fn from_bitvecs(n_cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            m.row_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n_rows && j < self.n_cols);
        (self.data[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n_rows && j < self.n_cols);
        let w = &mut self.data[i * self.stride + j / 64];
        let mask = 1u64 << (j % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        assert!(i < self.n_rows && j < self.n_cols);
        self.data[i * self.stride + j / 64] ^= 1u64 << (j % 64);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_words(self.n_cols, self.row_words(i).to_vec())
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= x;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..(a.min(b) + 1) * s].swap_with_slice(&mut hi[..s]);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in BitVec::from_words(self.n_cols, self.row_words(i).to_vec()).ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `M·x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.n_cols
            )));
        }
        let mut out = BitVec::zeros(self.n_rows);
        for i in 0..self.n_rows {
            let bit = self
                .row_words(i)
                .iter()
                .zip(x.words())
                .fold(0, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            out.set(i, bit == 1);
        }
        Ok(out)
    }

    /// `u·M`.
    pub fn mul_vec_left(&self, u: &BitVec) -> Result<BitVec> {
        if u.len() != self.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                u.len(),
                self.n_rows
            )));
        }
        let mut acc = vec![0u64; self.stride];
        for i in u.ones() {
            for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                *a ^= w;
            }
        }
        Ok(BitVec::from_words(self.n_cols, acc))
    }

    /// Reduced row echelon form together with the row operations used.
    pub fn rref(&self) -> Rref {
        let mut e = self.clone();
        let mut t = BitMatrix::identity(self.n_rows);
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.n_cols {
            if rank == self.n_rows {
                break;
            }
            let Some(p) = (rank..self.n_rows).find(|&r| e.get(r, col)) else {
                continue;
            };
            e.swap_rows(p, rank);
            t.swap_rows(p, rank);
            for r in 0..self.n_rows {
                if r != rank && e.get(r, col) {
                    e.xor_row_into(rank, r);
                    t.xor_row_into(rank, r);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Rref {
            echelon: e,
            rank,
            pivots,
            transform: t,
        }
    }

    /// Rank without tracking the transform.
    pub fn rank(&self) -> usize {
        let mut e = self.clone();
        let mut rank = 0;
        for col in 0..self.n_cols {
            if rank == self.n_rows {
                break;
            }
            let Some(p) = (rank..self.n_rows).find(|&r| e.get(r, col)) else {
                continue;
            };
            e.swap_rows(p, rank);
            for r in rank + 1..self.n_rows {
                if e.get(r, col) {
                    e.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Some `u` with `u·M = r`, checked before returning, or `None` when `r`
    /// is outside the row space.
    pub fn solve_left(&self, r: &BitVec) -> Result<Option<BitVec>> {
        self.rref().solve_left(self, r)
    }

    /// Some `x` with `M·x = b`, or `None` when `b` is outside the column space.
    pub fn solve_right(&self, b: &BitVec) -> Result<Option<BitVec>> {
        self.transpose().solve_left(b)
    }
}

impl Rref {
    /// Left solve against the matrix this decomposition was computed from.
    pub fn solve_left(&self, m: &BitMatrix, r: &BitVec) -> Result<Option<BitVec>> {
        if r.len() != m.n_cols {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} columns",
                r.len(),
                m.n_cols
            )));
        }
        let mut rest = r.clone();
        let mut u = BitVec::zeros(m.n_rows);
        for (i, &col) in self.pivots.iter().enumerate() {
            if rest.get(col) {
                rest.xor_assign(&self.echelon.row(i));
                u.xor_assign(&self.transform.row(i));
            }
        }
        if !rest.is_zero() {
            return Ok(None);
        }
        if m.mul_vec_left(&u)? != *r {
            return Err(Error::invalid("left solve produced an unverified witness"));
        }
        Ok(Some(u))
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            let s: String = (0..self.n_cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn random(rows: usize, cols: usize, rng: &mut SplitMix64) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.next_u64() & 1 == 1);
            }
        }
        m
    }

    /// Rank via the size of the row space, enumerated exhaustively.
    fn rowspace_rank(m: &BitMatrix) -> usize {
        let mut seen = HashSet::new();
        for mask in 0u64..(1 << m.n_rows()) {
            let u = BitVec::from_words(m.n_rows(), vec![mask]);
            seen.insert(m.mul_vec_left(&u).unwrap());
        }
        seen.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(8).rank(), 8);
        let m = BitMatrix::from_rows(&[vec![true, true], vec![true, true]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rref().rank, 1);
    }

    #[test]
    fn rank_matches_rowspace_enumeration() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            let m = random(12, 16, &mut rng);
            assert_eq!(m.rank(), rowspace_rank(&m));
        }
    }

    #[test]
    fn solve_left_examples() {
        let id = BitMatrix::identity(4);
        assert_eq!(
            id.solve_left(&BitVec::unit(4, 2)).unwrap(),
            Some(BitVec::unit(4, 2))
        );
        let z = BitMatrix::zeros(4, 6);
        assert_eq!(z.solve_left(&BitVec::unit(6, 0)).unwrap(), None);
        assert!(z.solve_left(&BitVec::zeros(5)).is_err());
    }

    #[test]
    fn solve_left_matches_enumeration() {
        let mut rng = SplitMix64::new(4);
        for _ in 0..200 {
            let m = random(4, 6, &mut rng);
            let r = BitVec::from_words(6, vec![rng.next_u64() & 0x3f]);
            let reachable = (0u64..16)
                .any(|mask| m.mul_vec_left(&BitVec::from_words(4, vec![mask])).unwrap() == r);
            match m.solve_left(&r).unwrap() {
                Some(u) => {
                    assert!(reachable);
                    assert_eq!(m.mul_vec_left(&u).unwrap(), r);
                }
                None => assert!(!reachable),
            }
        }
    }

    #[test]
    fn transform_reproduces_echelon() {
        let mut rng = SplitMix64::new(5);
        let m = random(10, 7, &mut rng);
        let rr = m.rref();
        for i in 0..m.n_rows() {
            let combo = m.mul_vec_left(&rr.transform.row(i)).unwrap();
            assert_eq!(combo, rr.echelon.row(i));
        }
    }

    proptest! {
        #[test]
        fn solve_left_finds_combinations(seed: u64, rows in 1usize..20, cols in 1usize..90) {
            let mut rng = SplitMix64::new(seed);
            let m = random(rows, cols, &mut rng);
            let u0 = BitVec::from_bools(&(0..rows).map(|_| rng.next_u64() & 1 == 1).collect::<Vec<_>>());
            let r = m.mul_vec_left(&u0).unwrap();
            let u = m.solve_left(&r).unwrap().expect("in row space");
            prop_assert_eq!(m.mul_vec_left(&u).unwrap(), r);
        }

        #[test]
        fn rank_invariant_under_transpose(seed: u64, rows in 1usize..64, cols in 1usize..64) {
            let mut rng = SplitMix64::new(seed);
            let m = random(rows, cols, &mut rng);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
