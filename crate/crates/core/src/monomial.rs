//! Squarefree monomials and their position in descending grevlex order.
//!
//! A squarefree monomial in `nv ≤ 64` variables is a bitmask, bit `i` set
//! when `x_{i+1}` divides it. Among monomials of one degree, descending
//! grevlex (with `x1 > x2 > …`) coincides with ascending colexicographic
//! order of the variable sets, which is ascending numeric order of the
//! masks. Columns are therefore laid out as: all degree-`d` monomials in
//! increasing mask order, then degree `d - 1`, and so on down to the
//! constant monomial in the last column.

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        Monomial(1 << i)
    }

    /// From 1-based variable indices in any order.
    pub fn from_vars(vars: &[usize]) -> Self {
        Monomial(vars.iter().fold(0, |acc, &v| acc | 1u64 << (v - 1)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Sorted 1-based variable indices.
    pub fn vars(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        out
    }

    /// Squarefree product, i.e. `φ(self · other)`.
    pub fn phi_mul(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }
}

/// Binomial coefficients `C(a, b)` for `a ≤ 64` as `u64`.
#[derive(Clone, Debug)]
pub(crate) struct Binomials {
    table: Vec<[u64; MAX_VARS + 1]>,
}

impl Binomials {
    pub(crate) fn new() -> Self {
        let mut table = vec![[0u64; MAX_VARS + 1]; MAX_VARS + 1];
        for a in 0..=MAX_VARS {
            table[a][0] = 1;
            for b in 1..=a {
                table[a][b] =
                    table[a - 1][b - 1].saturating_add(if b < a { table[a - 1][b] } else { 0 });
            }
        }
        Self { table }
    }

    #[inline]
    pub(crate) fn get(&self, a: usize, b: usize) -> u64 {
        if b > a {
            0
        } else {
            self.table[a][b]
        }
    }
}

fn binomials() -> &'static Binomials {
    static TABLE: std::sync::OnceLock<Binomials> = std::sync::OnceLock::new();
    TABLE.get_or_init(Binomials::new)
}

/// Bijection between squarefree monomials of degree `≤ d` in `nv` variables
/// and column indices `0..len()`.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    nv: usize,
    d: usize,
    /// `offsets[e]`: first column of the degree-`e` block.
    offsets: Vec<usize>,
    len: usize,
}

impl MonomialIndex {
    pub fn new(nv: usize, d: usize) -> Result<Self> {
        if nv > MAX_VARS {
            return Err(Error::ScaleCap {
                what: "variables",
                value: nv,
                cap: MAX_VARS,
            });
        }
        let b = binomials();
        let mut offsets = vec![0usize; d + 1];
        let mut acc = 0usize;
        for e in (0..=d).rev() {
            offsets[e] = acc;
            acc = acc
                .checked_add(usize::try_from(b.get(nv, e)).unwrap_or(usize::MAX))
                .ok_or_else(|| Error::invalid("monomial index does not fit in memory"))?;
        }
        Ok(Self {
            nv,
            d,
            offsets,
            len: acc,
        })
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn max_degree(&self) -> usize {
        self.d
    }

    /// Number of columns, `Σ_{i≤d} C(nv, i)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Column of the constant monomial.
    pub fn constant_column(&self) -> usize {
        self.len - 1
    }

    /// Column index of `m`. Panics in debug builds if `m` uses a variable
    /// beyond `nv`; use [`MonomialIndex::try_rank`] for checked access.
    #[inline]
    pub fn rank(&self, m: Monomial) -> usize {
        debug_assert!(self.nv == 64 || m.0 >> self.nv == 0);
        let deg = m.degree();
        debug_assert!(deg <= self.d);
        let b = binomials();
        let mut r = 0u64;
        let mut bits = m.0;
        let mut i = 1;
        while bits != 0 {
            let pos = bits.trailing_zeros() as usize;
            r += b.get(pos, i);
            bits &= bits - 1;
            i += 1;
        }
        self.offsets[deg] + r as usize
    }

    pub fn try_rank(&self, m: Monomial) -> Result<usize> {
        if self.nv < 64 && m.0 >> self.nv != 0 {
            return Err(Error::invalid(format!(
                "monomial uses a variable beyond x{}",
                self.nv
            )));
        }
        if m.degree() > self.d {
            return Err(Error::invalid(format!(
                "monomial degree {} exceeds {}",
                m.degree(),
                self.d
            )));
        }
        Ok(self.rank(m))
    }

    /// Inverse of [`MonomialIndex::rank`].
    pub fn unrank(&self, col: usize) -> Result<Monomial> {
        if col >= self.len {
            return Err(Error::invalid(format!(
                "column {col} out of range {}",
                self.len
            )));
        }
        let deg = (0..=self.d)
            .rev()
            .find(|&e| col >= self.offsets[e] && (e == 0 || col < self.offsets[e - 1]))
            .expect("column lies in some degree block");
        let mut r = (col - self.offsets[deg]) as u64;
        let b = binomials();
        let mut mask = 0u64;
        for i in (1..=deg).rev() {
            // largest position p with C(p, i) <= r
            let mut p = i - 1;
            while p + 1 < self.nv && b.get(p + 1, i) <= r {
                p += 1;
            }
            r -= b.get(p, i);
            mask |= 1 << p;
        }
        Ok(Monomial(mask))
    }

    /// Monomials of degree exactly `e`, in descending grevlex order.
    pub fn monomials_of_degree(&self, e: usize) -> impl Iterator<Item = Monomial> {
        SubsetIter::new(self.nv, e).map(Monomial)
    }

    /// All monomials of degree `≤ d`, in column order.
    pub fn iter(&self) -> impl Iterator<Item = Monomial> + '_ {
        (0..=self.d)
            .rev()
            .flat_map(move |e| self.monomials_of_degree(e))
    }
}

/// `e`-subsets of `0..nv` as increasing bitmasks (Gosper's hack).
struct SubsetIter {
    nv: usize,
    next: Option<u64>,
}

impl SubsetIter {
    fn new(nv: usize, e: usize) -> Self {
        let next = if e > nv {
            None
        } else if e == 0 {
            Some(0)
        } else if e == 64 {
            Some(u64::MAX)
        } else {
            Some((1u64 << e) - 1)
        };
        Self { nv, next }
    }
}

impl Iterator for SubsetIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            if overflow {
                None
            } else {
                let n = (((r ^ cur) >> 2) / c) | r;
                (self.nv == 64 || n >> self.nv == 0).then_some(n)
            }
        };
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_ranks_three_variables() {
        let idx = MonomialIndex::new(3, 2).unwrap();
        let cases: [(&[usize], usize); 7] = [
            (&[1, 2], 0),
            (&[1, 3], 1),
            (&[2, 3], 2),
            (&[1], 3),
            (&[2], 4),
            (&[3], 5),
            (&[], 6),
        ];
        for (vars, col) in cases {
            assert_eq!(idx.rank(Monomial::from_vars(vars)), col, "{vars:?}");
            assert_eq!(idx.unrank(col).unwrap(), Monomial::from_vars(vars));
        }
        assert_eq!(idx.constant_column(), 6);
    }

    #[test]
    fn degree_two_order_matches_grevlex() {
        // x1x2 > x1x3 > x2x3 > x1x4 > x2x4 > x3x4
        let idx = MonomialIndex::new(4, 2).unwrap();
        let got: Vec<Vec<usize>> = idx.monomials_of_degree(2).map(|m| m.vars()).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn rank_unrank_bijection() {
        for nv in 0..9 {
            for d in 0..=nv + 1 {
                let idx = MonomialIndex::new(nv, d).unwrap();
                let all: Vec<Monomial> = idx.iter().collect();
                assert_eq!(all.len(), idx.len());
                for (col, m) in all.iter().enumerate() {
                    assert_eq!(idx.rank(*m), col);
                    assert_eq!(idx.unrank(col).unwrap(), *m);
                }
            }
        }
    }

    #[test]
    fn try_rank_rejects_high_degree() {
        let idx = MonomialIndex::new(4, 2).unwrap();
        assert!(idx.try_rank(Monomial::from_vars(&[1, 2, 3])).is_err());
        assert!(idx.try_rank(Monomial::from_vars(&[5])).is_err());
    }
}
