//! Boolean Macaulay matrices.
//!
//! Row `(j, t)` holds the coefficients of `φ(t·f_j)`, where `φ` reduces every
//! exponent to at most one. Columns are the squarefree monomials of degree at
//! most `d` in descending grevlex order, so the constant monomial is the last
//! column. A system has no boolean solution whenever `e_last` lies in the row
//! space.

use std::io::{self, Write};

pub use crate::monomial::{Monomial, MonomialIndex};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, SparseGF2Matrix};
use crate::poly::{QuadraticPoly, QuadraticSystem};

#[derive(Clone, Debug)]
pub struct MacaulayMatrix {
    index: MonomialIndex,
    matrix: SparseGF2Matrix,
    provenance: Vec<(usize, Monomial)>,
}

/// Sorted columns of `φ(t·f)`; monomials colliding under `φ` cancel.
pub fn phi_multiply(t: Monomial, f: &QuadraticPoly, index: &MonomialIndex) -> Vec<u32> {
    phi_multiply_monomials(t, &f.monomials(), index)
}

fn phi_multiply_monomials(t: Monomial, f: &[Monomial], index: &MonomialIndex) -> Vec<u32> {
    let mut cols: Vec<u32> = f.iter().map(|&m| index.rank(t.phi_mul(m)) as u32).collect();
    cols.sort_unstable();
    let mut out = Vec::with_capacity(cols.len());
    let mut i = 0;
    while i < cols.len() {
        let mut j = i;
        while j < cols.len() && cols[j] == cols[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(cols[i]);
        }
        i = j;
    }
    out
}

/// Macaulay matrix of `s` in degree `d ≥ 2`, rows ordered by polynomial and
/// then by descending multiplier.
pub fn build(s: &QuadraticSystem, d: usize) -> Result<MacaulayMatrix> {
    if d < 2 {
        return Err(Error::invalid(format!(
            "Macaulay degree must be at least 2, got {d}"
        )));
    }
    let nv = s.n();
    let index = MonomialIndex::new(nv, d)?;
    if index.len() > u32::MAX as usize {
        return Err(Error::ScaleCap {
            what: "Macaulay columns",
            value: index.len(),
            cap: u32::MAX as usize,
        });
    }
    let multipliers: Vec<Monomial> = MonomialIndex::new(nv, d - 2)?.iter().collect();
    let mut matrix = SparseGF2Matrix::empty(index.len());
    let mut provenance = Vec::with_capacity(s.m() * multipliers.len());
    for (j, f) in s.polys().iter().enumerate() {
        let monos = f.monomials();
        for &t in &multipliers {
            matrix.push_row_unchecked(&phi_multiply_monomials(t, &monos, &index));
            provenance.push((j, t));
        }
    }
    Ok(MacaulayMatrix {
        index,
        matrix,
        provenance,
    })
}

/// `e_last`, the coefficient vector of the constant polynomial `1`.
pub fn rhs_vector(index: &MonomialIndex) -> BitVec {
    BitVec::unit(index.len(), index.constant_column())
}

impl MacaulayMatrix {
    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn degree(&self) -> usize {
        self.index.max_degree()
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.index
    }

    pub fn sparse(&self) -> &SparseGF2Matrix {
        &self.matrix
    }

    pub fn to_dense(&self) -> BitMatrix {
        self.matrix.to_dense()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        self.matrix.row(i)
    }

    /// `(j, t)`: row `i` is `φ(t·f_j)`.
    pub fn provenance(&self, i: usize) -> (usize, Monomial) {
        self.provenance[i]
    }

    pub fn rhs(&self) -> BitVec {
        rhs_vector(&self.index)
    }

    /// The polynomial `Σ_i u_i·row_i`, as monomials in column order.
    pub fn combination(&self, u: &BitVec) -> Result<Vec<Monomial>> {
        let sum = self.matrix.left_mul_bits(u)?;
        sum.ones().map(|c| self.index.unrank(c)).collect()
    }

    /// Multipliers `h_j` with `Σ_j φ(h_j·f_j) = Σ_i u_i·row_i`; each `h_j` is
    /// a list of distinct monomials.
    pub fn multipliers(&self, u: &BitVec, m: usize) -> Result<Vec<Vec<Monomial>>> {
        if u.len() != self.n_rows() {
            return Err(Error::DimensionMismatch(format!(
                "combination of length {} against {} rows",
                u.len(),
                self.n_rows()
            )));
        }
        let mut out = vec![Vec::new(); m];
        for i in u.ones() {
            let (j, t) = self.provenance[i];
            out[j].push(t);
        }
        Ok(out)
    }

    /// Triplet dump: header `n_rows n_cols 2`, then `row col 1` with 1-based
    /// indices.
    pub fn write_sms<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {} 2", self.n_rows(), self.n_cols())?;
        for (i, row) in self.matrix.rows().enumerate() {
            for &c in row {
                writeln!(w, "{} {} 1", i + 1, c + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, random_system, Assignment};
    use std::collections::BTreeSet;

    fn var(i: usize) -> Monomial {
        Monomial::from_vars(&[i])
    }

    fn mono(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars)
    }

    fn poly(n: usize, monos: &[Monomial]) -> QuadraticPoly {
        QuadraticPoly::from_monomials(n, monos.iter().copied()).unwrap()
    }

    fn cols_of(index: &MonomialIndex, monos: &[Monomial]) -> Vec<u32> {
        let mut v: Vec<u32> = monos.iter().map(|&m| index.rank(m) as u32).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn phi_products() {
        let idx = MonomialIndex::new(2, 3).unwrap();
        let f = poly(2, &[var(1), var(2)]);
        assert_eq!(
            phi_multiply(var(1), &f, &idx),
            cols_of(&idx, &[var(1), mono(&[1, 2])])
        );
        let g = poly(2, &[mono(&[1, 2]), var(2)]);
        assert_eq!(
            phi_multiply(var(2), &g, &idx),
            cols_of(&idx, &[mono(&[1, 2]), var(2)])
        );
        assert!(phi_multiply(var(1), &g, &idx).is_empty());
    }

    #[test]
    fn build_examples() {
        let s = parse("p 2 1\nx1*x2 + 1\n").unwrap();
        let m = build(&s, 2).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (1, 4));
        assert_eq!(m.row(0), &[0, 3]);

        let s = parse("p 2 1\nx1 + x2\n").unwrap();
        let m = build(&s, 3).unwrap();
        let idx = m.index().clone();
        assert_eq!(m.n_rows(), 3);
        // multipliers in descending order: x1, x2, 1
        let want = [
            cols_of(&idx, &[var(1), mono(&[1, 2])]),
            cols_of(&idx, &[mono(&[1, 2]), var(2)]),
            cols_of(&idx, &[var(1), var(2)]),
        ];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(m.row(i), w.as_slice(), "row {i}");
        }
        assert_eq!(m.provenance(2), (0, Monomial::ONE));

        let s = random_system(10, 10, 1).unwrap();
        let m = build(&s, 3).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (110, 176));
        assert!(build(&s, 1).is_err());
    }

    #[test]
    fn rhs_examples() {
        for (nv, col) in [(3, 6), (2, 3)] {
            let r = rhs_vector(&MonomialIndex::new(nv, 2).unwrap());
            assert_eq!(r.ones().collect::<Vec<_>>(), vec![col]);
        }
    }

    #[test]
    fn sms_dump() {
        let s = parse("p 2 1\nx1*x2 + 1\n").unwrap();
        let m = build(&s, 2).unwrap();
        let mut out = Vec::new();
        m.write_sms(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 4 2\n1 1 1\n1 4 1\n");
    }

    /// Independent oracle: multiply monomial sets and reduce by hand.
    fn naive_row(t: Monomial, f: &QuadraticPoly) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for m in f.monomials() {
            let p = t.0 | m.0;
            if !out.remove(&p) {
                out.insert(p);
            }
        }
        out
    }

    #[test]
    fn rows_match_naive_products() {
        for seed in 0..20 {
            let s = random_system(6, 4, seed).unwrap();
            for d in 2..=5 {
                let m = build(&s, d).unwrap();
                for i in 0..m.n_rows() {
                    let (j, t) = m.provenance(i);
                    let got: BTreeSet<u64> = m
                        .row(i)
                        .iter()
                        .map(|&c| m.index().unrank(c as usize).unwrap().0)
                        .collect();
                    assert_eq!(got, naive_row(t, &s.polys()[j]));
                    assert!(m.row(i).len() <= 1 + 6 + 15);
                }
            }
        }
    }

    fn brute_solutions(s: &QuadraticSystem) -> Vec<Assignment> {
        (0..1u64 << s.n())
            .map(|x| Assignment::from_u64(s.n(), x))
            .filter(|a| s.is_solution(a).unwrap())
            .collect()
    }

    #[test]
    fn row_combinations_vanish_on_solutions() {
        let mut rng = crate::rng::SplitMix64::new(8);
        for seed in 0..30 {
            let s = random_system(7, 5, seed).unwrap();
            let sols = brute_solutions(&s);
            let m = build(&s, 3).unwrap();
            for _ in 0..10 {
                let u = BitVec::from_bools(
                    &(0..m.n_rows())
                        .map(|_| rng.next_u64() & 1 == 1)
                        .collect::<Vec<_>>(),
                );
                let monos = m.combination(&u).unwrap();
                for a in &sols {
                    let value = monos
                        .iter()
                        .fold(false, |acc, &mo| acc ^ a.monomial_value(mo));
                    assert!(!value);
                }
            }
        }
    }

    #[test]
    fn certificate_implies_no_solution() {
        let mut found = 0;
        for seed in 0..200 {
            let n = 4 + (seed as usize % 7);
            let s = random_system(n, n + 2, seed).unwrap();
            let m = build(&s, 3).unwrap();
            if let Some(u) = m.to_dense().solve_left(&m.rhs()).unwrap() {
                found += 1;
                assert!(brute_solutions(&s).is_empty(), "seed {seed}");
                assert_eq!(m.combination(&u).unwrap(), vec![Monomial::ONE]);
            }
        }
        assert!(found > 0);
    }
}
