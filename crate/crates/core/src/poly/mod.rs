//! Reduced quadratic boolean polynomials and systems of them.
//!
//! Coefficients are stored as a bitset over the basis `{x_i x_j} ∪ {x_i} ∪ {1}`
//! in descending grevlex order, the same order used by the `.anf` format,
//! by [`random_system`] and by Macaulay matrix columns.

mod anf;

pub use anf::{parse, serialize};

use std::cmp::Ordering;
use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIndex, MAX_VARS};
use crate::rng::BitStream;

/// Size of the quadratic basis, `C(n,2) + n + 1`.
pub fn basis_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2 + n + 1
}

fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::ScaleCap {
            what: "variables",
            value: n,
            cap: MAX_VARS,
        });
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticPoly {
    n: usize,
    coeffs: Vec<u64>,
}

impl QuadraticPoly {
    pub fn zero(n: usize) -> Result<Self> {
        check_vars(n)?;
        Ok(Self {
            n,
            coeffs: vec![0; basis_len(n).div_ceil(64)],
        })
    }

    /// Sum of the given monomials; repeated monomials cancel.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(
        n: usize,
        monomials: I,
    ) -> Result<Self> {
        let mut p = Self::zero(n)?;
        let idx = p.index();
        for m in monomials {
            let col = idx.try_rank(m)?;
            p.toggle_column(col);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn index(&self) -> MonomialIndex {
        MonomialIndex::new(self.n, 2).expect("n checked at construction")
    }

    #[inline]
    pub fn column(&self, col: usize) -> bool {
        (self.coeffs[col / 64] >> (col % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn toggle_column(&mut self, col: usize) {
        self.coeffs[col / 64] ^= 1 << (col % 64);
    }

    pub fn coeff(&self, m: Monomial) -> bool {
        self.index()
            .try_rank(m)
            .map(|c| self.column(c))
            .unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&w| w == 0)
    }

    /// Column indices of the nonzero coefficients, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Monomials with nonzero coefficient, in descending grevlex order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let idx = self.index();
        self.support()
            .map(|c| idx.unrank(c).expect("column in range"))
            .collect()
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        if a.n != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                got: a.n,
            });
        }
        Ok(self
            .monomials()
            .into_iter()
            .fold(false, |acc, m| acc ^ a.monomial_value(m)))
    }

    /// Dense form used for fast repeated evaluation.
    pub fn form(&self) -> QuadraticForm {
        let mut f = QuadraticForm {
            n: self.n,
            constant: false,
            linear: 0,
            upper: vec![0; self.n],
        };
        for m in self.monomials() {
            match m.degree() {
                0 => f.constant ^= true,
                1 => f.linear ^= m.0,
                _ => {
                    let lo = m.0.trailing_zeros() as usize;
                    f.upper[lo] ^= m.0 & !(1 << lo);
                }
            }
        }
        f
    }
}

impl BitXor for &QuadraticPoly {
    type Output = QuadraticPoly;

    fn bitxor(self, rhs: &QuadraticPoly) -> QuadraticPoly {
        assert_eq!(self.n, rhs.n, "xor of polynomials in different rings");
        QuadraticPoly {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

impl fmt::Display for QuadraticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monomials = self.monomials();
        if monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in monomials.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if m.degree() == 0 {
                f.write_str("1")?;
            } else {
                let vars = m.vars();
                for (j, v) in vars.iter().enumerate() {
                    if j > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "x{v}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QuadraticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticPoly(n={}, {})", self.n, self)
    }
}

/// `c + Σ l_i x_i + Σ_{i<j} q_ij x_i x_j` with one mask per row of the
/// strictly upper triangular part. Variables are bits of a `u64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub n: usize,
    pub constant: bool,
    pub linear: u64,
    /// `upper[i]` has bit `j` set iff `x_{i+1} x_{j+1}` appears, `j > i`.
    pub upper: Vec<u64>,
}

impl QuadraticForm {
    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        let mut acc = self.constant as u32 ^ (self.linear & x).count_ones();
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= (self.upper[i] & x).count_ones();
            bits &= bits - 1;
        }
        acc & 1 == 1
    }

    /// Bit `j` set iff `x_{i+1} x_{j+1}` appears (either order).
    pub fn neighbours(&self, i: usize) -> u64 {
        let mut mask = self.upper[i];
        for (j, row) in self.upper.iter().enumerate().take(i) {
            if row >> i & 1 == 1 {
                mask |= 1 << j;
            }
        }
        mask
    }
}

/// Values of `x_1, …, x_n`. Ordered by the integer encoding with `x_1` as
/// the least significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: usize,
    words: Vec<u64>,
}

impl Assignment {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64).max(1)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self {
            n: bits.len(),
            words,
        }
    }

    /// Low `n` bits of `value`; `n ≤ 64`.
    pub fn from_u64(n: usize, value: u64) -> Self {
        assert!(n <= 64);
        let value = if n == 64 {
            value
        } else {
            value & ((1u64 << n) - 1)
        };
        Self {
            n,
            words: vec![value],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.get(i)).collect()
    }

    /// Integer encoding when `n ≤ 64`.
    pub fn as_u64(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub(crate) fn monomial_value(&self, m: Monomial) -> bool {
        m.0 & !self.words[0] == 0
    }

    /// Binary string, `x_1` first.
    pub fn to_bit_string(&self) -> String {
        (0..self.n)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl Ord for Assignment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Assignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({})", self.to_bit_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    n: usize,
    polys: Vec<QuadraticPoly>,
}

impl QuadraticSystem {
    pub fn new(n: usize, polys: Vec<QuadraticPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a system needs at least one variable"));
        }
        if polys.is_empty() {
            return Err(Error::invalid("a system needs at least one polynomial"));
        }
        if let Some(p) = polys.iter().find(|p| p.n != n) {
            return Err(Error::WidthMismatch {
                expected: n,
                got: p.n,
            });
        }
        Ok(Self { n, polys })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[QuadraticPoly] {
        &self.polys
    }

    pub fn is_solution(&self, a: &Assignment) -> Result<bool> {
        for p in &self.polys {
            if p.evaluate(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Substitutes `x_{n-k+1}, …, x_n` by `tail` (`k = tail.len()`), giving
    /// a system in the first `n - k` variables.
    pub fn specialize(&self, tail: &[bool]) -> Result<QuadraticSystem> {
        let k = tail.len();
        if k >= self.n {
            return Err(Error::invalid(format!(
                "cannot specialize {k} of {} variables",
                self.n
            )));
        }
        let head = self.n - k;
        let tail_mask = tail
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (b as u64) << (head + i));
        let head_bits = if head == 64 {
            u64::MAX
        } else {
            (1u64 << head) - 1
        };
        let polys = self
            .polys
            .iter()
            .map(|p| {
                // a monomial survives iff its tail part is set in the tail,
                // leaving its head part
                let kept = p
                    .monomials()
                    .into_iter()
                    .filter(|m| m.0 & !head_bits & !tail_mask == 0)
                    .map(|m| Monomial(m.0 & head_bits));
                QuadraticPoly::from_monomials(head, kept)
            })
            .collect::<Result<Vec<_>>>()?;
        QuadraticSystem::new(head, polys)
    }
}

/// Random system with every coefficient drawn from the splitmix64 bit
/// stream of `seed`, in serialization order (polynomial 1 first, each in
/// descending grevlex).
pub fn random_system(n: usize, m: usize, seed: u64) -> Result<QuadraticSystem> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("random_system needs n, m >= 1"));
    }
    let mut bits = BitStream::new(seed);
    let len = basis_len(n);
    let polys = (0..m)
        .map(|_| {
            let mut p = QuadraticPoly::zero(n)?;
            for col in 0..len {
                if bits.next_bit() {
                    p.toggle_column(col);
                }
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    QuadraticSystem::new(n, polys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars)
    }

    fn example() -> QuadraticPoly {
        // x1*x2 + x3 + 1
        QuadraticPoly::from_monomials(3, [m(&[1, 2]), m(&[3]), Monomial::ONE]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let p = example();
        let at = |bits: &[bool]| p.evaluate(&Assignment::from_bits(bits)).unwrap();
        assert!(!at(&[true, true, false]));
        assert!(at(&[false, false, false]));
        assert!(!at(&[true, false, true]));
    }

    #[test]
    fn evaluate_width_mismatch() {
        let err = example()
            .evaluate(&Assignment::from_bits(&[true, false]))
            .unwrap_err();
        assert_eq!(
            err,
            Error::WidthMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn form_agrees_with_evaluate() {
        let s = random_system(7, 5, 11).unwrap();
        for p in s.polys() {
            let form = p.form();
            for x in 0..128u64 {
                assert_eq!(
                    form.eval(x),
                    p.evaluate(&Assignment::from_u64(7, x)).unwrap()
                );
            }
        }
    }

    #[test]
    fn specialize_examples() {
        let sys = |p: QuadraticPoly| QuadraticSystem::new(3, vec![p]).unwrap();
        // x1*x3 + x2, x3 = 1  ->  x1 + x2
        let s = sys(QuadraticPoly::from_monomials(3, [m(&[1, 3]), m(&[2])]).unwrap());
        let got = s.specialize(&[true]).unwrap();
        assert_eq!(
            got.polys()[0],
            QuadraticPoly::from_monomials(2, [m(&[1]), m(&[2])]).unwrap()
        );
        // x3, x3 = 0  ->  0
        let s = sys(QuadraticPoly::from_monomials(3, [m(&[3])]).unwrap());
        assert!(s.specialize(&[false]).unwrap().polys()[0].is_zero());
        // x1*x2 + x2*x3 + x3, x3 = 1  ->  x1*x2 + x2 + 1
        let s = sys(QuadraticPoly::from_monomials(3, [m(&[1, 2]), m(&[2, 3]), m(&[3])]).unwrap());
        let want = QuadraticPoly::from_monomials(2, [m(&[1, 2]), m(&[2]), Monomial::ONE]).unwrap();
        assert_eq!(s.specialize(&[true]).unwrap().polys()[0], want);
    }

    #[test]
    fn specialize_rejects_full_tail() {
        let s = random_system(3, 2, 0).unwrap();
        assert!(s.specialize(&[true, false, true]).is_err());
    }

    #[test]
    fn random_system_is_deterministic() {
        assert_eq!(
            random_system(9, 4, 42).unwrap(),
            random_system(9, 4, 42).unwrap()
        );
    }

    #[test]
    fn random_system_consumes_bits_in_basis_order() {
        let s = random_system(3, 2, 5).unwrap();
        let mut stream = BitStream::new(5);
        for p in s.polys() {
            for col in 0..basis_len(3) {
                assert_eq!(p.column(col), stream.next_bit());
            }
        }
    }

    #[test]
    fn system_validation() {
        assert!(QuadraticSystem::new(2, vec![]).is_err());
        let p3 = QuadraticPoly::zero(3).unwrap();
        assert!(matches!(
            QuadraticSystem::new(2, vec![p3]),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn assignment_order_is_integer_order() {
        let mut v: Vec<Assignment> = [5u64, 1, 6, 0, 3]
            .iter()
            .map(|&x| Assignment::from_u64(3, x))
            .collect();
        v.sort();
        let ints: Vec<u64> = v.iter().map(|a| a.as_u64().unwrap()).collect();
        assert_eq!(ints, vec![0, 1, 3, 5, 6]);
        assert_eq!(Assignment::from_u64(3, 1).to_bit_string(), "100");
    }
}
