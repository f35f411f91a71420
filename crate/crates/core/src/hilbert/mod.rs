//! Truncated Hilbert series of boolean semi-regular systems.
//!
//! Everything here revolves around the power series
//! `S_{nv,m}(t) = (1+t)^nv / ((1-t)(1+t²)^m)`. The index of its first
//! nonpositive coefficient is the Macaulay degree `d0` used by the solver;
//! the series truncated just before that index is `HS_{nv,m}`, of degree
//! `d0 - 1`. Coefficients grow exponentially, so they are kept as big
//! integers.

pub mod asymptotic;
pub mod cost;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use asymptotic::{exponent, f_alpha_gamma, m_asym, optimal_gamma, LinearAlgebra};
pub use cost::{
    best_concrete_cost, concrete_cost, exhaustive_search_log2, first_crossover, log2_big,
    macaulay_sizes, quad_min_n, quad_table, CostEstimate, CostMethod, MacaulaySizes,
};

/// Prefix `coeffs[0..=cap]` of an integer power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Option<&BigInt> {
        self.coeffs.get(d)
    }

    /// Index of the first coefficient `≤ 0`.
    pub fn first_nonpositive(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_positive())
    }

    /// The series cut just before its first nonpositive coefficient.
    pub fn truncated(&self) -> TruncatedSeries {
        let end = self.first_nonpositive().unwrap_or(self.coeffs.len());
        TruncatedSeries {
            coeffs: self.coeffs[..end].to_vec(),
        }
    }

    /// Degree of the polynomial prefix (`None` when empty).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// `C(n, 0..=cap)` as big integers.
fn binomial_row(n: usize, cap: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(cap + 1);
    let mut c = BigInt::one();
    for d in 0..=cap {
        if d > n {
            row.push(BigInt::zero());
            continue;
        }
        if d > 0 {
            c = c * BigInt::from(n - d + 1) / BigInt::from(d);
        }
        row.push(c.clone());
    }
    row
}

/// Coefficients of `(1+t²)^{-m}` up to `t^cap`: `(-1)^i C(m+i-1, i)` at `t^{2i}`.
fn inverse_square_power(m: usize, cap: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cap + 1];
    let mut c = BigInt::one();
    for i in 0..=cap / 2 {
        if i > 0 {
            c = c * BigInt::from(m + i - 1) / BigInt::from(i);
        }
        out[2 * i] = if i % 2 == 0 { c.clone() } else { -c.clone() };
    }
    out
}

/// Exact coefficients of `(1+t)^nv / ((1-t)(1+t²)^m)` up to degree `cap`.
pub fn series_prefix(nv: usize, m: usize, cap: usize) -> TruncatedSeries {
    let num = binomial_row(nv, cap);
    let den = inverse_square_power(m, cap);
    let mut coeffs = Vec::with_capacity(cap + 1);
    let mut running = BigInt::zero();
    for d in 0..=cap {
        // only even offsets of `den` are nonzero
        let mut term = BigInt::zero();
        for j in (0..=d).step_by(2) {
            if !num[d - j].is_zero() {
                term += &num[d - j] * &den[j];
            }
        }
        running += term;
        coeffs.push(running.clone());
    }
    TruncatedSeries { coeffs }
}

fn d0_cap(nv: usize) -> usize {
    nv + 3
}

/// Smallest `d` with `[t^d] S_{nv,m} ≤ 0`, scanning up to `nv + 3`.
pub fn d0(nv: usize, m: usize) -> Result<usize> {
    first_nonpositive(nv, m).map(|(d, _)| d)
}

/// The coefficient at index [`d0`], with its sign.
pub fn first_nonpositive_value(nv: usize, m: usize) -> Result<BigInt> {
    first_nonpositive(nv, m).map(|(_, v)| v)
}

/// Degree of `HS_{nv,m}`, i.e. `d0 - 1`.
pub fn hilbert_degree(nv: usize, m: usize) -> Result<usize> {
    Ok(d0(nv, m)? - 1)
}

fn first_nonpositive(nv: usize, m: usize) -> Result<(usize, BigInt)> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let cap = d0_cap(nv);
    // d0 is usually far below the cap; grow the prefix geometrically
    let mut len = 8.min(cap);
    loop {
        let s = series_prefix(nv, m, len);
        if let Some(d) = s.first_nonpositive() {
            return Ok((d, s.coeffs[d].clone()));
        }
        if len >= cap {
            return Err(Error::NoNonpositiveCoefficient { nv, m, cap });
        }
        len = (len * 2).min(cap);
    }
}

/// `d0(nv, m)` for every `nv` in `0..=nv_max` at fixed `m`, using
/// `S_{nv+1,m} = (1+t)·S_{nv,m}` so the whole table costs one pass per
/// prefix length.
pub fn d0_table(nv_max: usize, m: usize) -> Vec<Result<usize>> {
    if m == 0 {
        return vec![Err(Error::invalid("m must be at least 1")); nv_max + 1];
    }
    let mut len = 16.min(d0_cap(nv_max));
    loop {
        let mut out = Vec::with_capacity(nv_max + 1);
        let mut cur = series_prefix(0, m, len).coeffs;
        let mut need_more = false;
        for nv in 0..=nv_max {
            if nv > 0 {
                for d in (1..=len).rev() {
                    let prev = cur[d - 1].clone();
                    cur[d] += prev;
                }
            }
            let cap = d0_cap(nv);
            match cur.iter().take(cap + 1).position(|c| !c.is_positive()) {
                Some(d) => out.push(Ok(d)),
                None if len >= cap => out.push(Err(Error::NoNonpositiveCoefficient { nv, m, cap })),
                None => {
                    need_more = true;
                    break;
                }
            }
        }
        if !need_more {
            return out;
        }
        len = (len * 2).min(d0_cap(nv_max));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    /// Independent oracle: expand the rational function by repeated
    /// multiplication by `(1+t)` and division by `(1-t)` and `(1+t²)`.
    fn oracle(nv: usize, m: usize, cap: usize) -> Vec<i64> {
        let mut s = vec![0i64; cap + 1];
        s[0] = 1;
        for _ in 0..nv {
            for d in (1..=cap).rev() {
                s[d] += s[d - 1];
            }
        }
        for _ in 0..m {
            // divide by (1+t²): y_d = x_d - y_{d-2}
            for d in 2..=cap {
                s[d] -= s[d - 2];
            }
        }
        for d in 1..=cap {
            s[d] += s[d - 1];
        }
        s
    }

    #[test]
    fn series_examples() {
        assert_eq!(&ints(&series_prefix(3, 4, 3)), &[1, 4, 3, -8]);
        assert_eq!(&ints(&series_prefix(2, 2, 3)), &[1, 3, 2, -2]);
        assert_eq!(
            ints(&series_prefix(0, 1, 11)),
            vec![1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0]
        );
    }

    #[test]
    fn series_matches_oracle() {
        for nv in 0..12 {
            for m in 1..12 {
                assert_eq!(
                    ints(&series_prefix(nv, m, 14)),
                    oracle(nv, m, 14),
                    "nv={nv} m={m}"
                );
            }
        }
    }

    #[test]
    fn d0_examples() {
        assert_eq!(d0(3, 4).unwrap(), 3);
        assert_eq!(d0(2, 2).unwrap(), 3);
        assert_eq!(d0(3, 10).unwrap(), 2);
        assert_eq!(first_nonpositive_value(3, 4).unwrap(), BigInt::from(-8));
        assert_eq!(first_nonpositive_value(2, 2).unwrap(), BigInt::from(-2));
        assert_eq!(first_nonpositive_value(1, 1).unwrap(), BigInt::zero());
        assert_eq!(d0(1, 1).unwrap(), 3);
    }

    #[test]
    fn d0_fails_outside_overdetermined_regime() {
        // a single equation in many variables never turns nonpositive early
        assert!(matches!(
            d0(30, 1),
            Err(Error::NoNonpositiveCoefficient { .. })
        ));
    }

    #[test]
    fn truncation_drops_tail() {
        let s = series_prefix(3, 4, 6);
        let t = s.truncated();
        assert_eq!(ints(&t), vec![1, 4, 3]);
        assert_eq!(t.degree(), Some(2));
        assert_eq!(hilbert_degree(3, 4).unwrap(), 2);
    }

    #[test]
    fn recurrence_in_m_holds() {
        // [t^l] S_{nv,j} = [t^l] S_{nv,j-1} - [t^{l-2}] S_{nv,j}
        for nv in 0..10 {
            for j in 1..10 {
                let a = series_prefix(nv, j, 15);
                let b = series_prefix(nv, j - 1, 15);
                for l in 0..=15 {
                    let mut want = b.coeffs()[l].clone();
                    if l >= 2 {
                        want -= &a.coeffs()[l - 2];
                    }
                    assert_eq!(a.coeffs()[l], want);
                }
            }
        }
    }

    #[test]
    fn d0_nonincreasing_in_m() {
        for nv in 1..=30 {
            let mut prev = usize::MAX;
            for m in nv..=3 * nv {
                let d = d0(nv, m).unwrap();
                assert!(d <= prev, "nv={nv} m={m}");
                prev = d;
            }
        }
    }

    #[test]
    fn table_matches_direct() {
        for m in [1usize, 5, 17, 40] {
            let table = d0_table(45, m);
            for (nv, got) in table.into_iter().enumerate() {
                assert_eq!(got, d0(nv, m), "nv={nv} m={m}");
            }
        }
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let d = d0(200, 200).unwrap();
        let s = series_prefix(200, 200, d);
        assert!(!s.coeffs()[d].is_positive());
        assert!(s.coeffs()[d - 1].bits() > 64);
    }
}
