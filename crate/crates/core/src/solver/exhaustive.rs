//! Exhaustive search by Gray-code enumeration.
//!
//! All `m` polynomials are evaluated at once as bit-sliced words. Flipping
//! `x_i` adds the partial derivative `∂f/∂x_i` to the values, and each
//! derivative changes by the quadratic coefficients `q_ij` when `x_j`
//! flips, so every step costs `O((n + 1)·m/64)` word operations.

use crate::error::{Error, Result};
use crate::poly::QuadraticSystem;

/// Default cap on the number of enumerated variables.
pub const DEFAULT_SEARCH_CAP: usize = 32;

struct Sliced {
    constant: Vec<u64>,
    /// `deriv0[i]`: value of `∂f/∂x_i` at the origin, i.e. the linear part.
    deriv0: Vec<Vec<u64>>,
    /// `quad[i][j]`: polynomials containing `x_i x_j`.
    quad: Vec<Vec<Vec<u64>>>,
}

impl Sliced {
    fn new(s: &QuadraticSystem) -> Self {
        let n = s.n();
        let words = s.m().div_ceil(64);
        let mut constant = vec![0u64; words];
        let mut deriv0 = vec![vec![0u64; words]; n];
        let mut quad = vec![vec![vec![0u64; words]; n]; n];
        for (p, poly) in s.polys().iter().enumerate() {
            let (w, bit) = (p / 64, 1u64 << (p % 64));
            let f = poly.form();
            if f.constant {
                constant[w] |= bit;
            }
            for i in 0..n {
                if f.linear >> i & 1 == 1 {
                    deriv0[i][w] |= bit;
                }
                let mut row = f.upper[i];
                while row != 0 {
                    let j = row.trailing_zeros() as usize;
                    row &= row - 1;
                    quad[i][j][w] |= bit;
                    quad[j][i][w] |= bit;
                }
            }
        }
        Self {
            constant,
            deriv0,
            quad,
        }
    }
}

fn check_cap(s: &QuadraticSystem, cap: usize) -> Result<()> {
    if s.n() > cap.min(63) {
        return Err(Error::ScaleCap {
            what: "exhaustive-search variables",
            value: s.n(),
            cap: cap.min(63),
        });
    }
    Ok(())
}

/// Visit the common zeros of `s` in Gray-code order; stop early when `visit`
/// returns `false`.
fn for_each_zero(s: &QuadraticSystem, mut visit: impl FnMut(u64) -> bool) {
    let n = s.n();
    let t = Sliced::new(s);
    let mut value = t.constant.clone();
    let mut deriv = t.deriv0.clone();
    let mut x = 0u64;
    if value.iter().all(|&w| w == 0) && !visit(x) {
        return;
    }
    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        for (v, d) in value.iter_mut().zip(&deriv[i]) {
            *v ^= d;
        }
        x ^= 1 << i;
        for (j, dj) in deriv.iter_mut().enumerate().take(n) {
            if j != i {
                for (d, q) in dj.iter_mut().zip(&t.quad[i][j]) {
                    *d ^= q;
                }
            }
        }
        if value.iter().all(|&w| w == 0) && !visit(x) {
            return;
        }
    }
}

/// All common zeros of `s`, ascending by integer encoding.
pub fn exhaustive_search(s: &QuadraticSystem, cap: usize) -> Result<Vec<u64>> {
    check_cap(s, cap)?;
    let mut out = Vec::new();
    for_each_zero(s, |x| {
        out.push(x);
        true
    });
    out.sort_unstable();
    Ok(out)
}

/// The smallest common zero of `s`.
pub fn first_solution(s: &QuadraticSystem, cap: usize) -> Result<Option<u64>> {
    Ok(exhaustive_search(s, cap)?.first().copied())
}

/// Plain evaluation at every point; the reference semantics.
pub fn brute_force(s: &QuadraticSystem) -> Vec<u64> {
    let forms: Vec<_> = s.polys().iter().map(|p| p.form()).collect();
    (0..1u64 << s.n())
        .filter(|&x| forms.iter().all(|f| !f.eval(x)))
        .collect()
}
