//! Minimal linear recurrences of sequences over GF(2^64).

use super::gf64::Gf64;

/// Lowest-degree monic `f` with `Σ_i f_i·s_{j+i} = 0` for every window of
/// `seq` that fits.
///
/// Coefficients are returned low to high with `f[len-1] = 1`; the degree is
/// `len - 1`. A zero sequence yields `[1]`.
pub fn berlekamp_massey(seq: &[Gf64]) -> Vec<Gf64> {
    // connection polynomial C(x) = 1 + c_1 x + … + c_L x^L
    let mut c = vec![Gf64::ONE];
    let mut b = vec![Gf64::ONE];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_disc = Gf64::ONE;

    for n in 0..seq.len() {
        let mut disc = seq[n];
        for i in 1..=l.min(c.len() - 1) {
            disc += c[i] * seq[n - i];
        }
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let coef = disc * last_disc.inv().expect("nonzero discrepancy");
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, Gf64::ZERO);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] += coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last_disc = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }

    c.resize(l + 1, Gf64::ZERO);
    // the reciprocal y^L·C(1/y) is the minimal polynomial
    c.reverse();
    c
}
