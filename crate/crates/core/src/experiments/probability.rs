//! Exact rank statistics of uniform random GF(2) matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// Probability that a uniform `p×q` GF(2) matrix has rank `r`:
/// `2^{-pq} ∏_{j<r} (2^p - 2^j)(2^q - 2^j) / (2^r - 2^j)`.
pub fn rank_probability(p: usize, q: usize, r: usize) -> Result<BigRational> {
    if r > p.min(q) {
        return Err(Error::invalid(format!("rank {r} exceeds min({p}, {q})")));
    }
    let mut num = BigInt::one();
    let mut den = pow2(p * q);
    for j in 0..r {
        num *= (pow2(p) - pow2(j)) * (pow2(q) - pow2(j));
        den *= pow2(r) - pow2(j);
    }
    Ok(BigRational::new(num, den))
}

/// Probability that a fixed nonzero vector of length `q` lies in the row
/// space of a uniform `p×q` matrix: `Σ_i P(p,q,i)·(2^i - 1)/(2^q - 1)`.
pub fn left_consistency_probability(p: usize, q: usize) -> Result<BigRational> {
    if p == 0 || q == 0 {
        return Err(Error::invalid("p and q must be positive"));
    }
    let mut acc = BigRational::zero();
    let denom: BigInt = pow2(q) - 1;
    for i in 1..=p.min(q) {
        acc +=
            rank_probability(p, q, i)? * BigRational::new(pow2(i) - BigInt::one(), denom.clone());
    }
    Ok(acc)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `E[max(X_1, …, X_count)]` for i.i.d. `X_i ~ Poisson(lambda)`, summed as
/// `Σ_k k·(F(k)^count - F(k-1)^count)` until terms drop below `1e-12`.
pub fn poisson_max_expectation(count: u32, lambda: f64) -> Result<f64> {
    if count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let mut pmf = (-lambda).exp();
    let mut cdf_prev = 0.0f64;
    let mut cdf = pmf;
    let mut total = 0.0;
    let mut k = 0u32;
    loop {
        let term = k as f64 * (cdf.powi(count as i32) - cdf_prev.powi(count as i32));
        total += term;
        if k as f64 > lambda && term.abs() < 1e-12 && (1.0 - cdf) < 1e-15 {
            return Ok(total);
        }
        if k > 10_000 {
            return Ok(total);
        }
        k += 1;
        pmf *= lambda / k as f64;
        cdf_prev = cdf;
        cdf = (cdf + pmf).min(1.0);
    }
}
