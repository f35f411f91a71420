//! Concrete bit-operation counts for the hybrid solver.
//!
//! For `k` guessed variables the solver builds `2^k` boolean Macaulay
//! matrices in `n - k` variables at degree `d0(n - k, m)`. The dense
//! count is `2^k · r · c · min(r, c)^{θ-2}`; the sparse Las Vegas count is
//! `2^k · N · log N · s` with `N = max(r, c)`. All sizes are exact.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::asymptotic::{exponent, LinearAlgebra};
use super::{d0, d0_table};
use crate::error::{Error, Result};

pub type CostMethod = LinearAlgebra;

/// Exact boolean Macaulay matrix sizes at one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacaulaySizes {
    pub nv: usize,
    pub m: usize,
    pub d: usize,
    pub c_mac: BigUint,
    pub r_mac: BigUint,
    /// `(1 + nv + C(nv,2))·r`, an upper bound on the nonzero count.
    pub s_mac: BigUint,
}

fn binomial_prefix_sum(n: usize, top: usize) -> BigUint {
    let mut sum = BigUint::zero();
    let mut c = BigUint::one();
    for i in 0..=top.min(n) {
        if i > 0 {
            c = c * BigUint::from(n - i + 1) / BigUint::from(i);
        }
        sum += &c;
    }
    sum
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut c = BigUint::one();
    for i in 1..=k {
        c = c * BigUint::from(n - i + 1) / BigUint::from(i);
    }
    c
}

/// Sizes at degree `d` for `m` polynomials in `nv` variables.
pub fn macaulay_sizes(nv: usize, m: usize, d: usize) -> MacaulaySizes {
    let c_mac = binomial_prefix_sum(nv, d);
    let r_mac = match d.checked_sub(2) {
        Some(top) => BigUint::from(m) * binomial_prefix_sum(nv, top),
        None => BigUint::zero(),
    };
    let per_row = 1 + nv + nv * nv.saturating_sub(1) / 2;
    let s_mac = &r_mac * BigUint::from(per_row);
    MacaulaySizes {
        nv,
        m,
        d,
        c_mac,
        r_mac,
        s_mac,
    }
}

impl MacaulaySizes {
    /// Closed-form upper bounds `(c, r, s)` in terms of `x = d/nv`,
    /// defined for `1 ≤ d < nv/2`.
    pub fn analytic_bounds(&self) -> Option<(f64, f64, f64)> {
        if self.d == 0 || 2 * self.d >= self.nv {
            return None;
        }
        let n = self.nv as f64;
        let x = self.d as f64 / n;
        let b = binomial(self.nv, self.d).to_f64()?;
        let c = (1.0 - x) / (1.0 - 2.0 * x) * b;
        let r = self.m as f64 * x * x / ((1.0 - 2.0 * x) * (1.0 - x)) * b;
        Some((c, r, n * n * r))
    }

    /// Whether the exact sizes sit strictly below the closed-form bounds;
    /// `None` outside `1 ≤ d < nv/2`.
    pub fn within_analytic_bounds(&self) -> Option<bool> {
        let (c, r, s) = self.analytic_bounds()?;
        let below = |x: &BigUint, bound: f64| x.to_f64().is_some_and(|v| v < bound);
        Some(below(&self.c_mac, c) && below(&self.r_mac, r) && below(&self.s_mac, s))
    }
}

/// `log₂` of a big unsigned integer; `-∞` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

fn ser_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// Cost of the hybrid solver at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostEstimate {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub method: LinearAlgebra,
    pub alpha: f64,
    pub gamma: f64,
    pub theta: f64,
    pub exponent_per_n: f64,
    pub d0: usize,
    #[serde(serialize_with = "ser_decimal")]
    pub c_mac: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub r_mac: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub s_mac: BigUint,
    pub total_bitops_log2: f64,
}

fn bitops_log2(k: usize, sizes: &MacaulaySizes, method: LinearAlgebra) -> f64 {
    let lr = log2_big(&sizes.r_mac);
    let lc = log2_big(&sizes.c_mac);
    match method {
        LinearAlgebra::SparseLasVegas => {
            let big = lr.max(lc);
            // log N factor; clamp so tiny matrices do not produce -∞
            k as f64 + big + big.max(1.0).log2() + log2_big(&sizes.s_mac)
        }
        dense => k as f64 + lr + lc + (dense.theta() - 2.0) * lr.min(lc),
    }
}

fn check_params(n: usize, m: usize, k: usize) -> Result<()> {
    if n == 0 || k >= n {
        return Err(Error::invalid(format!("need 0 <= k < n, got k={k} n={n}")));
    }
    if m < n {
        return Err(Error::invalid(format!("need m >= n, got m={m} n={n}")));
    }
    Ok(())
}

fn estimate_at(
    n: usize,
    m: usize,
    k: usize,
    d: usize,
    method: LinearAlgebra,
) -> Result<CostEstimate> {
    let sizes = macaulay_sizes(n - k, m, d);
    let alpha = m as f64 / n as f64;
    let gamma = (n - k) as f64 / n as f64;
    let theta = method.theta();
    Ok(CostEstimate {
        n,
        m,
        k,
        method,
        alpha,
        gamma,
        theta,
        exponent_per_n: exponent(alpha, gamma, theta)?,
        d0: d,
        total_bitops_log2: bitops_log2(k, &sizes, method),
        c_mac: sizes.c_mac,
        r_mac: sizes.r_mac,
        s_mac: sizes.s_mac,
    })
}

/// Cost with `k` guessed variables and `d = d0(n - k, m)`.
pub fn concrete_cost(n: usize, m: usize, k: usize, method: LinearAlgebra) -> Result<CostEstimate> {
    check_params(n, m, k)?;
    let d = d0(n - k, m)?;
    estimate_at(n, m, k, d, method)
}

/// The `k` minimizing [`concrete_cost`], ties broken towards smaller `k`.
pub fn best_concrete_cost(n: usize, m: usize, method: LinearAlgebra) -> Result<CostEstimate> {
    check_params(n, m, 0)?;
    let table = d0_table(n, m);
    let mut best: Option<CostEstimate> = None;
    for k in 0..n {
        let Ok(d) = table[n - k] else { continue };
        let est = estimate_at(n, m, k, d, method)?;
        if best
            .as_ref()
            .is_none_or(|b| est.total_bitops_log2 < b.total_bitops_log2)
        {
            best = Some(est);
        }
    }
    best.ok_or_else(|| Error::invalid(format!("no admissible k for n={n} m={m}")))
}

/// `log₂(4·log₂(n)·2^n)`, the optimized exhaustive-search baseline.
pub fn exhaustive_search_log2(n: usize) -> f64 {
    n as f64 + 2.0 + (n as f64).log2().log2()
}

/// Smallest `n` in `range` at which the best hybrid cost with `m = ratio·n`
/// drops below `baseline(n)`.
pub fn first_crossover(
    method: LinearAlgebra,
    ratio: usize,
    range: std::ops::RangeInclusive<usize>,
    baseline: impl Fn(usize) -> f64,
) -> Result<Option<usize>> {
    for n in range {
        if n < 2 {
            continue;
        }
        let best = best_concrete_cost(n, ratio * n, method)?;
        if best.total_bitops_log2 < baseline(n) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Smallest `n` such that every `k` and every method in `methods` costs at
/// least `2^security_bits` with `m = ratio·n`.
pub fn quad_min_n(security_bits: u32, ratio: usize, methods: &[LinearAlgebra]) -> Result<usize> {
    Ok(quad_table(&[security_bits], ratio, methods)?[0])
}

/// [`quad_min_n`] for several security levels with a single scan over `n`.
pub fn quad_table(
    security_bits: &[u32],
    ratio: usize,
    methods: &[LinearAlgebra],
) -> Result<Vec<usize>> {
    if security_bits.iter().any(|&t| t < 64) {
        return Err(Error::invalid("security level must be at least 64 bits"));
    }
    if ratio == 0 || methods.is_empty() {
        return Err(Error::invalid("ratio and method list must be nonempty"));
    }
    let mut answers: Vec<Option<usize>> = vec![None; security_bits.len()];
    let mut n = 1;
    while answers.iter().any(Option::is_none) {
        let mut cheapest = f64::INFINITY;
        for &method in methods {
            cheapest = cheapest.min(best_concrete_cost(n, ratio * n, method)?.total_bitops_log2);
        }
        for (slot, &t) in answers.iter_mut().zip(security_bits) {
            if slot.is_none() && cheapest >= t as f64 {
                *slot = Some(n);
            }
        }
        n += 1;
    }
    Ok(answers.into_iter().map(|a| a.expect("filled")).collect())
}
