//! Filtering statistics on seeded random systems.

use serde::Serialize;

use super::probability::{left_consistency_probability, to_f64};
use crate::error::{Error, Result};
use crate::hilbert::{self, f_alpha_gamma};
use crate::macaulay;
use crate::par::{self, Workers};
use crate::poly::{random_system, QuadraticSystem};
use crate::rng::derive_seed;
use crate::solver::{self, brute_force, BranchReport, Method, SolveConfig};

/// Largest `n` accepted by the experiment drivers.
pub const MAX_EXPERIMENT_VARS: usize = 24;

/// Smallest `k` with `d0(n - k, n) = 2`: `⌈1/2 + n - √(8n - 7)/2⌉`.
pub fn k_for_d0_2(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid(format!("k_for_d0_2 needs n >= 2, got {n}")));
    }
    let x = 0.5 + n as f64 - ((8 * n - 7) as f64).sqrt() / 2.0;
    Ok((x - 1e-9).ceil() as usize)
}

fn check_scale(n: usize) -> Result<()> {
    if n > MAX_EXPERIMENT_VARS {
        return Err(Error::ScaleCap {
            what: "experiment variables",
            value: n,
            cap: MAX_EXPERIMENT_VARS,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// Tails the filter failed to prune.
    pub unpruned: usize,
    /// Unpruned tails whose branch turned out empty.
    pub unpruned_empty: usize,
    pub solutions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterStats {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub delta: usize,
    pub d0: usize,
    pub trials: usize,
    pub branches_per_trial: usize,
    pub records: Vec<TrialRecord>,
    pub avg_unpruned: f64,
    pub max_unpruned: usize,
    pub pruned_fraction: f64,
}

/// Shape of a filtering experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub delta: usize,
    pub trials: usize,
    pub seed: u64,
    pub method: Method,
}

/// Solve `trials` random systems, trial `i` seeded with
/// `derive_seed(seed, i)`, and count unpruned branches.
pub fn filtering_experiment(params: FilterParams, workers: Workers) -> Result<FilterStats> {
    let FilterParams {
        n,
        m,
        k,
        delta,
        trials,
        seed,
        method,
    } = params;
    check_scale(n)?;
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let runs = par::map_indices(
        trials as u64,
        workers,
        |t| -> Result<(TrialRecord, BranchReport)> {
            let trial_seed = derive_seed(seed, t);
            let s = random_system(n, m, trial_seed)?;
            let cfg = SolveConfig {
                k: Some(k),
                delta,
                method,
                seed: trial_seed,
                workers: Workers::Sequential,
                ..SolveConfig::default()
            };
            let (sol, report) = solver::boolean_solve(&s, &cfg)?;
            let record = TrialRecord {
                trial: t as usize,
                seed: trial_seed,
                unpruned: report.unpruned(),
                unpruned_empty: report.unpruned_empty(),
                solutions: sol.len(),
            };
            Ok((record, report))
        },
    )
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let d0 = runs[0].1.plan.d0;
    let branches = 1usize << (k + delta);
    let records: Vec<TrialRecord> = runs.into_iter().map(|(r, _)| r).collect();
    let total_unpruned: usize = records.iter().map(|r| r.unpruned).sum();
    Ok(FilterStats {
        n,
        m,
        k,
        delta,
        d0,
        trials,
        branches_per_trial: branches,
        avg_unpruned: total_unpruned as f64 / trials as f64,
        max_unpruned: records.iter().map(|r| r.unpruned).max().unwrap_or(0),
        pruned_fraction: 1.0 - total_unpruned as f64 / (trials * branches) as f64,
        records,
    })
}

/// Chance that one branch is pruned if its Macaulay matrix behaved like a
/// uniform random matrix of the same shape.
pub fn predicted_consistency(n: usize, m: usize, k: usize, delta: usize) -> Result<f64> {
    if k + delta >= n {
        return Err(Error::invalid("need k + delta < n"));
    }
    let d = hilbert::d0(n - k, m)?;
    let sizes = hilbert::macaulay_sizes(n - k - delta, m, d);
    let (r, c) = (usize::try_from(sizes.r_mac), usize::try_from(sizes.c_mac));
    match (r, c) {
        (Ok(r), Ok(c)) if r > 0 && c > 0 => Ok(to_f64(&left_consistency_probability(r, c)?)),
        (Ok(0), _) => Ok(0.0),
        _ => Err(Error::invalid("matrix too large for the exact model")),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongSemiRegular {
    pub gamma: f64,
    pub k: usize,
    pub d0: usize,
    pub solutions: usize,
    /// Tails where the filter failed although the branch is empty.
    pub unpruned_empty: usize,
    /// `2^{(1 - 2γ + 2F_α(γ))·n}`.
    pub threshold: f64,
    pub holds: bool,
}

/// Both the solution count and the count of empty unpruned branches
/// (standing in for branches of witness degree above `d0`) must stay under
/// the threshold.
pub fn strong_semiregular_check(s: &QuadraticSystem, gamma: f64) -> Result<StrongSemiRegular> {
    let (n, m) = (s.n(), s.m());
    check_scale(n)?;
    if n > m {
        return Err(Error::invalid("need m >= n"));
    }
    let alpha = m as f64 / n as f64;
    let exponent = 1.0 - 2.0 * gamma + 2.0 * f_alpha_gamma(alpha, gamma)?;
    let threshold = (exponent * n as f64).exp2();
    let k = ((1.0 - gamma) * n as f64 - 1e-9).ceil().max(0.0) as usize;
    if k >= n {
        return Err(Error::invalid(format!("gamma {gamma} leaves no variables")));
    }
    let cfg = SolveConfig {
        k: Some(k),
        method: Method::Dense,
        workers: Workers::Sequential,
        ..SolveConfig::default()
    };
    let (sol, report) = solver::boolean_solve(s, &cfg)?;
    let solutions = sol.len();
    let unpruned_empty = report.unpruned_empty();
    Ok(StrongSemiRegular {
        gamma,
        k,
        d0: report.plan.d0,
        solutions,
        unpruned_empty,
        threshold,
        holds: solutions as f64 <= threshold && unpruned_empty as f64 <= threshold,
    })
}

/// Largest `n` accepted by [`certificate_degree`].
pub const MAX_CERTIFICATE_VARS: usize = 14;

/// Smallest `d ≤ d_max` at which `1` is a combination of Macaulay rows.
/// Degrees up to `n + 2` are meaningful: products of degree `n` multipliers
/// still reduce under `φ`.
pub fn certificate_degree(s: &QuadraticSystem, d_max: usize) -> Result<Option<usize>> {
    let n = s.n();
    if n > MAX_CERTIFICATE_VARS {
        return Err(Error::ScaleCap {
            what: "certificate-degree variables",
            value: n,
            cap: MAX_CERTIFICATE_VARS,
        });
    }
    if d_max > n + 2 {
        return Err(Error::invalid(format!(
            "d_max {d_max} exceeds n + 2 = {}",
            n + 2
        )));
    }
    for d in 2..=d_max {
        let mac = macaulay::build(s, d)?;
        if mac.to_dense().solve_left(&mac.rhs())?.is_some() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Whether `s` has no boolean solution, by enumeration.
pub fn is_inconsistent(s: &QuadraticSystem) -> bool {
    brute_force(s).is_empty()
}
