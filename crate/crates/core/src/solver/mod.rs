//! Hybrid exhaustive search with linear-algebra filtering.
//!
//! The last `k + δ` variables are fixed in all `2^{k+δ}` ways. Each
//! specialized system gets its boolean Macaulay matrix in degree
//! `d0(n - k, m)`; if the constant polynomial lies in the row space, the
//! branch has no solution and is skipped. Otherwise the remaining variables
//! are enumerated. Filters only ever discard branches with a verified
//! certificate, so the solution set does not depend on the method, on `δ`
//! or on `d0`.

pub mod exhaustive;
pub mod specializer;

use serde::{Deserialize, Serialize};

pub use exhaustive::{brute_force, exhaustive_search, DEFAULT_SEARCH_CAP};
pub use specializer::Specializer;

use crate::error::{Error, Result};
use crate::gf2::wiedemann::{self, ConsistencyOutcome, WiedemannConfig, WiedemannStats};
use crate::gf2::BitVec;
use crate::hilbert::{self, LinearAlgebra};
use crate::macaulay;
use crate::par::{self, Workers};
use crate::poly::{Assignment, QuadraticSystem};
use crate::rng::{derive_seed, SplitMix64};

/// Largest `k + δ` accepted; `2^{k+δ}` branches are materialized.
pub const MAX_SPECIALIZED: usize = 30;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Gaussian elimination on the dense matrix.
    Dense,
    /// Wiedemann's method over GF(2^64) on the sparse matrix.
    #[default]
    LasVegas,
}

impl Method {
    /// Linear-algebra exponent used to pick the default `k`.
    pub fn linear_algebra(self) -> LinearAlgebra {
        match self {
            Method::Dense => LinearAlgebra::Gaussian,
            Method::LasVegas => LinearAlgebra::SparseLasVegas,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    /// Variables driving `d0`; `None` picks `⌈n·(1 - γ*)⌉`.
    pub k: Option<usize>,
    /// Additional specialized variables.
    pub delta: usize,
    pub method: Method,
    pub d0_override: Option<usize>,
    pub seed: u64,
    pub workers: Workers,
    pub search_cap: usize,
    pub wiedemann: WiedemannConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            k: None,
            delta: 0,
            method: Method::default(),
            d0_override: None,
            seed: 0,
            workers: Workers::default(),
            search_cap: DEFAULT_SEARCH_CAP,
            wiedemann: WiedemannConfig::default(),
        }
    }
}

/// Parameters actually used by a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Plan {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub delta: usize,
    pub d0: usize,
    pub method: Method,
}

impl Plan {
    pub fn specialized(&self) -> usize {
        self.k + self.delta
    }

    pub fn head_vars(&self) -> usize {
        self.n - self.specialized()
    }
}

/// What the filter concluded for one branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterOutcome {
    /// `u·M = e_last` holds; the branch has no solution.
    Pruned { certificate: BitVec },
    /// The filter could not prune, so the branch was enumerated.
    Searched,
    /// The Las Vegas filter ran out of retries; the branch was enumerated.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchRecord {
    pub tail: u64,
    pub outcome: FilterOutcome,
    pub solutions: usize,
    pub stats: WiedemannStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchReport {
    pub plan: Plan,
    pub c_mac: usize,
    pub r_mac: usize,
    /// One record per tail, in ascending tail order.
    pub branches: Vec<BranchRecord>,
}

impl BranchReport {
    pub fn pruned(&self) -> usize {
        self.count(|o| matches!(o, FilterOutcome::Pruned { .. }))
    }

    pub fn searched(&self) -> usize {
        self.count(|o| matches!(o, FilterOutcome::Searched))
    }

    pub fn inconclusive(&self) -> usize {
        self.count(|o| matches!(o, FilterOutcome::Inconclusive))
    }

    /// Branches the filter failed to prune.
    pub fn unpruned(&self) -> usize {
        self.branches.len() - self.pruned()
    }

    /// Unpruned branches that turned out to hold no solution.
    pub fn unpruned_empty(&self) -> usize {
        self.branches
            .iter()
            .filter(|b| !matches!(b.outcome, FilterOutcome::Pruned { .. }) && b.solutions == 0)
            .count()
    }

    pub fn applications(&self) -> u64 {
        self.branches.iter().map(|b| b.stats.applications).sum()
    }

    fn count(&self, f: impl Fn(&FilterOutcome) -> bool) -> usize {
        self.branches.iter().filter(|b| f(&b.outcome)).count()
    }
}

/// Sorted, duplicate-free solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    n: usize,
    solutions: Vec<Assignment>,
}

impl SolutionSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Assignment] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn to_u64s(&self) -> Vec<u64> {
        self.solutions
            .iter()
            .map(|a| a.as_u64().expect("n <= 64"))
            .collect()
    }

    fn from_u64s(n: usize, mut xs: Vec<u64>) -> Self {
        xs.sort_unstable();
        xs.dedup();
        Self {
            n,
            solutions: xs.into_iter().map(|x| Assignment::from_u64(n, x)).collect(),
        }
    }
}

/// `⌈n·(1 - γ*)⌉` with `γ* = min(1, λ*·m/n)`.
pub fn default_k(n: usize, m: usize, method: Method) -> Result<usize> {
    let gamma = hilbert::optimal_gamma(m as f64 / n as f64, method.linear_algebra().theta())?;
    Ok((n as f64 * (1.0 - gamma) - 1e-9).ceil().max(0.0) as usize)
}

/// Macaulay degree for `k` specialized variables; the override wins.
pub fn choose_d0(n: usize, m: usize, k: usize, d0_override: Option<usize>) -> Result<usize> {
    if k >= n || n > m {
        return Err(Error::invalid(format!(
            "need k < n <= m, got k={k} n={n} m={m}"
        )));
    }
    match d0_override {
        Some(d) if d < 2 => Err(Error::invalid(format!(
            "d0 override must be at least 2, got {d}"
        ))),
        Some(d) => Ok(d),
        None => hilbert::d0(n - k, m),
    }
}

/// Resolve `k`, `δ` and `d0` and check them against `s`.
pub fn plan(s: &QuadraticSystem, cfg: &SolveConfig) -> Result<Plan> {
    let (n, m) = (s.n(), s.m());
    if n > m {
        return Err(Error::invalid(format!("need n <= m, got n={n} m={m}")));
    }
    let k = match cfg.k {
        Some(k) => k,
        None => default_k(n, m, cfg.method)?.min((n - 1).saturating_sub(cfg.delta)),
    };
    if k + cfg.delta >= n {
        return Err(Error::invalid(format!(
            "need k + delta < n, got k={k} delta={} n={n}",
            cfg.delta
        )));
    }
    if k + cfg.delta > MAX_SPECIALIZED {
        return Err(Error::ScaleCap {
            what: "specialized variables",
            value: k + cfg.delta,
            cap: MAX_SPECIALIZED,
        });
    }
    if n - k - cfg.delta > cfg.search_cap {
        return Err(Error::ScaleCap {
            what: "exhaustive-search variables",
            value: n - k - cfg.delta,
            cap: cfg.search_cap,
        });
    }
    let d0 = choose_d0(n, m, k, cfg.d0_override)?;
    Ok(Plan {
        n,
        m,
        k,
        delta: cfg.delta,
        d0,
        method: cfg.method,
    })
}

/// Filter one specialized system.
fn filter(
    sub: &QuadraticSystem,
    plan: &Plan,
    cfg: &SolveConfig,
    tail: u64,
) -> Result<(FilterOutcome, WiedemannStats)> {
    let mac = macaulay::build(sub, plan.d0)?;
    let rhs = mac.rhs();
    match plan.method {
        Method::Dense => Ok(match mac.to_dense().solve_left(&rhs)? {
            Some(u) => (
                FilterOutcome::Pruned { certificate: u },
                WiedemannStats::default(),
            ),
            None => (FilterOutcome::Searched, WiedemannStats::default()),
        }),
        Method::LasVegas => {
            let mut rng = SplitMix64::new(derive_seed(cfg.seed, tail));
            match wiedemann::solve_left(mac.sparse(), &rhs, &mut rng, cfg.wiedemann) {
                Ok((ConsistencyOutcome::Consistent(u), st)) => {
                    Ok((FilterOutcome::Pruned { certificate: u }, st))
                }
                Ok((ConsistencyOutcome::Inconsistent(_), st)) => Ok((FilterOutcome::Searched, st)),
                Err(Error::RetriesExhausted(_)) => {
                    Ok((FilterOutcome::Inconclusive, WiedemannStats::default()))
                }
                Err(e) => Err(e),
            }
        }
    }
}

struct Branch {
    record: BranchRecord,
    solutions: Vec<u64>,
}

fn run_branch(spec: &Specializer, plan: &Plan, cfg: &SolveConfig, tail: u64) -> Result<Branch> {
    let sub = spec.specialize(tail);
    let (outcome, stats) = filter(&sub, plan, cfg, tail)?;
    let solutions = match outcome {
        FilterOutcome::Pruned { .. } => Vec::new(),
        _ => {
            let nv = plan.head_vars();
            exhaustive_search(&sub, cfg.search_cap)?
                .into_iter()
                .map(|h| h | tail << nv)
                .collect()
        }
    };
    Ok(Branch {
        record: BranchRecord {
            tail,
            outcome,
            solutions: solutions.len(),
            stats,
        },
        solutions,
    })
}

fn sizes(plan: &Plan) -> (usize, usize) {
    let s = hilbert::macaulay_sizes(plan.head_vars(), plan.m, plan.d0);
    let to_usize = |x: num_bigint::BigUint| usize::try_from(x).unwrap_or(usize::MAX);
    (to_usize(s.c_mac), to_usize(s.r_mac))
}

/// All boolean solutions of `s`, with a per-branch report.
pub fn boolean_solve(
    s: &QuadraticSystem,
    cfg: &SolveConfig,
) -> Result<(SolutionSet, BranchReport)> {
    let plan = plan(s, cfg)?;
    let spec = Specializer::new(s, plan.specialized())?;
    let branches = par::map_indices(1u64 << plan.specialized(), cfg.workers, |tail| {
        run_branch(&spec, &plan, cfg, tail)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut all = Vec::new();
    let mut records = Vec::with_capacity(branches.len());
    for b in branches {
        all.extend(b.solutions);
        records.push(b.record);
    }
    let (c_mac, r_mac) = sizes(&plan);
    Ok((
        SolutionSet::from_u64s(s.n(), all),
        BranchReport {
            plan,
            c_mac,
            r_mac,
            branches: records,
        },
    ))
}

/// The smallest solution of `s`, if any. Branches are scanned in ascending
/// tail order, so the first branch with a solution holds the minimum.
pub fn boolean_solve_sat(s: &QuadraticSystem, cfg: &SolveConfig) -> Result<Option<Assignment>> {
    let plan = plan(s, cfg)?;
    let spec = Specializer::new(s, plan.specialized())?;
    let hit = par::find_first(
        1u64 << plan.specialized(),
        cfg.workers,
        |tail| match run_branch(&spec, &plan, cfg, tail) {
            Ok(b) if b.solutions.is_empty() => None,
            Ok(b) => Some(Ok(b.solutions[0])),
            Err(e) => Some(Err(e)),
        },
    );
    match hit {
        None => Ok(None),
        Some((_, Ok(x))) => Ok(Some(Assignment::from_u64(s.n(), x))),
        Some((_, Err(e))) => Err(e),
    }
}

/// `δ = 1` when the first nonpositive coefficient is small in magnitude,
/// which is when the filter tends to leave many branches unpruned.
pub fn recommended_delta(n: usize, m: usize, k: usize) -> Result<usize> {
    let v = hilbert::first_nonpositive_value(n - k, m)?;
    Ok(if v.magnitude() <= &num_bigint::BigUint::from(8u8) {
        1
    } else {
        0
    })
}
