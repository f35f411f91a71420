use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mqsolve::experiments::filtering::certificate_degree;
use mqsolve::experiments::{filtering_experiment, strong_semiregular_check, FilterParams};
use mqsolve::hilbert::{
    self, best_concrete_cost, concrete_cost, exhaustive_search_log2, optimal_gamma, quad_min_n,
    CostEstimate, LinearAlgebra,
};
use mqsolve::macaulay;
use mqsolve::par::{self, Workers};
use mqsolve::poly::{parse, random_system, serialize};
use mqsolve::rng::derive_seed;
use mqsolve::solver::{self, exhaustive_search, Method, SolveConfig, DEFAULT_SEARCH_CAP};
use mqsolve::{Assignment, QuadraticSystem};

/// Rule-of-thumb exponent for square systems with sparse linear algebra.
const ASYMPTOTIC_EXPONENT: f64 = 0.7911;

#[derive(Parser)]
#[command(
    name = "mqsolve",
    version,
    about = "Boolean quadratic system solver and cost estimator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random system in `.anf` format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every solution, one bit string `x1…xn` per line.
    Solve {
        #[command(flatten)]
        opts: SolveOpts,
        /// Write a JSON run report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Skip the hybrid solver and enumerate all assignments.
        #[arg(long)]
        brute: bool,
    },
    /// Print one solution or `UNSAT`.
    Sat {
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Cost of the hybrid solver as JSON.
    Estimate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Linear-algebra exponent: 2, 2.376 or 3.
        #[arg(long, conflicts_with = "lasvegas")]
        theta: Option<f64>,
        /// Sparse Las Vegas linear algebra (the default).
        #[arg(long)]
        lasvegas: bool,
        /// Fraction of variables left after specialization.
        #[arg(long, conflicts_with = "optimize")]
        gamma: Option<f64>,
        /// Minimize the concrete cost over every `k`.
        #[arg(long)]
        optimize: bool,
    },
    /// Smallest number of variables reaching a security level.
    AdviseQuad {
        #[arg(long)]
        security_bits: u32,
        /// Equations per variable.
        #[arg(long, default_value_t = 1)]
        ratio: usize,
    },
    /// Filtering statistics over seeded random systems.
    Experiment {
        #[arg(long)]
        n: usize,
        /// Defaults to `n`.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, conflicts_with = "k")]
        gamma: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        delta: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Lasvegas)]
        method: MethodArg,
        /// 0 uses every core, 1 runs sequentially.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Per-trial CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Smallest Macaulay degree exposing an inconsistency certificate.
    Certdeg {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to `n + 2`.
        #[arg(long)]
        d_max: Option<usize>,
        /// Write the Macaulay matrix at the reported degree (or `d_max`) in SMS format.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveOpts {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    delta: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Lasvegas)]
    method: MethodArg,
    #[arg(long)]
    d0: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dense,
    Lasvegas,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Dense => Method::Dense,
            MethodArg::Lasvegas => Method::LasVegas,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Scale(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Scale(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Scale(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<mqsolve::Error> for CliError {
    fn from(e: mqsolve::Error) -> Self {
        use mqsolve::Error::*;
        let msg = e.to_string();
        match e {
            ScaleCap { .. } => CliError::Scale(msg),
            WidthMismatch { .. } | DimensionMismatch(_) | Parse { .. } | InvalidParameter(_) => {
                CliError::Usage(msg)
            }
            NoNonpositiveCoefficient { .. } | RetriesExhausted(_) => CliError::Internal(msg),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    let msg = format!("{}: {e}", path.display());
    if e.kind() == io::ErrorKind::NotFound {
        CliError::Usage(msg)
    } else {
        CliError::Internal(msg)
    }
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::Internal(e.to_string())
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Gen { n, m, seed, out } => {
            let text = serialize(&random_system(n, m, seed)?);
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| io_error(&path, e)),
                None => emit(&text),
            }
        }
        Command::Solve {
            opts,
            report,
            brute,
        } => solve(&opts, report.as_deref(), brute),
        Command::Sat { opts } => {
            let s = read_system(&opts.input)?;
            let line = match solver::boolean_solve_sat(&s, &solve_config(&opts))? {
                Some(a) => a.to_bit_string(),
                None => "UNSAT".to_string(),
            };
            emit(&format!("{line}\n"))
        }
        Command::Estimate {
            n,
            m,
            theta,
            lasvegas: _,
            gamma,
            optimize,
        } => estimate(n, m, theta, gamma, optimize),
        Command::AdviseQuad {
            security_bits,
            ratio,
        } => advise_quad(security_bits, ratio),
        Command::Experiment {
            n,
            m,
            gamma,
            k,
            delta,
            trials,
            seed,
            method,
            workers,
            csv,
        } => {
            let m = m.unwrap_or(n);
            let k = match (k, gamma) {
                (Some(k), _) => k,
                (None, Some(g)) => k_from_gamma(n, g)?,
                (None, None) => {
                    return Err(CliError::Usage("experiment needs --k or --gamma".into()))
                }
            };
            let params = FilterParams {
                n,
                m,
                k,
                delta,
                trials,
                seed,
                method: method.into(),
            };
            experiment(params, Workers::from_count(Some(workers)), csv.as_deref())
        }
        Command::Certdeg { input, d_max, dump } => certdeg(&input, d_max, dump.as_deref()),
    }
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn emit_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(json_error)?;
    emit(&format!("{text}\n"))
}

fn read_system(path: &Path) -> CliResult<QuadraticSystem> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(parse(&text)?)
}

fn solve_config(opts: &SolveOpts) -> SolveConfig {
    SolveConfig {
        k: opts.k,
        delta: opts.delta,
        method: opts.method.into(),
        d0_override: opts.d0,
        seed: opts.seed,
        workers: Workers::from_count(Some(opts.workers)),
        ..SolveConfig::default()
    }
}

#[derive(Serialize)]
struct SolveReport {
    plan: solver::Plan,
    c_mac: usize,
    r_mac: usize,
    branches: usize,
    pruned: usize,
    searched: usize,
    inconclusive: usize,
    unpruned_empty: usize,
    applications: u64,
    solutions: Vec<String>,
}

fn solve(opts: &SolveOpts, report: Option<&Path>, brute: bool) -> CliResult<()> {
    let s = read_system(&opts.input)?;
    let n = s.n();
    let lines: Vec<String> = if brute {
        exhaustive_search(&s, DEFAULT_SEARCH_CAP)?
            .into_iter()
            .map(|x| Assignment::from_u64(n, x).to_bit_string())
            .collect()
    } else {
        let (sol, rep) = solver::boolean_solve(&s, &solve_config(opts))?;
        let lines: Vec<String> = sol
            .as_slice()
            .iter()
            .map(Assignment::to_bit_string)
            .collect();
        if let Some(path) = report {
            let doc = SolveReport {
                plan: rep.plan,
                c_mac: rep.c_mac,
                r_mac: rep.r_mac,
                branches: rep.branches.len(),
                pruned: rep.pruned(),
                searched: rep.searched(),
                inconclusive: rep.inconclusive(),
                unpruned_empty: rep.unpruned_empty(),
                applications: rep.applications(),
                solutions: lines.clone(),
            };
            let text = serde_json::to_string_pretty(&doc).map_err(json_error)?;
            fs::write(path, text + "\n").map_err(|e| io_error(path, e))?;
        }
        lines
    };
    let mut text = String::new();
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    emit(&text)
}

fn k_from_gamma(n: usize, gamma: f64) -> CliResult<usize> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(CliError::Usage(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    Ok(((1.0 - gamma) * n as f64 - 1e-9).ceil().max(0.0) as usize)
}

#[derive(Serialize)]
struct EstimateOutput {
    #[serde(flatten)]
    estimate: CostEstimate,
    exhaustive_search_log2: f64,
}

fn estimate(
    n: usize,
    m: usize,
    theta: Option<f64>,
    gamma: Option<f64>,
    optimize: bool,
) -> CliResult<()> {
    if n == 0 || m < n {
        return Err(CliError::Usage(format!(
            "need 1 <= n <= m, got n={n} m={m}"
        )));
    }
    let method = match theta {
        None => LinearAlgebra::SparseLasVegas,
        Some(t) => LinearAlgebra::from_theta(t)
            .ok_or_else(|| CliError::Usage(format!("theta must be 2, 2.376 or 3, got {t}")))?,
    };
    let estimate = if optimize {
        best_concrete_cost(n, m, method)?
    } else {
        let gamma = match gamma {
            Some(g) => g,
            None => optimal_gamma(m as f64 / n as f64, method.theta())?,
        };
        let k = k_from_gamma(n, gamma)?.min(n - 1);
        concrete_cost(n, m, k, method)?
    };
    emit_json(&EstimateOutput {
        estimate,
        exhaustive_search_log2: exhaustive_search_log2(n),
    })
}

#[derive(Serialize)]
struct QuadAdvice {
    security_bits: u32,
    ratio: usize,
    min_n: usize,
    by_method: Vec<(LinearAlgebra, usize)>,
    rule_of_thumb: usize,
}

fn advise_quad(security_bits: u32, ratio: usize) -> CliResult<()> {
    let by_method = LinearAlgebra::ALL
        .iter()
        .map(|&la| Ok((la, quad_min_n(security_bits, ratio, &[la])?)))
        .collect::<CliResult<Vec<_>>>()?;
    let min_n = by_method.iter().map(|&(_, n)| n).max().unwrap_or(0);
    emit_json(&QuadAdvice {
        security_bits,
        ratio,
        min_n,
        by_method,
        rule_of_thumb: (security_bits as f64 / ASYMPTOTIC_EXPONENT).ceil() as usize,
    })
}

#[derive(Serialize)]
struct ExperimentRow {
    trial: usize,
    seed: u64,
    unpruned: usize,
    unpruned_empty: usize,
    solutions: usize,
    strong_semiregular: Option<bool>,
}

#[derive(Serialize)]
struct ExperimentSummary {
    n: usize,
    m: usize,
    k: usize,
    delta: usize,
    d0: usize,
    trials: usize,
    branches_per_trial: usize,
    avg_unpruned: f64,
    max_unpruned: usize,
    pruned_fraction: f64,
    threshold: Option<f64>,
    strong_sr_fraction: Option<f64>,
}

fn experiment(params: FilterParams, workers: Workers, csv_path: Option<&Path>) -> CliResult<()> {
    let (n, m, k) = (params.n, params.m, params.k);
    if k >= n {
        return Err(CliError::Usage(format!("need k < n, got k={k} n={n}")));
    }
    let stats = filtering_experiment(params, workers)?;
    let gamma = (n - k) as f64 / n as f64;
    let checks = if m >= n {
        par::map_indices(params.trials as u64, workers, |t| {
            let s = random_system(n, m, derive_seed(params.seed, t))?;
            strong_semiregular_check(&s, gamma)
        })
        .into_iter()
        .map(|r| r.map(Some))
        .collect::<mqsolve::Result<Vec<_>>>()?
    } else {
        vec![None; params.trials]
    };
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Internal(e.to_string()))?;
        for (record, check) in stats.records.iter().zip(&checks) {
            w.serialize(ExperimentRow {
                trial: record.trial,
                seed: record.seed,
                unpruned: record.unpruned,
                unpruned_empty: record.unpruned_empty,
                solutions: record.solutions,
                strong_semiregular: check.as_ref().map(|c| c.holds),
            })
            .map_err(|e| CliError::Internal(e.to_string()))?;
        }
        w.flush().map_err(|e| io_error(path, e))?;
    }
    let holding = checks.iter().flatten().filter(|c| c.holds).count();
    let checked = checks.iter().flatten().count();
    emit_json(&ExperimentSummary {
        n,
        m,
        k,
        delta: params.delta,
        d0: stats.d0,
        trials: stats.trials,
        branches_per_trial: stats.branches_per_trial,
        avg_unpruned: stats.avg_unpruned,
        max_unpruned: stats.max_unpruned,
        pruned_fraction: stats.pruned_fraction,
        threshold: checks.iter().flatten().next().map(|c| c.threshold),
        strong_sr_fraction: (checked > 0).then(|| holding as f64 / checked as f64),
    })
}

#[derive(Serialize)]
struct CertdegOutput {
    n: usize,
    m: usize,
    d_max: usize,
    certificate_degree: Option<usize>,
    hilbert_d0: Option<usize>,
}

fn certdeg(input: &Path, d_max: Option<usize>, dump: Option<&Path>) -> CliResult<()> {
    let s = read_system(input)?;
    let d_max = d_max.unwrap_or(s.n() + 2);
    let degree = certificate_degree(&s, d_max)?;
    if let Some(path) = dump {
        let mac = macaulay::build(&s, degree.unwrap_or(d_max))?;
        let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
        let mut w = io::BufWriter::new(file);
        mac.write_sms(&mut w)
            .and_then(|()| w.flush())
            .map_err(|e| io_error(path, e))?;
    }
    emit_json(&CertdegOutput {
        n: s.n(),
        m: s.m(),
        d_max,
        certificate_degree: degree,
        hilbert_d0: hilbert::d0(s.n(), s.m()).ok(),
    })
}
