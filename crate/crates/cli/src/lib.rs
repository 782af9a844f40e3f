//! `bsieve`: simulate, compute exactly, evaluate limits and verify.
//!
//! Every output begins with `#` comment lines logging the tool version, the
//! canonical run config and the seed; `bsieve replay FILE` re-runs a logged
//! config and reproduces the output byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bernoulli_sieve::exact_engine::{
    default_kstar_cap, e_k0_alt_sum, e_k0_alt_sum_from, e_k0_dp, k0_pmf, k_pmf, kstar_pmf, kstar_tail_direct_from,
    y_pmf, zn_pmf, ExactError, Pmf,
};
use bernoulli_sieve::limit_laws::{limit_for, Functional, LimitError, LimitOutcome};
use bernoulli_sieve::numeric::hp::DEFAULT_BITS;
use bernoulli_sieve::sieve_sim::{run_replicates, Method, SimError, Statistic};
use bernoulli_sieve::stats_harness::{merge_reports, reports_table, reports_to_csv, TestReport};
use bernoulli_sieve::suites::{run_suite, Scale, SuiteConfig, SuiteError, SUITES};
use bernoulli_sieve::xi_models::{XiError, XiModel};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod config;

pub use config::{parse_count, CommandKind, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("{failed} test(s) failed")]
    TestFailure { failed: usize },
}

impl CliError {
    /// 1 test failure, 2 usage error, 3 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::TestFailure { .. } => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<XiError> for CliError {
    fn from(e: XiError) -> Self {
        match e {
            XiError::Parse { .. } | XiError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::TooLarge { .. } | ExactError::InvalidArgument(_) | ExactError::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            ExactError::Xi(x) => x.into(),
            ExactError::Hp(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::InvalidParameter(_) | LimitError::Unsupported(_) | LimitError::Inapplicable(_) => {
                CliError::Usage(e.to_string())
            }
            LimitError::Xi(x) => x.into(),
            LimitError::Quadrature(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Resources { .. } | SimError::Pool(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::UnknownSuite(_) => CliError::Usage(e.to_string()),
            SuiteError::Xi(x) => x.into(),
            SuiteError::Exact(x) => x.into(),
            SuiteError::Limit(x) => x.into(),
            SuiteError::Sim(x) => x.into(),
            SuiteError::Pool(_) => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bsieve", version, about = "Bernoulli sieve laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo samples: one CSV row per replicate.
    Simulate(SimulateArgs),
    /// Finite-n laws from the exact recursions.
    Exact(ExactArgs),
    /// Limit law and normalization schedule of a functional.
    Limit(LimitArgs),
    /// Run a named verification suite (or `all`).
    Verify(VerifyArgs),
    /// Re-run the config logged in the header of a previous output.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file (default: stdout). Written atomically.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// beta:<b>,<c> | gem:<theta> | logpareto:<alpha> | example27
    #[arg(long)]
    pub model: String,
    /// Number of balls; scientific notation accepted.
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    #[arg(long, default_value_t = 1000)]
    pub reps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated: k, kstar, k0, k1, w, z, v, nlogn.
    #[arg(long, value_delimiter = ',', default_value = "kstar")]
    pub stats: Vec<Statistic>,
    /// composition | walkpoints | fast
    #[arg(long, value_parser = parse_method, default_value = "composition")]
    pub method: Method,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    /// kstar | kstar-tail | k | k0 | y | z | ek0 | ek0-alt
    #[arg(long, default_value = "kstar")]
    pub stat: String,
    /// Truncation point for k0 and y.
    #[arg(long)]
    pub i_max: Option<usize>,
    /// Starting precision of the alternating-sum routes.
    #[arg(long)]
    pub precision_bits: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long)]
    pub model: String,
    /// kstar | k | k-minus-k1 | w | z | k0 | nlogn
    #[arg(long, default_value = "kstar")]
    pub functional: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A suite name or `all`.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Treat under-powered tests as failures.
    #[arg(long)]
    pub strict: bool,
    /// full | quick
    #[arg(long, default_value = "full")]
    pub scale: Scale,
    /// Threshold override NAME=VALUE for the report named NAME; repeatable.
    #[arg(long = "tol", value_parser = config::parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A file whose header holds a `# config` line.
    pub from: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    match s.to_ascii_lowercase().as_str() {
        "composition" => Ok(Method::Composition),
        "walkpoints" => Ok(Method::WalkPoints),
        "fast" => Ok(Method::Fast),
        _ => Err(format!("unknown method {s:?}; expected composition, walkpoints or fast")),
    }
}

impl Command {
    /// The validated config for this invocation.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let blank = |command, seed, format, o: Output| RunConfig {
            command,
            model: None,
            n: None,
            reps: None,
            seed,
            stats: vec![],
            method: None,
            stat: None,
            i_max: None,
            precision_bits: None,
            functional: None,
            suite: None,
            scale: None,
            strict: false,
            tolerances: BTreeMap::new(),
            format: o.format.unwrap_or(format),
            workers: o.workers,
            out: o.out,
        };
        let cfg = match self {
            Command::Simulate(a) => RunConfig {
                model: Some(a.model),
                n: Some(a.n),
                reps: Some(a.reps),
                stats: a.stats,
                method: Some(a.method),
                ..blank(CommandKind::Simulate, a.seed, Format::Csv, a.output)
            },
            Command::Exact(a) => RunConfig {
                model: Some(a.model),
                n: Some(a.n),
                stat: Some(a.stat),
                i_max: a.i_max,
                precision_bits: a.precision_bits,
                ..blank(CommandKind::Exact, 0, Format::Csv, a.output)
            },
            Command::Limit(a) => RunConfig {
                model: Some(a.model),
                functional: Some(a.functional),
                ..blank(CommandKind::Limit, 0, Format::Report, a.output)
            },
            Command::Verify(a) => RunConfig {
                suite: Some(a.suite),
                scale: Some(a.scale),
                strict: a.strict,
                tolerances: a.tolerances.into_iter().collect(),
                ..blank(CommandKind::Verify, a.seed, Format::Report, a.output)
            },
            Command::Replay(a) => {
                let text = std::fs::read_to_string(&a.from)?;
                let mut cfg = RunConfig::from_header(&text)?;
                cfg.out = a.out;
                cfg.workers = a.workers;
                cfg
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Output bytes (header included) and whether any test failed.
pub struct RunOutput {
    pub bytes: Vec<u8>,
    pub failed: usize,
}

/// Execute a validated config.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let mut out = cfg.header().into_bytes();
    let failed = match cfg.command {
        CommandKind::Simulate => {
            simulate(cfg, &mut out)?;
            0
        }
        CommandKind::Exact => {
            exact(cfg, &mut out)?;
            0
        }
        CommandKind::Limit => {
            limit(cfg, &mut out)?;
            0
        }
        CommandKind::Verify => verify(cfg, &mut out)?,
    };
    Ok(RunOutput { bytes: out, failed })
}

fn simulate(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<(), CliError> {
    let model = XiModel::parse(cfg.model_or_err()?)?;
    let n = cfg.n_or_err()?;
    let samples = run_replicates(
        &model,
        n,
        cfg.reps.unwrap_or(1),
        cfg.seed,
        &cfg.stats,
        cfg.method.unwrap_or(Method::Composition),
        cfg.workers,
    )?;
    match cfg.format {
        Format::Csv => samples.write_csv(&mut *out)?,
        Format::Report => {
            let mut s = String::new();
            let _ = writeln!(s, "model = {model}\nn = {n}\nreps = {}", samples.reps());
            for (stat, col) in samples.statistics.iter().zip(&samples.columns) {
                let len = col.len() as f64;
                let mean = col.iter().map(|&x| x as f64).sum::<f64>() / len;
                let var = col.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (len - 1.0).max(1.0);
                let (lo, hi) = (col.iter().min().copied().unwrap_or(0), col.iter().max().copied().unwrap_or(0));
                let _ = writeln!(s, "{stat}: mean = {mean:.6}, variance = {var:.6}, min = {lo}, max = {hi}");
            }
            out.extend_from_slice(s.as_bytes());
        }
    }
    Ok(())
}

fn exact(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<(), CliError> {
    let model = XiModel::parse(cfg.model_or_err()?)?;
    let n = cfg.n_or_err()? as usize;
    let stat = cfg.stat.as_deref().unwrap_or("kstar");
    let i_max = cfg.i_max.unwrap_or(200);
    let bits = cfg.precision_bits;
    let pmf: Pmf = match stat {
        "kstar" => kstar_pmf(&model, n, default_kstar_cap(&model, n)?)?,
        "k" => k_pmf(&model, n)?,
        "k0" => k0_pmf(&model, n, i_max)?,
        "y" => y_pmf(&model, n, i_max)?,
        "z" => zn_pmf(&model, n)?,
        "kstar-tail" => {
            let cap = default_kstar_cap(&model, n)?;
            let start = bits.unwrap_or(DEFAULT_BITS);
            let mut s = String::from("k,tail\n");
            for k in 0..=cap as u64 {
                let _ = writeln!(s, "{k},{:e}", kstar_tail_direct_from(&model, n, k, start)?);
            }
            return scalar_or_table(cfg, out, s);
        }
        "ek0" | "ek0-alt" => {
            let v = if stat == "ek0" {
                e_k0_dp(&model, n)?
            } else {
                match bits {
                    Some(b) => e_k0_alt_sum_from(&model, n, b)?,
                    None => e_k0_alt_sum(&model, n)?,
                }
            };
            return scalar_or_table(cfg, out, format!("statistic,n,value\n{stat},{n},{v:e}\n"));
        }
        other => return Err(CliError::Usage(format!("unknown --stat {other:?}"))),
    };
    match cfg.format {
        Format::Csv => pmf.write_csv(&mut *out)?,
        Format::Report => out.extend_from_slice(pmf.to_report().as_bytes()),
    }
    Ok(())
}

fn scalar_or_table(_cfg: &RunConfig, out: &mut Vec<u8>, csv: String) -> Result<(), CliError> {
    out.extend_from_slice(csv.as_bytes());
    Ok(())
}

const N_GRID: [f64; 5] = [1e3, 1e6, 1e9, 1e12, 1e15];

fn limit(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<(), CliError> {
    let model = XiModel::parse(cfg.model_or_err()?)?;
    let functional: Functional = cfg.functional.as_deref().unwrap_or("kstar").parse()?;
    let outcome = limit_for(&model, functional)?;
    let cls = model.classify_case();
    let mut s = String::new();
    match cfg.format {
        Format::Report => {
            let _ = writeln!(s, "model = {model}\nfunctional = {functional}\nregime = {}", cls.case.tag());
            s.push_str(&outcome.describe(&N_GRID));
        }
        Format::Csv => match &outcome {
            LimitOutcome::Normalized(schedule) => {
                s.push_str("n,a_n,b_n\n");
                for n in N_GRID {
                    let _ = writeln!(s, "{n:e},{:e},{:e}", schedule.a_n(n), schedule.b_n(n));
                }
            }
            _ => {
                return Err(CliError::Usage(
                    "csv output is available for normalized limits only; use --format report".into(),
                ))
            }
        },
    }
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

fn verify(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<usize, CliError> {
    let suite = cfg.suite.as_deref().unwrap_or_default();
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let suite_cfg = SuiteConfig {
        seed: cfg.seed,
        workers: cfg.workers,
        scale: cfg.scale.unwrap_or(Scale::Full),
    };
    let mut groups = Vec::new();
    for name in names {
        groups.push(run_suite(name, &suite_cfg)?);
    }
    let reports: Vec<TestReport> = merge_reports(groups)
        .into_iter()
        .map(|r| match cfg.tolerances.get(&r.name) {
            Some(&t) => r.with_threshold(t).with_meta("threshold_override", t),
            None => r,
        })
        .collect();
    let text = match cfg.format {
        Format::Csv => reports_to_csv(&reports, cfg.strict),
        Format::Report => reports_table(&reports, cfg.strict),
    };
    out.extend_from_slice(text.as_bytes());
    Ok(reports.iter().filter(|r| r.is_failure(cfg.strict)).count())
}

/// Write `bytes` to `path` through a temporary file in the same directory,
/// so a failed run never leaves partial output behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Parse, execute and emit; the returned code follows the CLI contract.
pub fn run_with(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.command.into_config()?;
    let result = execute(&cfg)?;
    match &cfg.out {
        Some(path) => write_atomic(path, &result.bytes)?,
        None => io::stdout().write_all(&result.bytes)?,
    }
    if result.failed > 0 {
        return Err(CliError::TestFailure { failed: result.failed });
    }
    Ok(())
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run_with(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bsieve: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("bsieve").chain(args.iter().copied()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        cli.command.into_config()
    }

    #[test]
    fn config_round_trips() {
        let cfg = config(&[
            "simulate", "--model", "beta:1,1", "--n", "1e6", "--reps", "10", "--seed", "7", "--stats", "k,kstar,k0",
            "--workers", "3",
        ])
        .unwrap();
        assert_eq!(cfg.n, Some(1_000_000));
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        let logged = RunConfig::from_header(&cfg.header()).unwrap();
        assert_eq!(logged, cfg.canonical());
        let v = config(&["verify", "--suite", "gem-k0", "--tol", "x=0.5", "--strict"]).unwrap();
        assert_eq!(RunConfig::from_json(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn composition_beyond_limit_points_to_fast_path() {
        let err = config(&["simulate", "--model", "beta:1,1", "--n", "1e12", "--stats", "kstar"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("--method fast"));
        assert!(config(&["simulate", "--model", "beta:1,1", "--n", "1e15", "--method", "fast"]).is_ok());
        let err = config(&["simulate", "--model", "beta:1,1", "--n", "10", "--method", "fast", "--stats", "z"]);
        assert!(err.unwrap_err().to_string().contains("only kstar and nlogn"));
    }

    #[test]
    fn exact_rejects_unknown_statistic_and_large_n() {
        assert!(config(&["exact", "--model", "gem:1", "--n", "50", "--stat", "q"]).is_err());
        assert!(config(&["exact", "--model", "gem:1", "--n", "1e5"]).is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(XiModel::parse("nope").unwrap_err()).exit_code(), 2);
        assert_eq!(CliError::TestFailure { failed: 1 }.exit_code(), 1);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
    }
}
