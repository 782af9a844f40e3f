//! Validated run configuration and its logged form.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use bernoulli_sieve::exact_engine::MAX_TABLE_N;
use bernoulli_sieve::sieve_sim::{Method, Statistic};
use bernoulli_sieve::suites::Scale;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest `n` for samplers whose cost grows only with `log n`.
pub const MAX_N_FAST: f64 = 1e15;
/// Largest `n` for full composition sampling.
pub const MAX_N_COMPOSITION: f64 = 1e9;
/// Largest `n` for the exponential-points sampler, which stores every ball.
pub const MAX_N_WALKPOINTS: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Simulate,
    Exact,
    Limit,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Report,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Report => "report",
        })
    }
}

/// Exact quantities available from `exact --stat`.
pub const EXACT_STATS: [&str; 8] = ["kstar", "kstar-tail", "k", "k0", "y", "z", "ek0", "ek0-alt"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stats: Vec<Statistic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stat: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Scale>,
    #[serde(default)]
    pub strict: bool,
    /// Per-test threshold overrides for `verify`, by report name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    /// Not part of the logged header: output does not depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Not part of the logged header.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(s).map_err(|e| CliError::Usage(format!("cannot read config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The part of the config that determines the output bytes.
    pub fn canonical(&self) -> RunConfig {
        RunConfig {
            workers: None,
            out: None,
            ..self.clone()
        }
    }

    /// Comment lines prefixed to every output: tool version, canonical config, seed.
    pub fn header(&self) -> String {
        format!(
            "# bsieve {}\n# config {}\n# seed {}\n",
            env!("CARGO_PKG_VERSION"),
            self.canonical().to_json(),
            self.seed
        )
    }

    /// Recover the config from an output previously written with [`RunConfig::header`].
    pub fn from_header(text: &str) -> Result<Self, CliError> {
        text.lines()
            .find_map(|l| l.strip_prefix("# config "))
            .ok_or_else(|| CliError::Usage("no '# config' header line found".into()))
            .and_then(Self::from_json)
    }

    pub fn n_or_err(&self) -> Result<u64, CliError> {
        self.n.ok_or_else(|| CliError::Usage(format!("--n is required for {:?}", self.command)))
    }

    pub fn model_or_err(&self) -> Result<&str, CliError> {
        self.model
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("--model is required for {:?}", self.command)))
    }

    /// Reject combinations the engines cannot serve, pointing at what can.
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        match self.command {
            CommandKind::Simulate => {
                self.model_or_err()?;
                let n = self.n_or_err()? as f64;
                if self.reps == Some(0) {
                    return usage("--reps must be at least 1".into());
                }
                if self.stats.is_empty() {
                    return usage("--stats needs at least one statistic".into());
                }
                let method = self.method.unwrap_or(Method::Composition);
                match method {
                    Method::Fast => {
                        if let Some(s) = self.stats.iter().find(|s| s.needs_composition()) {
                            return usage(format!(
                                "the fast sampler provides only kstar and nlogn, not {s}; use --method composition"
                            ));
                        }
                        if n > MAX_N_FAST {
                            return usage(format!("--n {n:e} exceeds the fast-path limit {MAX_N_FAST:e}"));
                        }
                    }
                    Method::Composition if n > MAX_N_COMPOSITION => {
                        return usage(format!(
                            "full composition simulation supports n ≤ {MAX_N_COMPOSITION:e}; for kstar and nlogn \
                             use --method fast, which accepts n up to {MAX_N_FAST:e}"
                        ));
                    }
                    Method::WalkPoints if n > MAX_N_WALKPOINTS => {
                        return usage(format!(
                            "the walkpoints sampler stores every ball and supports n ≤ {MAX_N_WALKPOINTS:e}; \
                             use --method composition"
                        ));
                    }
                    _ => {}
                }
            }
            CommandKind::Exact => {
                self.model_or_err()?;
                let n = self.n_or_err()?;
                if n as usize > MAX_TABLE_N {
                    return usage(format!(
                        "exact recursions support n ≤ {MAX_TABLE_N}; use simulate or limit for larger n"
                    ));
                }
                let stat = self.stat.as_deref().unwrap_or("kstar");
                if !EXACT_STATS.contains(&stat) {
                    return usage(format!("unknown --stat {stat:?}; expected one of {}", EXACT_STATS.join(", ")));
                }
            }
            CommandKind::Limit => {
                self.model_or_err()?;
            }
            CommandKind::Verify => {
                if self.suite.is_none() {
                    return usage("--suite is required for verify (a suite name or 'all')".into());
                }
            }
        }
        Ok(())
    }
}

/// Parse a ball count such as `1000`, `1e6` or `2.5e9`: a nonnegative
/// integer no larger than [`MAX_N_FAST`].
pub fn parse_count(s: &str) -> Result<u64, String> {
    let x: f64 = s
        .trim()
        .replace('_', "")
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if !x.is_finite() || x < 0.0 || x.fract() != 0.0 {
        return Err(format!("{s:?} is not a nonnegative integer"));
    }
    if x > MAX_N_FAST {
        return Err(format!("{s:?} exceeds the largest supported n, {MAX_N_FAST:e}"));
    }
    Ok(x as u64)
}

/// Parse `name=value` threshold overrides.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v: f64 = value.parse().map_err(|_| format!("not a number: {value:?}"))?;
    if v.is_nan() || v <= 0.0 {
        return Err(format!("threshold for {name} must be positive"));
    }
    Ok((name.to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("2.5e9"), Ok(2_500_000_000));
        assert_eq!(parse_count("1e15"), Ok(1_000_000_000_000_000));
        assert!(parse_count("1e16").is_err());
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn tolerance_overrides() {
        assert_eq!(parse_tolerance("a=0.5"), Ok(("a".into(), 0.5)));
        assert!(parse_tolerance("a").is_err());
        assert!(parse_tolerance("a=-1").is_err());
    }
}
