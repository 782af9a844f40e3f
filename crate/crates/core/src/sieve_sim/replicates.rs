//! Deterministic parallel replication.
//!
//! Replicate `i` always draws from `RngStream::new(seed, i)` and results are
//! collected in replicate order, so output is bitwise identical for any
//! worker count.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::simulate::{
    simulate_composition, simulate_composition_walkpoints, simulate_kstar_fast, simulate_renewal_count,
};
use super::{RngStream, SieveStats};
use crate::xi_models::XiModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Statistic {
    K,
    Kstar,
    K0,
    K1,
    W,
    Z,
    V,
    /// Renewal count `N_{log n}` from an independent walk.
    NLogN,
}

impl Statistic {
    pub const ALL: [Statistic; 8] = [
        Statistic::K,
        Statistic::Kstar,
        Statistic::K0,
        Statistic::K1,
        Statistic::W,
        Statistic::Z,
        Statistic::V,
        Statistic::NLogN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::K => "k",
            Statistic::Kstar => "kstar",
            Statistic::K0 => "k0",
            Statistic::K1 => "k1",
            Statistic::W => "w",
            Statistic::Z => "z",
            Statistic::V => "v",
            Statistic::NLogN => "nlogn",
        }
    }

    pub fn needs_composition(self) -> bool {
        !matches!(self, Statistic::Kstar | Statistic::NLogN)
    }

    fn read(self, s: &SieveStats) -> u64 {
        match self {
            Statistic::K => s.k,
            Statistic::Kstar => s.kstar,
            Statistic::K0 => s.k0,
            Statistic::K1 => s.k1,
            Statistic::W => s.w,
            Statistic::Z => s.z,
            Statistic::V => s.v,
            Statistic::NLogN => unreachable!("not a composition statistic"),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| SimError::UnknownStatistic(s.to_string()))
    }
}

/// Which sampler produces the composition statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Stick-breaking with binomial thinning.
    Composition,
    /// Exponential points binned by the walk.
    WalkPoints,
    /// `K_n*` through `N_{E_{n,n}}` only; supports `kstar` and `nlogn`.
    Fast,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("unknown statistic {0:?}; expected one of k, kstar, k0, k1, w, z, v, nlogn")]
    UnknownStatistic(String),
    #[error("the fast sampler only provides kstar and nlogn, not {0}")]
    NotFast(Statistic),
    #[error("reps must be at least 1")]
    NoReplicates,
    #[error("cannot allocate output for {requested} replicates ({completed} completed)")]
    Resources { requested: u64, completed: u64 },
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

/// Sample columns in selector order, one entry per replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub statistics: Vec<Statistic>,
    pub columns: Vec<Vec<u64>>,
}

impl Samples {
    pub fn column(&self, stat: Statistic) -> Option<&[u64]> {
        self.statistics
            .iter()
            .position(|&s| s == stat)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn reps(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Header row with statistic names, then one row per replicate.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<&str> = self.statistics.iter().map(|s| s.name()).collect();
        writeln!(out, "{}", header.join(","))?;
        let mut line = String::new();
        for r in 0..self.reps() {
            line.clear();
            for (j, col) in self.columns.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&col[r].to_string());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// One replicate's values for the selected statistics.
pub fn replicate_values(
    model: &XiModel,
    n: u64,
    method: Method,
    selector: &[Statistic],
    rng: &mut RngStream,
) -> Result<Vec<u64>, SimError> {
    let needs_comp = selector.iter().any(|s| s.needs_composition())
        || (method != Method::Fast && selector.contains(&Statistic::Kstar));
    let stats = if needs_comp {
        Some(match method {
            Method::Composition => simulate_composition(model, n, rng).stats(),
            Method::WalkPoints => simulate_composition_walkpoints(model, n, rng).stats(),
            Method::Fast => {
                let bad = selector.iter().find(|s| s.needs_composition()).expect("composition stat");
                return Err(SimError::NotFast(*bad));
            }
        })
    } else {
        None
    };
    let kstar_fast = (method == Method::Fast && selector.contains(&Statistic::Kstar))
        .then(|| simulate_kstar_fast(model, n, rng));
    let nlogn = selector
        .contains(&Statistic::NLogN)
        .then(|| simulate_renewal_count(model, (n as f64).ln().max(0.0), rng));
    Ok(selector
        .iter()
        .map(|&s| match (s, &stats) {
            (Statistic::NLogN, _) => nlogn.expect("drawn"),
            (Statistic::Kstar, None) => kstar_fast.expect("drawn"),
            (s, Some(st)) => s.read(st),
            (_, None) => unreachable!("composition drawn for composition statistics"),
        })
        .collect())
}

/// Run `reps` replicates on `workers` threads (`None`: rayon default).
pub fn run_replicates(
    model: &XiModel,
    n: u64,
    reps: u64,
    seed: u64,
    selector: &[Statistic],
    method: Method,
    workers: Option<usize>,
) -> Result<Samples, SimError> {
    if reps == 0 {
        return Err(SimError::NoReplicates);
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    rows.try_reserve_exact(reps as usize).map_err(|_| SimError::Resources {
        requested: reps,
        completed: 0,
    })?;
    let work = || -> Result<Vec<Vec<u64>>, SimError> {
        (0..reps)
            .into_par_iter()
            .map(|i| replicate_values(model, n, method, selector, &mut RngStream::new(seed, i)))
            .collect()
    };
    rows = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut columns = vec![Vec::with_capacity(rows.len()); selector.len()];
    for row in rows {
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
    }
    Ok(Samples {
        statistics: selector.to_vec(),
        columns,
    })
}
