use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// Probability mass function on `offset, offset + 1, ...` with the mass
/// left out by truncation recorded explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    pub offset: i64,
    pub probs: Vec<f64>,
    pub mass_deficit: f64,
}

impl Pmf {
    /// Wrap `probs` and set the deficit to `1 - Σ probs` (floored at 0).
    pub fn from_probs(offset: i64, probs: Vec<f64>) -> Self {
        let total: f64 = probs.iter().sum();
        Pmf {
            offset,
            probs,
            mass_deficit: (1.0 - total).max(0.0),
        }
    }

    pub fn point_mass(x: i64) -> Self {
        Pmf {
            offset: x,
            probs: vec![1.0],
            mass_deficit: 0.0,
        }
    }

    pub fn prob(&self, k: i64) -> f64 {
        let i = k - self.offset;
        if i < 0 {
            0.0
        } else {
            self.probs.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    /// Support points paired with their probabilities.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.offset + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(k, p)| k as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(k, p)| (k as f64 - m).powi(2) * p).sum()
    }

    /// `P{X ≤ k}` over the represented mass.
    pub fn cdf(&self, k: i64) -> f64 {
        self.iter().take_while(|&(j, _)| j <= k).map(|(_, p)| p).sum()
    }

    /// `P{X > k}`, counting the truncated mass as lying above the support.
    pub fn tail_gt(&self, k: i64) -> f64 {
        self.iter().filter(|&(j, _)| j > k).map(|(_, p)| p).sum::<f64>() + self.mass_deficit
    }

    /// `Σ_k p_k s^k` over the represented mass.
    pub fn pgf(&self, s: f64) -> f64 {
        self.iter().map(|(k, p)| p * s.powi(k as i32)).sum()
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with columns `k,probability` and a trailing `# mass_deficit=` line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,probability")?;
        for (k, p) in self.iter() {
            writeln!(out, "{k},{p:e}")?;
        }
        writeln!(out, "# mass_deficit={:e}", self.mass_deficit)
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii")
    }

    /// Key-value text mirroring the CSV fields.
    pub fn to_report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "offset={}", self.offset);
        let _ = writeln!(s, "len={}", self.probs.len());
        let _ = writeln!(s, "mass_deficit={:e}", self.mass_deficit);
        let probs: Vec<String> = self.probs.iter().map(|p| format!("{p:e}")).collect();
        let _ = writeln!(s, "probs={}", probs.join(","));
        s
    }
}
