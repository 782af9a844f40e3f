//! Goodness-of-fit tests confronting samples, exact pmfs and limit laws.
//!
//! Every test returns a [`TestReport`]. `pass` records only whether the
//! statistic is within its threshold (or the p-value above [`DEFAULT_ALPHA`]);
//! a separate `under_powered` flag marks inputs too small to trust, and
//! [`TestReport::outcome`] combines the two, optionally in strict mode.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::exact_engine::Pmf;

/// KS and chi-square tests without an explicit threshold pass at `p ≥ DEFAULT_ALPHA`.
pub const DEFAULT_ALPHA: f64 = 1e-3;

/// Minimum effective sample size below which a test is flagged under-powered.
pub const MIN_SAMPLES: usize = 30;

/// Expected count each chi-square bin must reach after merging.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    Fail,
    UnderPowered,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::UnderPowered => "UNDER-POWERED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    /// Pass bound on the statistic; `None` when the p-value decides.
    pub threshold: Option<f64>,
    pub p_value: Option<f64>,
    pub sample_sizes: Vec<u64>,
    pub pass: bool,
    pub under_powered: bool,
    /// Experimental checks are reported but never fail a run.
    pub experimental: bool,
    /// Model, n, reps, seed and anything else needed to re-run the test.
    pub metadata: BTreeMap<String, String>,
}

impl TestReport {
    fn new(name: &str, statistic: f64, threshold: Option<f64>, p_value: Option<f64>, sizes: Vec<u64>) -> Self {
        let pass = match (threshold, p_value) {
            (Some(t), _) => statistic < t,
            (None, Some(p)) => p >= DEFAULT_ALPHA,
            (None, None) => false,
        };
        TestReport {
            name: name.to_string(),
            statistic,
            threshold,
            p_value,
            sample_sizes: sizes,
            pass,
            under_powered: false,
            experimental: false,
            metadata: BTreeMap::new(),
        }
    }

    /// A report for a check computed elsewhere: passes iff `statistic < threshold`.
    pub fn bound(name: &str, statistic: f64, threshold: f64, sizes: Vec<u64>) -> Self {
        Self::new(name, statistic, Some(threshold), None, sizes)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// Replace the threshold and re-evaluate `pass` against it.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self.pass = self.statistic < threshold;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn experimental(mut self) -> Self {
        self.experimental = true;
        self
    }

    pub fn under_powered_if(mut self, flag: bool) -> Self {
        self.under_powered |= flag;
        self
    }

    pub fn outcome(&self, strict: bool) -> Outcome {
        match (self.under_powered, self.pass) {
            (true, _) if strict => Outcome::Fail,
            (true, _) => Outcome::UnderPowered,
            (false, true) => Outcome::Pass,
            (false, false) => Outcome::Fail,
        }
    }

    /// Whether this report makes a run fail.
    pub fn is_failure(&self, strict: bool) -> bool {
        !self.experimental && self.outcome(strict) == Outcome::Fail
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "name",
        "outcome",
        "statistic",
        "threshold",
        "p_value",
        "sample_sizes",
        "pass",
        "under_powered",
        "experimental",
        "metadata",
    ];

    pub fn csv_fields(&self, strict: bool) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        vec![
            self.name.clone(),
            self.outcome(strict).to_string(),
            self.statistic.to_string(),
            opt(self.threshold),
            opt(self.p_value),
            join(&self.sample_sizes, ";"),
            self.pass.to_string(),
            self.under_powered.to_string(),
            self.experimental.to_string(),
            self.metadata_string(),
        ]
    }

    fn metadata_string(&self) -> String {
        let parts: Vec<String> = self.metadata.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.join(";")
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Reports as CSV with a header row.
pub fn reports_to_csv(reports: &[TestReport], strict: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TestReport::CSV_HEADER).expect("in-memory write");
    for r in reports {
        w.write_record(r.csv_fields(strict)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Human-readable fixed-width table, one line per report.
pub fn reports_table(reports: &[TestReport], strict: bool) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<13} {:<width$} {:>12} {:>12} {:>10}  sizes",
        "outcome", "name", "statistic", "threshold", "p"
    );
    for r in reports {
        let tag = if r.experimental {
            format!("{}*", r.outcome(strict))
        } else {
            r.outcome(strict).to_string()
        };
        let thr = r.threshold.map(|t| format!("{t:.4e}")).unwrap_or_else(|| "-".into());
        let p = r.p_value.map(|p| format!("{p:.3e}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{tag:<13} {:<width$} {:>12.6e} {thr:>12} {p:>10}  {}",
            r.name,
            r.statistic,
            join(&r.sample_sizes, "+")
        );
    }
    if reports.iter().any(|r| r.experimental) {
        out.push_str("(* experimental: reported, never fails the run)\n");
    }
    out
}

/// Merge reports by name; a later report replaces an earlier one of the same name.
pub fn merge_reports(groups: impl IntoIterator<Item = Vec<TestReport>>) -> Vec<TestReport> {
    let mut merged: Vec<TestReport> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for r in groups.into_iter().flatten() {
        match index.get(&r.name) {
            Some(&i) => merged[i] = r,
            None => {
                index.insert(r.name.clone(), merged.len());
                merged.push(r);
            }
        }
    }
    merged
}

/// Asymptotic Kolmogorov tail `P{K > λ} = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}`, first 100 terms.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    // The alternating series is useless near 0, where the tail is 1 to double precision.
    if lambda < 0.18 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100u32 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-300 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value for a KS distance `d` at effective sample size `ne`, with the
/// Stephens small-sample correction.
pub fn ks_p_value(d: f64, ne: f64) -> f64 {
    let s = ne.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * d)
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// One-sample KS against a continuous CDF. The CDF is evaluated once per
/// distinct sample value, in parallel. Pass at `d < threshold` when given,
/// else at `p ≥ DEFAULT_ALPHA`.
pub fn ks_one_sample<F>(name: &str, samples: &[f64], cdf: F, threshold: Option<f64>) -> TestReport
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = samples.len();
    if n == 0 {
        return TestReport::new(name, 1.0, threshold, None, vec![0]).under_powered_if(true);
    }
    let xs = sorted(samples);
    let mut distinct: Vec<(f64, usize, usize)> = Vec::new(); // (x, first index, last index + 1)
    for (i, &x) in xs.iter().enumerate() {
        match distinct.last_mut() {
            Some(last) if last.0 == x => last.2 = i + 1,
            _ => distinct.push((x, i, i + 1)),
        }
    }
    let values: Vec<f64> = distinct.par_iter().map(|&(x, _, _)| cdf(x)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return TestReport::new(name, 1.0, threshold, Some(0.0), vec![n as u64])
            .with_meta("error", format!("cdf not finite at {}", distinct[i].0));
    }
    let nf = n as f64;
    let d = distinct
        .iter()
        .zip(&values)
        .map(|(&(_, lo, hi), &f)| (hi as f64 / nf - f).max(f - lo as f64 / nf))
        .fold(0.0, f64::max);
    TestReport::new(name, d, threshold, Some(ks_p_value(d, nf)), vec![n as u64])
        .under_powered_if(n < MIN_SAMPLES)
}

/// KS distance between integer samples and a discrete law, taken over the
/// integers (where both step functions jump). The Kolmogorov p-value is
/// conservative here.
pub fn ks_one_sample_discrete(name: &str, samples: &[u64], pmf: &Pmf, threshold: Option<f64>) -> TestReport {
    let n = samples.len();
    if n == 0 {
        return TestReport::new(name, 1.0, threshold, None, vec![0]).under_powered_if(true);
    }
    let hist = histogram(samples);
    let hi_sample = hist.keys().next_back().copied().unwrap_or(0) as i64;
    let hi = hi_sample.max(pmf.offset + pmf.probs.len() as i64);
    let lo = pmf.offset.min(0);
    let nf = n as f64;
    let mut emp = 0u64;
    let mut d: f64 = 0.0;
    for k in lo..=hi {
        if k >= 0 {
            emp += hist.get(&(k as u64)).copied().unwrap_or(0);
        }
        d = d.max((emp as f64 / nf - pmf.cdf(k)).abs());
    }
    TestReport::new(name, d, threshold, Some(ks_p_value(d, nf)), vec![n as u64])
        .under_powered_if(n < MIN_SAMPLES)
}

/// Two-sample KS distance. Ties are consumed together, so the statistic is
/// exact for discrete data; effective size `nm / (n + m)`.
pub fn ks_two_sample(name: &str, a: &[f64], b: &[f64], threshold: Option<f64>) -> TestReport {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return TestReport::new(name, 1.0, threshold, None, vec![n as u64, m as u64]).under_powered_if(true);
    }
    let d = ks_two_sample_distance(&sorted(a), &sorted(b));
    let ne = (n * m) as f64 / (n + m) as f64;
    TestReport::new(name, d, threshold, Some(ks_p_value(d, ne)), vec![n as u64, m as u64])
        .under_powered_if(ne < MIN_SAMPLES as f64)
}

/// `sup |F_a - F_b|` for sorted inputs.
pub fn ks_two_sample_distance(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

pub fn histogram(samples: &[u64]) -> BTreeMap<u64, u64> {
    let mut h = BTreeMap::new();
    for &s in samples {
        *h.entry(s).or_insert(0) += 1;
    }
    h
}

/// Total variation `½ (Σ_k |p_k - p̂_k| + p̂(outside the table) + deficit)`,
/// counting the pmf's unresolved mass as fully mismatched.
pub fn tv_distance(name: &str, pmf: &Pmf, samples: &[u64], threshold: f64) -> TestReport {
    let n = samples.len();
    if n == 0 {
        return TestReport::bound(name, 1.0, threshold, vec![0]).under_powered_if(true);
    }
    let hist = histogram(samples);
    let nf = n as f64;
    let mut sum = 0.0;
    let mut inside = 0u64;
    for (k, p) in pmf.iter() {
        let c = if k >= 0 { hist.get(&(k as u64)).copied().unwrap_or(0) } else { 0 };
        inside += c;
        sum += (p - c as f64 / nf).abs();
    }
    let outside = (n as u64 - inside) as f64 / nf;
    let tv = 0.5 * (sum + outside + pmf.mass_deficit);
    TestReport::bound(name, tv, threshold, vec![n as u64])
        .with_meta("mass_deficit", pmf.mass_deficit)
        .under_powered_if(n < MIN_SAMPLES)
}

/// Total variation between two pmfs, `½ (Σ_k |p_k - q_k| + deficit_p + deficit_q)`.
pub fn tv_pmfs(name: &str, p: &Pmf, q: &Pmf, threshold: f64) -> TestReport {
    let lo = p.offset.min(q.offset);
    let hi = (p.offset + p.probs.len() as i64).max(q.offset + q.probs.len() as i64);
    let sum: f64 = (lo..hi).map(|k| (p.prob(k) - q.prob(k)).abs()).sum();
    let tv = 0.5 * (sum + p.mass_deficit + q.mass_deficit);
    TestReport::bound(name, tv, threshold, vec![])
        .with_meta("mass_deficit", p.mass_deficit + q.mass_deficit)
}

/// Pearson chi-square of observed counts against expected counts. Adjacent
/// bins are merged left to right until each expected count reaches
/// [`MIN_EXPECTED`]; a short final group joins its predecessor.
pub fn chi_square(name: &str, observed: &[u64], expected: &[f64]) -> TestReport {
    assert_eq!(observed.len(), expected.len(), "observed and expected must align");
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        acc.0 += o as f64;
        acc.1 += e;
        if acc.1 >= MIN_EXPECTED {
            groups.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => groups.push(acc),
        }
    }
    let total: u64 = observed.iter().sum();
    let stat: f64 = groups.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    if groups.len() < 2 {
        return TestReport::new(name, stat, None, None, vec![total])
            .with_meta("bins", groups.len())
            .under_powered_if(true);
    }
    let df = (groups.len() - 1) as f64;
    let p = ChiSquared::new(df).expect("positive degrees of freedom").sf(stat);
    TestReport::new(name, stat, None, Some(p), vec![total]).with_meta("bins", groups.len())
}

/// Raw-moment z-test: for each `(k, m_k)`, `z_k = (mean(x^k) - m_k) / SE`.
/// The statistic is `max |z_k|`, passing below `z_max`.
pub fn moment_z(name: &str, samples: &[f64], moments: &[(u32, f64)], z_max: f64) -> TestReport {
    let n = samples.len();
    let mut worst: f64 = 0.0;
    let mut report_meta = Vec::new();
    for &(k, target) in moments {
        let powers: Vec<f64> = samples.iter().map(|&x| x.powi(k as i32)).collect();
        let nf = n as f64;
        let mean = powers.iter().sum::<f64>() / nf;
        let var = powers.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (nf - 1.0);
        let z = (mean - target) / (var / nf).sqrt();
        let z = if z.is_finite() { z } else { f64::INFINITY };
        worst = worst.max(z.abs());
        report_meta.push((format!("z{k}"), z));
    }
    let mut r = TestReport::bound(name, worst, z_max, vec![n as u64]).under_powered_if(n < MIN_SAMPLES);
    for (k, z) in report_meta {
        r = r.with_meta(&k, z);
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Monotone trend across an ordered grid (e.g. n-decades). The statistic is
/// the largest step against `direction`; it must stay below `band`, so with
/// `band = 0` the trend has to be strict.
pub fn trend_test(name: &str, points: &[(f64, f64)], direction: Direction, band: f64) -> TestReport {
    let sign = match direction {
        Direction::Increasing => -1.0,
        Direction::Decreasing => 1.0,
    };
    let worst = points
        .windows(2)
        .map(|w| sign * (w[1].1 - w[0].1))
        .fold(f64::NEG_INFINITY, f64::max);
    let stat = if worst.is_finite() { worst } else { 0.0 };
    let mut r = TestReport::bound(name, stat, band, vec![points.len() as u64])
        .with_meta("direction", format!("{direction:?}").to_lowercase())
        .under_powered_if(points.len() < 3);
    for (x, v) in points {
        r = r.with_meta(&format!("value@{x:e}"), v);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_arrays_have_zero_distance() {
        let a: Vec<f64> = (0..100).map(|i| (i % 7) as f64).collect();
        let r = ks_two_sample("same", &a, &a, Some(0.01));
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass && r.p_value == Some(1.0));
    }

    #[test]
    fn two_sample_ties_are_consumed_together() {
        // F_a jumps to 1 at 0, F_b reaches 1/2 at 0 and 1 at 1.
        let d = ks_two_sample_distance(&[0.0, 0.0], &[0.0, 1.0]);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn constant_samples_against_continuous_cdf() {
        let r = ks_one_sample("const", &vec![0.3; 1000], |x: f64| x.clamp(0.0, 1.0), None);
        assert!(r.statistic >= 0.5 && !r.pass);
    }

    #[test]
    fn uniform_self_test_regression() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        let r = ks_one_sample("uniform", &xs, |x: f64| x.clamp(0.0, 1.0), None);
        assert!(r.pass);
        // Brute-force distance with the textbook formula.
        let s = sorted(&xs);
        let n = s.len() as f64;
        let d = s
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
            .fold(0.0, f64::max);
        assert_eq!(r.statistic, d);
        // Frozen for this seed: guards the sampler stream and the KS code together.
        assert!((r.statistic - 7.038_183_600_533_21e-3).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_tail_known_values() {
        // Classical critical values: P{K > 1.3581} = 0.05, P{K > 1.6276} = 0.01.
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!((kolmogorov_sf(0.2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p_value_matches_permutation_estimate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a: Vec<f64> = (0..50).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..50).map(|_| rng.random::<f64>() * 1.25).collect();
        let d0 = ks_two_sample_distance(&sorted(&a), &sorted(&b));
        let p = ks_two_sample("perm", &a, &b, None).p_value.unwrap();
        let mut pool: Vec<f64> = a.iter().chain(&b).copied().collect();
        let perms = 10_000;
        let mut hits = 0;
        for _ in 0..perms {
            pool.shuffle(&mut rng);
            let d = ks_two_sample_distance(&sorted(&pool[..50]), &sorted(&pool[50..]));
            if d >= d0 - 1e-12 {
                hits += 1;
            }
        }
        let p_perm = hits as f64 / perms as f64;
        assert!((p - p_perm).abs() < 0.02, "asymptotic {p}, permutation {p_perm}");
    }

    #[test]
    fn discrete_ks_and_tv_against_exact_law() {
        let pmf = Pmf::from_probs(0, vec![0.25, 0.5, 0.25]);
        let samples = [vec![0u64; 25], vec![1; 50], vec![2; 25]].concat();
        assert_eq!(ks_one_sample_discrete("ks", &samples, &pmf, Some(1e-12)).statistic, 0.0);
        assert_eq!(tv_distance("tv", &pmf, &samples, 1e-12).statistic, 0.0);
        let shifted: Vec<u64> = samples.iter().map(|s| s + 1).collect();
        let tv = tv_distance("tv", &pmf, &shifted, 0.5);
        assert!((tv.statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_finite_cdf_fails() {
        let r = ks_one_sample("nan", &[0.1, 0.2], |_| f64::NAN, Some(1.0));
        assert!(!r.pass && r.metadata.contains_key("error"));
    }

    #[test]
    fn tv_between_pmfs() {
        let p = Pmf::from_probs(0, vec![0.5, 0.5]);
        let q = Pmf::from_probs(1, vec![0.5, 0.25]);
        // |0.5| + |0.5 - 0.5| + |0.25| + deficit 0.25
        assert!((tv_pmfs("tv", &p, &q, 1.0).statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tv_counts_deficit_as_mismatch() {
        let pmf = Pmf::from_probs(0, vec![0.5, 0.4]);
        let samples = [vec![0u64; 50], vec![1; 40], vec![7; 10]].concat();
        let r = tv_distance("tv", &pmf, &samples, 1.0);
        assert!((r.statistic - 0.1).abs() < 1e-15);
    }

    #[test]
    fn chi_square_merges_sparse_bins() {
        let expected = [50.0, 30.0, 10.0, 4.0, 3.0, 2.0, 1.0];
        let observed = [50, 30, 10, 4, 3, 2, 1];
        let r = chi_square("chi", &observed, &expected);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.metadata["bins"], "4");
        assert!(r.pass && !r.under_powered);
        let r = chi_square("tiny", &[1, 2], &[1.0, 2.0]);
        assert!(r.under_powered && r.outcome(false) == Outcome::UnderPowered);
        assert_eq!(r.outcome(true), Outcome::Fail);
    }

    #[test]
    fn moment_z_flags_wrong_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let good = moment_z("m", &xs, &[(1, 0.5), (2, 1.0 / 3.0), (3, 0.25)], 4.0);
        assert!(good.pass, "{}", good.statistic);
        assert!(!moment_z("m", &xs, &[(1, 0.52)], 4.0).pass);
    }

    #[test]
    fn trend_directions() {
        let pts = [(1e3, 0.3), (1e6, 0.2), (1e9, 0.1)];
        assert!(trend_test("t", &pts, Direction::Decreasing, 0.0).pass);
        assert!(!trend_test("t", &pts, Direction::Increasing, 0.0).pass);
        let flat = [(1.0, 2.0), (2.0, 2.0), (3.0, 2.0)];
        assert!(!trend_test("t", &flat, Direction::Increasing, 0.0).pass);
        assert!(!trend_test("t", &flat, Direction::Decreasing, 0.0).pass);
        assert!(trend_test("t", &pts[..2], Direction::Decreasing, 0.0).under_powered);
    }

    #[test]
    fn reports_round_trip_and_render() {
        let r = ks_two_sample("round-trip", &[1.0, 2.0, 3.0], &[1.5, 2.5], None)
            .with_meta("model", "beta:2,3")
            .with_meta("seed", 7)
            .experimental();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<TestReport>(&json).unwrap(), r);
        let csv = reports_to_csv(std::slice::from_ref(&r), false);
        assert!(csv.starts_with("name,outcome,statistic"));
        assert!(csv.contains("\"model=beta:2,3;seed=7\""));
        let table = reports_table(&[r], true);
        assert!(table.contains("FAIL*") && table.contains("experimental"));
    }

    #[test]
    fn merge_replaces_by_name() {
        let a = TestReport::bound("x", 1.0, 2.0, vec![1]);
        let b = TestReport::bound("y", 1.0, 2.0, vec![1]);
        let a2 = TestReport::bound("x", 3.0, 2.0, vec![1]);
        let merged = merge_reports([vec![a, b], vec![a2.clone()]]);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0], a2);
    }

    #[test]
    fn empty_inputs_are_under_powered() {
        assert!(ks_one_sample("e", &[], |x| x, None).under_powered);
        assert!(ks_two_sample("e", &[], &[1.0], None).under_powered);
        assert!(tv_distance("e", &Pmf::point_mass(0), &[], 0.1).under_powered);
    }
}
