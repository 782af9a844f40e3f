//! Samplers for one realization of the sieve.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp1, Gamma, Open01, Poisson};

use super::{SieveStats, WeakComposition};
use crate::xi_models::XiModel;

/// Default number of top order-statistic gaps returned by [`simulate_undershoot`].
pub const DEFAULT_K_CAP: usize = 64;

/// Stick-breaking with binomial thinning: box `j` takes `Binomial(remaining, ξ_j)`.
pub fn simulate_composition<R: Rng + ?Sized>(model: &XiModel, n: u64, rng: &mut R) -> WeakComposition {
    let mut counts = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let (xi, _) = model.sample_pair(rng);
        let taken = Binomial::new(remaining, xi.clamp(0.0, 1.0))
            .expect("probability in [0, 1]")
            .sample(rng);
        counts.push(taken);
        remaining -= taken;
    }
    WeakComposition::from_parts_unchecked(counts, n)
}

/// Balls are `n` standard exponential points; box `k` is `(S_{k-1}, S_k]`
/// for the walk with steps `-log ξ̄`.
pub fn simulate_composition_walkpoints<R: Rng + ?Sized>(
    model: &XiModel,
    n: u64,
    rng: &mut R,
) -> WeakComposition {
    let mut points: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    points.sort_by(f64::total_cmp);
    let mut counts = Vec::new();
    let mut s = 0.0;
    let mut i = 0;
    while i < points.len() {
        s += model.sample_step(rng);
        let start = i;
        while i < points.len() && points[i] <= s {
            i += 1;
        }
        counts.push((i - start) as u64);
    }
    WeakComposition::from_parts_unchecked(counts, n)
}

/// Maximum of `n` standard exponentials, `-log(1 - U^{1/n})`, accurate for huge `n`.
pub fn sample_exp_max<R: Rng + ?Sized>(n: u64, rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    -(-(u.ln() / n as f64).exp_m1()).ln()
}

/// `E_{n-k,n}`, the `(k+1)`-th largest of `n` standard exponentials:
/// `1 - U_{(n-k)} ~ Beta(k+1, n-k)`, drawn as `G_1 / (G_1 + G_2)` from gammas.
pub fn sample_exp_order_stat<R: Rng + ?Sized>(n: u64, k: u64, rng: &mut R) -> f64 {
    assert!(k < n, "order statistic {k} of {n}");
    let g1: f64 = Gamma::new((k + 1) as f64, 1.0).expect("positive shape").sample(rng);
    let g2: f64 = Gamma::new((n - k) as f64, 1.0).expect("positive shape").sample(rng);
    (g2 / g1).ln_1p()
}

/// `N_t = inf{k ≥ 1 : S_k ≥ t}`.
pub fn simulate_renewal_count<R: Rng + ?Sized>(model: &XiModel, t: f64, rng: &mut R) -> u64 {
    let mut s = 0.0;
    let mut k = 0;
    loop {
        s += model.sample_step(rng);
        k += 1;
        if s >= t {
            return k;
        }
    }
}

/// `K_n*` alone via `K_n* = N_{E_{n,n}}`; cost grows with `log n` only.
pub fn simulate_kstar_fast<R: Rng + ?Sized>(model: &XiModel, n: u64, rng: &mut R) -> u64 {
    if n == 0 {
        return 0;
    }
    let e_max = sample_exp_max(n, rng);
    simulate_renewal_count(model, e_max, rng)
}

/// Walk undershoot at the largest ball together with the top order-statistic gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct Undershoot {
    /// `E_{n,n} - S_{N-1}` with `N = N_{E_{n,n}}` and `S_0 = 0`.
    pub undershoot: f64,
    pub e_max: f64,
    /// `gaps[k-1] = E_{n,n} - E_{n-k,n}` for `k = 1..=min(k_cap, n-1)`.
    pub gaps: Vec<f64>,
}

impl Undershoot {
    /// Indicator of `Z_n > k` through the identity `{Z_n > k} = {Ũ > E_{n,n} - E_{n-k,n}}`.
    /// `None` beyond the sampled gaps.
    pub fn z_exceeds(&self, k: usize) -> Option<bool> {
        if k == 0 {
            return Some(true);
        }
        self.gaps.get(k - 1).map(|&g| self.undershoot > g)
    }

    /// `Z_n` when it does not exceed the number of sampled gaps.
    pub fn z(&self) -> Option<u64> {
        let beyond = self.gaps.iter().take_while(|&&g| self.undershoot > g).count();
        (beyond < self.gaps.len()).then_some(beyond as u64 + 1)
    }
}

/// Sample `(Ũ, E_{n,n}, top gaps)` without drawing all `n` points: the gaps
/// come from Rényi's representation `E_{n-j+1,n} - E_{n-j,n} = X_j / j`,
/// independent of the level `E_{n-k,n}` they sit on.
pub fn simulate_undershoot<R: Rng + ?Sized>(
    model: &XiModel,
    n: u64,
    k_cap: usize,
    rng: &mut R,
) -> Undershoot {
    assert!(n >= 1, "undershoot needs at least one ball");
    let k_cap = (k_cap as u64).min(n - 1) as usize;
    let mut gaps = Vec::with_capacity(k_cap);
    let mut acc = 0.0;
    for j in 1..=k_cap {
        let x: f64 = Exp1.sample(rng);
        acc += x / j as f64;
        gaps.push(acc);
    }
    let base = sample_exp_order_stat(n, k_cap as u64, rng);
    let e_max = base + acc;
    let mut s = 0.0;
    loop {
        let next = s + model.sample_step(rng);
        if next >= e_max {
            break;
        }
        s = next;
    }
    Undershoot {
        undershoot: e_max - s,
        e_max,
        gaps,
    }
}

/// Poissonized sieve: `n ~ Poisson(t)` balls. Returns `(n, stats)`.
pub fn simulate_poissonized<R: Rng + ?Sized>(model: &XiModel, t: f64, rng: &mut R) -> (u64, SieveStats) {
    let n = if t > 0.0 {
        let draw: f64 = Poisson::new(t).expect("positive rate").sample(rng);
        draw as u64
    } else {
        0
    };
    (n, simulate_composition(model, n, rng).stats())
}
