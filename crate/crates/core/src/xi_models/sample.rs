//! Exact samplers for `ξ`, `ξ̄` and the walk step `-log ξ̄`.
//!
//! `ξ` and `ξ̄` are drawn as a pair so that neither is formed as `1 - x`
//! of the other where that would lose precision. For heavy-tailed step laws
//! `ξ̄ = e^{-s}` underflows to `0` once `s > 745`, and symmetrically `ξ` can
//! round to `0` or `1` on extreme draws; the step itself stays accurate.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Open01};

use super::{CustomLaw, Family, XiModel};

impl XiModel {
    /// Draw `(ξ, ξ̄)`.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match &self.family {
            Family::Beta { b, c } => {
                let (x, y) = beta_gammas(*b, *c, rng);
                let total = x + y;
                (x / total, y / total)
            }
            Family::LogPareto { alpha } => {
                let u: f64 = Open01.sample(rng);
                let s = self.log_pareto_step(*alpha, u);
                (-(-s).exp_m1(), (-s).exp())
            }
            Family::Example27 => {
                let u: f64 = Open01.sample(rng);
                let w = u / (1.0 - u);
                (( -w).exp(), -(-w).exp_m1())
            }
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Quantile(q) => {
                    let u: f64 = Open01.sample(rng);
                    let xibar = q(u);
                    (1.0 - xibar, xibar)
                }
                CustomLaw::Atoms { xibar, weights } => {
                    let i = pick(weights, rng);
                    (1.0 - xibar[i], xibar[i])
                }
            },
        }
    }

    pub fn sample_xibar<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_pair(rng).1
    }

    pub fn sample_xi<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_pair(rng).0
    }

    /// Draw a walk step `-log ξ̄`.
    pub fn sample_step<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.family {
            Family::Beta { b, c } => {
                // -log(Y/(X+Y)) = log1p(X/Y)
                let (x, y) = beta_gammas(*b, *c, rng);
                (x / y).ln_1p()
            }
            Family::LogPareto { alpha } => {
                let u: f64 = Open01.sample(rng);
                self.log_pareto_step(*alpha, u)
            }
            Family::Example27 => {
                let u: f64 = Open01.sample(rng);
                let w = u / (1.0 - u);
                -(-(-w).exp()).ln_1p()
            }
            Family::Custom(_) => -self.sample_xibar(rng).ln(),
        }
    }
}

fn beta_gammas<R: Rng + ?Sized>(b: f64, c: f64, rng: &mut R) -> (f64, f64) {
    let gx = Gamma::new(b, 1.0).expect("positive shape");
    let gy = Gamma::new(c, 1.0).expect("positive shape");
    loop {
        let x: f64 = gx.sample(rng);
        let y: f64 = gy.sample(rng);
        // Both vanish only for tiny shapes; redraw to keep ξ inside (0, 1).
        if x > 0.0 && y > 0.0 {
            return (x, y);
        }
    }
}

fn pick<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}
