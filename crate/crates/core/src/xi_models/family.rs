//! Distribution functions of the walk step `s = -log ξ̄` and of `h = -log ξ`.

use super::{CustomLaw, Family, XiModel};
use crate::numeric::special::beta_reg;
use statrs::function::beta::inv_beta_reg;

/// `w(t) = -log(1 - e^{-t})`, decreasing from `+∞` at `0` to `0` at `∞`.
fn w_of(t: f64) -> f64 {
    -(-(-t).exp()).ln_1p()
}

impl XiModel {
    /// `P{-log ξ̄ > t}` for `t ≥ 0`. `None` for custom laws.
    pub fn step_survival(&self, t: f64) -> Option<f64> {
        let t = t.max(0.0);
        Some(match &self.family {
            Family::Beta { b, c } => beta_reg(*c, *b, (-t).exp()),
            Family::LogPareto { alpha } => (-alpha * t.ln_1p()).exp(),
            Family::Example27 => {
                let w = w_of(t);
                if w.is_infinite() {
                    1.0
                } else {
                    w / (1.0 + w)
                }
            }
            Family::Custom(_) => return None,
        })
    }

    /// `P{-log ξ̄ ≤ t}`, computed without cancellation for small `t`.
    pub fn step_cdf(&self, t: f64) -> Option<f64> {
        let t = t.max(0.0);
        Some(match &self.family {
            Family::Beta { b, c } => beta_reg(*b, *c, -(-t).exp_m1()),
            Family::LogPareto { alpha } => -(-alpha * t.ln_1p()).exp_m1(),
            Family::Example27 => 1.0 / (1.0 + w_of(t)),
            Family::Custom(_) => return None,
        })
    }

    /// `P{-log ξ > t}` for `t ≥ 0`.
    pub fn companion_survival(&self, t: f64) -> Option<f64> {
        let t = t.max(0.0);
        Some(match &self.family {
            Family::Beta { b, c } => beta_reg(*b, *c, (-t).exp()),
            Family::LogPareto { alpha } => -(-alpha * w_of(t).ln_1p()).exp_m1(),
            Family::Example27 => 1.0 / (1.0 + t),
            Family::Custom(_) => return None,
        })
    }

    /// `P{-log ξ ≤ t}`.
    pub fn companion_cdf(&self, t: f64) -> Option<f64> {
        let t = t.max(0.0);
        Some(match &self.family {
            Family::Beta { b, c } => beta_reg(*c, *b, -(-t).exp_m1()),
            Family::LogPareto { alpha } => (-alpha * w_of(t).ln_1p()).exp(),
            Family::Example27 => t / (1.0 + t),
            Family::Custom(_) => return None,
        })
    }

    /// Distribution function `P{ξ̄ ≤ x}`.
    pub fn xibar_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match &self.family {
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Atoms { xibar, weights } => xibar
                    .iter()
                    .zip(weights)
                    .filter(|(a, _)| **a <= x)
                    .map(|(_, w)| w)
                    .sum(),
                CustomLaw::Quantile(q) => {
                    // Invert the quantile: largest u with Q(u) ≤ x.
                    let (mut lo, mut hi) = (0.0, 1.0);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if q(mid) <= x {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    lo
                }
            },
            // ξ̄ ≤ x  ⇔  s ≥ -log x
            _ => self.step_survival(-x.ln()).expect("built-in family"),
        }
    }

    /// Quantile `u ↦ ξ̄` of the `ξ̄` law, `u ∈ (0, 1)`. `None` for atoms.
    pub fn xibar_quantile(&self, u: f64) -> Option<f64> {
        match &self.family {
            Family::Beta { b, c } => Some(if *b == 1.0 {
                u.powf(1.0 / c)
            } else if *c == 1.0 {
                -((-u).ln_1p() / b).exp_m1()
            } else {
                inv_beta_reg(*c, *b, u)
            }),
            Family::LogPareto { alpha } => Some((-self.log_pareto_step(*alpha, u)).exp()),
            Family::Example27 => Some(-(-u / (1.0 - u)).exp_m1()),
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Quantile(q) => Some(q(u)),
                CustomLaw::Atoms { .. } => None,
            },
        }
    }

    /// `(log ξ, log ξ̄)` at uniform level `u` of the `ξ̄` quantile, computed
    /// without forming `1 - ξ̄`. `None` for Beta (exact routes exist) and atoms.
    pub(crate) fn log_pair_at(&self, u: f64) -> Option<(f64, f64)> {
        match &self.family {
            Family::LogPareto { alpha } => {
                let s = self.log_pareto_step(*alpha, u);
                Some(((-(-s).exp_m1()).ln(), -s))
            }
            Family::Example27 => {
                let w = u / (1.0 - u);
                Some((-w, (-(-w).exp_m1()).ln()))
            }
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Quantile(q) => {
                    let x = q(u);
                    Some(((-x).ln_1p(), x.ln()))
                }
                CustomLaw::Atoms { .. } => None,
            },
            Family::Beta { .. } => None,
        }
    }

    /// Step `s = U^{-1/α} - 1` of the log-Pareto walk at uniform level `u`.
    pub(crate) fn log_pareto_step(&self, alpha: f64, u: f64) -> f64 {
        (-u.ln() / alpha).exp_m1()
    }

    /// Example27 quantile by bisection on the distribution function. The
    /// sampler uses the closed-form inverse; this route exists to check it.
    pub fn example27_quantile_by_bisection(u: f64) -> f64 {
        let cdf = |x: f64| {
            let w = -(-x).ln_1p();
            w / (1.0 + w)
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_pareto_one_matches_its_defining_cdf() {
        let m = XiModel::log_pareto(1.0).unwrap();
        for &x in &[1e-6, 0.01, 0.179, 0.5, 0.9] {
            let expected = 1.0 / (1.0 - f64::ln(x));
            assert!((m.xibar_cdf(x) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn log_pareto_quantile_at_inverse_e() {
        let m = XiModel::log_pareto(1.0).unwrap();
        let q = m.xibar_quantile((-1.0f64).exp()).unwrap();
        let expected = (1.0 - std::f64::consts::E).exp();
        assert!((q - expected).abs() < 1e-14);
        assert!((q - 0.179).abs() < 1e-3);
        // Numeric inversion of the distribution function agrees.
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if m.xibar_cdf(mid) < (-1.0f64).exp() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - q).abs() < 1e-12);
    }

    #[test]
    fn uniform_quantile_is_identity() {
        let m = XiModel::beta(1.0, 1.0).unwrap();
        assert_eq!(m.xibar_quantile(0.25), Some(0.25));
    }

    #[test]
    fn example27_closed_form_quantile_matches_bisection() {
        let m = XiModel::example27();
        for &u in &[1e-6, 0.1, 0.37, 0.5, 0.8, 0.999] {
            let closed = m.xibar_quantile(u).unwrap();
            let bisect = XiModel::example27_quantile_by_bisection(u);
            assert!((closed - bisect).abs() < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn step_and_companion_laws_are_complementary() {
        for m in [
            XiModel::beta(2.0, 3.0).unwrap(),
            XiModel::log_pareto(0.5).unwrap(),
            XiModel::example27(),
        ] {
            for &t in &[1e-4, 0.3, 1.0, 5.0, 30.0] {
                let s = m.step_survival(t).unwrap() + m.step_cdf(t).unwrap();
                let h = m.companion_survival(t).unwrap() + m.companion_cdf(t).unwrap();
                assert!((s - 1.0).abs() < 1e-12 && (h - 1.0).abs() < 1e-12, "{m} t={t}");
            }
        }
    }

    #[test]
    fn beta_quantiles_invert_the_cdf() {
        for (b, c) in [(1.0, 2.5), (2.0, 1.0), (2.0, 3.0)] {
            let m = XiModel::beta(b, c).unwrap();
            for &u in &[0.05, 0.5, 0.93] {
                let x = m.xibar_quantile(u).unwrap();
                assert!((m.xibar_cdf(x) - u).abs() < 1e-10, "beta({b},{c}) u={u}");
            }
        }
    }
}
