//! Which limit each functional has, and the discrete limit of the last
//! occupied box.

use std::fmt;
use std::str::FromStr;

use super::schedule::{normalization, NormalizationSchedule};
use super::{LimitError, LimitLaw};
use crate::numeric::{ExtReal, Integrator};
use crate::xi_models::{CustomLaw, Family, LimitCase, XiModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    Kstar,
    K,
    KminusK1,
    W,
    Z,
    K0,
    /// Renewal count `N_{log n}`.
    NLogN,
}

impl Functional {
    pub const ALL: [Functional; 7] = [
        Functional::Kstar,
        Functional::K,
        Functional::KminusK1,
        Functional::W,
        Functional::Z,
        Functional::K0,
        Functional::NLogN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functional::Kstar => "kstar",
            Functional::K => "k",
            Functional::KminusK1 => "k-minus-k1",
            Functional::W => "w",
            Functional::Z => "z",
            Functional::K0 => "k0",
            Functional::NLogN => "nlogn",
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = LimitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Functional::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Functional::ALL.iter().map(|f| f.name()).collect();
                LimitError::InvalidParameter(format!("unknown functional {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Transformation of `Z_n` that has a nondegenerate limit when `μ = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZScale {
    /// `log Z_n / log n`.
    LogRatio,
    /// `m(log Z_n) / m(log n)` with the truncated mean `m`.
    TruncatedMeanRatio,
}

#[derive(Debug, Clone)]
pub enum LimitOutcome {
    /// `(X_n - b_n)/a_n → law`.
    Normalized(NormalizationSchedule),
    /// Converges without normalization to a law given by series
    /// (the empty-box count) or in closed form (the GEM mixed Poisson).
    Unnormalized { law: Option<LimitLaw>, description: String },
    /// `Z_n → Z` with `P{Z = k} = Eξ^k / (μk)`.
    ZDiscrete,
    /// A scaled version of `Z_n` converges to `law`.
    ZScaled { scale: ZScale, law: LimitLaw },
    /// Degenerate limit at a point.
    PointMass(f64),
    /// The functional diverges.
    Divergent(String),
}

impl LimitOutcome {
    pub fn describe(&self, n_grid: &[f64]) -> String {
        match self {
            LimitOutcome::Normalized(s) => s.describe(n_grid),
            LimitOutcome::Unnormalized { law, description } => match law {
                Some(l) => format!("normalization = none\nlaw = {l}\nnote = {description}\n"),
                None => format!("normalization = none\nlaw = series\nnote = {description}\n"),
            },
            LimitOutcome::ZDiscrete => "normalization = none\nlaw = P{Z = k} = E xi^k / (mu k)\n".into(),
            LimitOutcome::ZScaled { scale, law } => {
                let s = match scale {
                    ZScale::LogRatio => "log Z_n / log n",
                    ZScale::TruncatedMeanRatio => "m(log Z_n) / m(log n)",
                };
                format!("normalization = {s}\nlaw = {law}\n")
            }
            LimitOutcome::PointMass(p) => format!("normalization = none\nlaw = point-mass({p})\n"),
            LimitOutcome::Divergent(why) => format!("normalization = none\nlaw = divergent\nnote = {why}\n"),
        }
    }
}

/// Limit of a functional of the occupancy of `n` balls.
pub fn limit_for(model: &XiModel, functional: Functional) -> Result<LimitOutcome, LimitError> {
    let mu = model.mu()?;
    let nu = model.nu()?;
    match functional {
        Functional::Kstar | Functional::NLogN => Ok(LimitOutcome::Normalized(normalization(model)?)),
        Functional::K | Functional::KminusK1 | Functional::W => {
            if !nu.is_finite() {
                return Err(LimitError::Inapplicable(format!(
                    "E(-log ξ) = ∞ for {model}: the limit of {functional} is not inherited from K_n*"
                )));
            }
            Ok(LimitOutcome::Normalized(normalization(model)?))
        }
        Functional::K0 => Ok(match (mu, nu) {
            (ExtReal::Infinite, _) => LimitOutcome::PointMass(0.0),
            (ExtReal::Finite(_), ExtReal::Infinite) => {
                LimitOutcome::Divergent("E(-log ξ) = ∞ with a finite mean step: E K_{n,0} → ∞".into())
            }
            (ExtReal::Finite(mu), ExtReal::Finite(nu)) => LimitOutcome::Unnormalized {
                law: model.gem_theta().map(|theta| LimitLaw::MixedPoissonGem { theta }),
                description: format!("mean nu/mu = {}", nu / mu),
            },
        }),
        Functional::Z => {
            if mu.is_finite() {
                return Ok(LimitOutcome::ZDiscrete);
            }
            let cls = model.classify_case();
            match (cls.case, cls.alpha) {
                (LimitCase::E, Some(0.0)) => Ok(LimitOutcome::PointMass(1.0)),
                (LimitCase::E, Some(a)) => Ok(LimitOutcome::ZScaled {
                    scale: ZScale::LogRatio,
                    law: LimitLaw::Beta { a: 1.0 - a, b: a },
                }),
                (LimitCase::D, _) => Ok(LimitOutcome::ZScaled {
                    scale: ZScale::TruncatedMeanRatio,
                    law: LimitLaw::Uniform01,
                }),
                _ => Err(LimitError::Unsupported(format!("no limit of Z_n known for {model}"))),
            }
        }
    }
}

/// `P{Z = k} = Eξ^k / (μk)`.
pub fn z_limit_pmf(model: &XiModel, k: usize) -> Result<f64, LimitError> {
    if k == 0 {
        return Ok(0.0);
    }
    let mu = model.mu()?.finite().ok_or_else(|| {
        LimitError::Inapplicable("μ = ∞: Z_n has no discrete limit; use the scaled limits of log Z_n".into())
    })?;
    Ok(model.xi_moment(k)? / (mu * k as f64))
}

/// `1 - Σ_{k ≤ k_max} P{Z = k} = (μ - Σ_{k ≤ k_max} Eξ^k / k) / μ`.
pub fn z_limit_remainder(model: &XiModel, k_max: usize) -> Result<f64, LimitError> {
    let mut total = 0.0;
    for k in 1..=k_max {
        total += z_limit_pmf(model, k)?;
    }
    Ok((1.0 - total).max(0.0))
}

/// `m(x) = ∫_0^x P{-log ξ̄ > y} dy`.
///
/// Quantile-defined custom laws see steps only through `ξ̄ = e^{-s}`, so
/// steps beyond about 745 are indistinguishable from `+∞` there.
pub fn truncated_mean(model: &XiModel, x: f64) -> Result<f64, LimitError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    match model.family() {
        Family::LogPareto { alpha } if *alpha == 1.0 => Ok(x.ln_1p()),
        Family::LogPareto { alpha } => Ok((1.0 - (1.0 + x).powf(1.0 - alpha)) / (alpha - 1.0)),
        Family::Custom(spec) => match &spec.law {
            CustomLaw::Atoms { xibar, weights } => {
                Ok(xibar.iter().zip(weights).map(|(a, w)| w * (-a.ln()).min(x)).sum())
            }
            CustomLaw::Quantile(q) => {
                // E min(s, x) over s = -log q(u), decreasing in u; split at
                // the u* where s = x and integrate the rest in v = -log u.
                // Compared through the step: q underflows long before s = x.
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if -q(mid).ln() > x {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let u_star = 0.5 * (lo + hi);
                let rest = Integrator::with_tolerances(1e-11, 1e-15).panels(16).integrate(
                    |v| {
                        let u = (-v).exp();
                        (-q(u).ln()).min(x) * u
                    },
                    0.0,
                    -u_star.ln(),
                )?;
                Ok(x * u_star + rest.value)
            }
        },
        _ => {
            let q = Integrator::with_tolerances(1e-11, 1e-15)
                .panels(16)
                .integrate(|y| model.step_survival(y).expect("built-in family"), 0.0, x)?;
            Ok(q.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_z_limit() {
        let m = XiModel::beta(1.0, 1.0).unwrap();
        for k in 1..50 {
            let target = 1.0 / (k as f64 * (k as f64 + 1.0));
            assert!((z_limit_pmf(&m, k).unwrap() - target).abs() < 1e-14);
        }
        assert!((z_limit_remainder(&m, 999).unwrap() - 1e-3).abs() < 1e-10);
    }

    #[test]
    fn beta_z_limit_closed_form() {
        use crate::numeric::special::ln_gamma;
        // ξ ~ beta(b, c) = beta(2, 3)
        let (b, c) = (2.0, 3.0);
        let m = XiModel::beta(b, c).unwrap();
        let mu = m.mu().unwrap().to_f64();
        for k in 1..30 {
            let kf = k as f64;
            let target = (ln_gamma(c + b) - ln_gamma(b) + ln_gamma(kf + b) - ln_gamma(kf + b + c)).exp() / (mu * kf);
            assert!((z_limit_pmf(&m, k).unwrap() - target).abs() < 1e-13);
        }
        assert!(z_limit_remainder(&m, 4000).unwrap() < 1e-6);
        assert!(z_limit_pmf(&XiModel::log_pareto(0.5).unwrap(), 1).is_err());
    }

    #[test]
    fn functional_outcomes() {
        let beta = XiModel::beta(2.0, 3.0).unwrap();
        match limit_for(&beta, Functional::W).unwrap() {
            LimitOutcome::Normalized(s) => assert_eq!(s.law, LimitLaw::Normal01),
            other => panic!("{other:?}"),
        }
        let lp1 = XiModel::log_pareto(1.0).unwrap();
        assert!(matches!(limit_for(&lp1, Functional::K0).unwrap(), LimitOutcome::PointMass(p) if p == 0.0));
        assert!(matches!(
            limit_for(&XiModel::example27(), Functional::W),
            Err(LimitError::Inapplicable(_))
        ));
        assert!(matches!(
            limit_for(&XiModel::example27(), Functional::K0).unwrap(),
            LimitOutcome::Divergent(_)
        ));
        let gem = XiModel::gem(2.0).unwrap();
        match limit_for(&gem, Functional::K0).unwrap() {
            LimitOutcome::Unnormalized { law, .. } => assert_eq!(law, Some(LimitLaw::MixedPoissonGem { theta: 2.0 })),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            limit_for(&XiModel::log_pareto(0.5).unwrap(), Functional::Z).unwrap(),
            LimitOutcome::ZScaled { scale: ZScale::LogRatio, law: LimitLaw::Beta { .. } }
        ));
        assert!(matches!(
            limit_for(&lp1, Functional::Z).unwrap(),
            LimitOutcome::ZScaled { scale: ZScale::TruncatedMeanRatio, law: LimitLaw::Uniform01 }
        ));
        assert_eq!("k-minus-k1".parse::<Functional>().unwrap(), Functional::KminusK1);
    }

    #[test]
    fn truncated_mean_matches_quadrature() {
        let m = XiModel::log_pareto(2.5).unwrap();
        let x = 7.0;
        let q = Integrator::default()
            .integrate(|y| (1.0f64 + y).powf(-2.5), 0.0, x)
            .unwrap()
            .value;
        assert!((truncated_mean(&m, x).unwrap() - q).abs() < 1e-12);
        let b = XiModel::beta(1.0, 1.0).unwrap();
        // uniform: P{s > y} = e^{-y}
        assert!((truncated_mean(&b, 2.0).unwrap() - (1.0 - (-2.0f64).exp())).abs() < 1e-10);
    }
}
