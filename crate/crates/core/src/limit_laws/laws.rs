use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use super::mittag_leffler::{mittag_leffler_cdf, mittag_leffler_moment, sample_mittag_leffler};
use super::mixed_poisson::{mixed_poisson_gem_moment, mixed_poisson_gem_pmf, sample_mixed_poisson_gem};
use super::stable::{one_stable_cdf, sample_one_stable, sample_stable, stable_cdf};
use super::LimitError;
use crate::numeric::special::{beta_reg, normal_cdf};
use crate::numeric::ExtReal;

/// Limit distributions of the normalized functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LimitLaw {
    Normal01,
    /// Spectrally negative, characteristic exponent `-|t|^α Γ(1-α)(cos(πα/2) + i sin(πα/2) sgn t)`.
    Stable { alpha: f64 },
    /// Characteristic function `exp{-|t|(π/2 - i log|t| sgn t)}`.
    OneStable,
    MittagLeffler { alpha: f64 },
    MixedPoissonGem { theta: f64 },
    Beta { a: f64, b: f64 },
    Uniform01,
    PointMass(f64),
}

impl LimitLaw {
    /// Declared accuracy of [`LimitLaw::cdf`].
    pub fn tolerance(&self) -> f64 {
        match self {
            LimitLaw::Stable { .. } | LimitLaw::OneStable => 1e-6,
            LimitLaw::MittagLeffler { .. } | LimitLaw::MixedPoissonGem { .. } => 1e-9,
            _ => 1e-14,
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64, LimitError> {
        match *self {
            LimitLaw::Normal01 => Ok(normal_cdf(x)),
            LimitLaw::Stable { alpha } => stable_cdf(alpha, x),
            LimitLaw::OneStable => one_stable_cdf(x),
            LimitLaw::MittagLeffler { alpha } => mittag_leffler_cdf(alpha, x),
            LimitLaw::MixedPoissonGem { theta } => {
                if x < 0.0 {
                    return Ok(0.0);
                }
                let mut total = 0.0;
                for k in 0..=(x.floor() as u64) {
                    total += mixed_poisson_gem_pmf(theta, k)?;
                    if total >= 1.0 {
                        break;
                    }
                }
                Ok(total.min(1.0))
            }
            LimitLaw::Beta { a, b } => Ok(if x <= 0.0 {
                0.0
            } else if x >= 1.0 {
                1.0
            } else {
                beta_reg(a, b, x)
            }),
            LimitLaw::Uniform01 => Ok(x.clamp(0.0, 1.0)),
            LimitLaw::PointMass(p) => Ok(if x >= p { 1.0 } else { 0.0 }),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            LimitLaw::Normal01 => StandardNormal.sample(rng),
            LimitLaw::Stable { alpha } => sample_stable(alpha, rng),
            LimitLaw::OneStable => sample_one_stable(rng),
            LimitLaw::MittagLeffler { alpha } => sample_mittag_leffler(alpha, rng),
            LimitLaw::MixedPoissonGem { theta } => sample_mixed_poisson_gem(theta, rng) as f64,
            LimitLaw::Beta { a, b } => {
                let x: f64 = Gamma::new(a, 1.0).expect("positive shape").sample(rng);
                let y: f64 = Gamma::new(b, 1.0).expect("positive shape").sample(rng);
                x / (x + y)
            }
            LimitLaw::Uniform01 => rng.random(),
            LimitLaw::PointMass(p) => p,
        }
    }

    /// `E X^k`; `+∞` where the moment does not exist.
    pub fn moment(&self, k: u32) -> Result<ExtReal, LimitError> {
        if k == 0 {
            return Ok(ExtReal::Finite(1.0));
        }
        Ok(match *self {
            LimitLaw::Normal01 => ExtReal::Finite(if k % 2 == 1 {
                0.0
            } else {
                (1..k).step_by(2).map(f64::from).product()
            }),
            // Strictly stable with index above 1: centered, no variance.
            LimitLaw::Stable { alpha } => {
                if (k as f64) < alpha {
                    ExtReal::Finite(0.0)
                } else {
                    ExtReal::Infinite
                }
            }
            LimitLaw::OneStable => ExtReal::Infinite,
            LimitLaw::MittagLeffler { alpha } => mittag_leffler_moment(alpha, k),
            LimitLaw::MixedPoissonGem { theta } => ExtReal::Finite(mixed_poisson_gem_moment(theta, k)?),
            LimitLaw::Beta { a, b } => {
                ExtReal::Finite((0..k).map(|i| (a + i as f64) / (a + b + i as f64)).product())
            }
            LimitLaw::Uniform01 => ExtReal::Finite(1.0 / (k as f64 + 1.0)),
            LimitLaw::PointMass(p) => ExtReal::Finite(p.powi(k as i32)),
        })
    }
}

impl fmt::Display for LimitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitLaw::Normal01 => write!(f, "normal(0,1)"),
            LimitLaw::Stable { alpha } => write!(f, "stable(alpha={alpha},beta=-1)"),
            LimitLaw::OneStable => write!(f, "stable(alpha=1,beta=-1)"),
            LimitLaw::MittagLeffler { alpha } => write!(f, "mittag-leffler(alpha={alpha})"),
            LimitLaw::MixedPoissonGem { theta } => write!(f, "mixed-poisson(theta={theta})"),
            LimitLaw::Beta { a, b } => write!(f, "beta({a},{b})"),
            LimitLaw::Uniform01 => write!(f, "uniform(0,1)"),
            LimitLaw::PointMass(p) => write!(f, "point-mass({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_laws() {
        assert_eq!(LimitLaw::Normal01.cdf(0.0).unwrap(), 0.5);
        assert_eq!(LimitLaw::Normal01.moment(4).unwrap(), ExtReal::Finite(3.0));
        assert_eq!(LimitLaw::PointMass(0.0).cdf(-1e-9).unwrap(), 0.0);
        assert_eq!(LimitLaw::PointMass(0.0).cdf(0.0).unwrap(), 1.0);
        let b = LimitLaw::Beta { a: 0.5, b: 0.5 };
        // arcsine law
        let x: f64 = 0.3;
        let target = 2.0 / std::f64::consts::PI * x.sqrt().asin();
        assert!((b.cdf(x).unwrap() - target).abs() < 1e-12);
        assert_eq!(b.moment(1).unwrap(), ExtReal::Finite(0.5));
        assert_eq!(LimitLaw::Stable { alpha: 1.5 }.moment(2).unwrap(), ExtReal::Infinite);
    }

    #[test]
    fn cdf_grids_are_monotone() {
        let laws = [
            LimitLaw::Normal01,
            LimitLaw::MittagLeffler { alpha: 0.5 },
            LimitLaw::MixedPoissonGem { theta: 2.0 },
            LimitLaw::Beta { a: 0.5, b: 0.5 },
            LimitLaw::Uniform01,
        ];
        for law in laws {
            let vals: Vec<f64> = (-100..=600).map(|i| law.cdf(i as f64 * 0.1).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{law}");
            assert!(vals[0] < 1e-6 && *vals.last().unwrap() > 1.0 - 1e-6, "{law}");
        }
    }

    #[test]
    fn beta_sampler_mean() {
        let law = LimitLaw::Beta { a: 0.5, b: 0.5 };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 200_000;
        let mean = (0..n).map(|_| law.sample(&mut rng)).sum::<f64>() / n as f64;
        // sd of arcsine = 1/√8
        assert!((mean - 0.5).abs() < 4.0 / 8f64.sqrt() / (n as f64).sqrt());
    }
}
