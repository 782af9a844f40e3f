//! The scaled Mittag-Leffler law `θ_α`, with moments
//! `k! / (Γ(1-α)^k Γ(1 + kα))`.
//!
//! `θ_α` is the law of `S^{-α} / Γ(1-α)` for `S` positive stable with
//! Laplace transform `exp(-s^α)`. Kanter's representation
//! `S = (A(U)/W)^{(1-α)/α}`, `U ~ uniform(0, π)`, `W ~ exp(1)`, gives both
//! the sampler and the distribution function
//! `P{θ ≤ x} = 1 - π^{-1} ∫_0^π exp(-A(u) (xΓ(1-α))^{1/(1-α)}) du`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Uniform};

use super::LimitError;
use crate::numeric::special::{gamma, ln_gamma};
use crate::numeric::{ExtReal, Integrator};

fn check_alpha(alpha: f64) -> Result<(), LimitError> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(LimitError::InvalidParameter(format!("Mittag-Leffler index must lie in [0, 1), got {alpha}")))
    }
}

/// Kanter's function `sin(αu)^{α/(1-α)} sin((1-α)u) / sin(u)^{1/(1-α)}`.
fn kanter(alpha: f64, u: f64) -> f64 {
    let r = 1.0 - alpha;
    (alpha * u).sin().powf(alpha / r) * (r * u).sin() / u.sin().powf(1.0 / r)
}

pub fn mittag_leffler_cdf(alpha: f64, x: f64) -> Result<f64, LimitError> {
    check_alpha(alpha)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if alpha == 0.0 {
        return Ok(-(-x).exp_m1());
    }
    let y = (x * gamma(1.0 - alpha)).powf(1.0 / (1.0 - alpha));
    let q = Integrator::with_tolerances(1e-12, 1e-14)
        .panels(16)
        .integrate(|u| (-kanter(alpha, u) * y).exp(), 0.0, PI)?;
    Ok((1.0 - q.value / PI).clamp(0.0, 1.0))
}

pub fn sample_mittag_leffler<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = Uniform::new(0.0, PI).expect("finite range").sample(rng);
    let w: f64 = Exp1.sample(rng);
    (w / kanter(alpha, u)).powf(1.0 - alpha) / gamma(1.0 - alpha)
}

pub fn mittag_leffler_moment(alpha: f64, k: u32) -> ExtReal {
    let kf = k as f64;
    ExtReal::Finite((ln_gamma(kf + 1.0) - kf * ln_gamma(1.0 - alpha) - ln_gamma(1.0 + kf * alpha)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::erf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponential_at_zero_index() {
        for k in 1..=5 {
            let fact: f64 = (1..=k).map(f64::from).product();
            assert!((mittag_leffler_moment(0.0, k).to_f64() - fact).abs() < 1e-9 * fact);
        }
        assert!((mittag_leffler_cdf(0.0, 1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn half_index_is_half_normal() {
        // θ_{1/2} = |N(0, 2/π)|
        let sigma = (2.0 / PI).sqrt();
        for x in [0.1, 0.5, 1.0, 2.0] {
            let target = erf(x / (sigma * std::f64::consts::SQRT_2));
            assert!((mittag_leffler_cdf(0.5, x).unwrap() - target).abs() < 1e-9, "x = {x}");
        }
        assert!((mittag_leffler_moment(0.5, 1).to_f64() - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn sampler_moments_within_four_se() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in [0.3, 0.5, 0.8] {
            let n = 400_000;
            let xs: Vec<f64> = (0..n).map(|_| sample_mittag_leffler(alpha, &mut rng)).collect();
            for k in 1..=4 {
                let vals: Vec<f64> = xs.iter().map(|x| x.powi(k)).collect();
                let mean = vals.iter().sum::<f64>() / n as f64;
                let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                let se = (var / n as f64).sqrt();
                let target = mittag_leffler_moment(alpha, k as u32).to_f64();
                assert!((mean - target).abs() < 4.0 * se, "α = {alpha}, k = {k}: {mean} vs {target}");
            }
        }
    }
}
