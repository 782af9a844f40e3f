//! Mixed Poisson law with intensity `θ|log ξ|`, `ξ ~ beta(1, θ)`: the limit
//! of the number of empty boxes for GEM(θ).

use rand::Rng;
use rand_distr::{Distribution, Open01, Poisson};

use super::LimitError;
use crate::numeric::special::ln_gamma;
use crate::numeric::Integrator;

fn check_theta(theta: f64) -> Result<(), LimitError> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(LimitError::InvalidParameter(format!("theta must be positive, got {theta}")))
    }
}

/// `E f(λ)` for `λ = -θ log(1 - V)`, `V = ξ̄ ~ beta(θ, 1)`.
///
/// Integrates over `v` with density `θ v^{θ-1}` when `θ ≥ 1`, and over
/// `w = v^θ` when `θ < 1`, keeping the integrand bounded at the origin.
fn expect_over_intensity<F: Fn(f64) -> f64>(theta: f64, f: F) -> Result<f64, LimitError> {
    let integ = Integrator::with_tolerances(1e-13, 1e-16).panels(16);
    let q = if theta >= 1.0 {
        integ.integrate(
            |v| theta * v.powf(theta - 1.0) * f(-theta * (-v).ln_1p()),
            0.0,
            1.0,
        )?
    } else {
        integ.integrate(|w| f(-theta * (-w.powf(1.0 / theta)).ln_1p()), 0.0, 1.0)?
    };
    Ok(q.value)
}

/// `P{K = k} = E[e^{-λ} λ^k / k!]`.
///
/// For `k ≥ 1` the integral runs over `λ` itself, with density
/// `(1 - e^{-λ/θ})^{θ-1} e^{-λ/θ}`, cut around the peak of
/// `λ^k e^{-λ(1+1/θ)}` so narrow peaks at large `k` are resolved.
pub fn mixed_poisson_gem_pmf(theta: f64, k: u64) -> Result<f64, LimitError> {
    check_theta(theta)?;
    if k == 0 {
        return expect_over_intensity(theta, |lam| (-lam).exp());
    }
    let kf = k as f64;
    let lk = ln_gamma(kf + 1.0);
    let f = |lam: f64| {
        if lam <= 0.0 {
            return 0.0;
        }
        let r = lam / theta;
        ((theta - 1.0) * (-(-r).exp_m1()).ln() - r - lam + kf * lam.ln() - lk).exp()
    };
    let peak = kf * theta / (theta + 1.0);
    let width = kf.sqrt() * theta / (theta + 1.0);
    let mut cuts = vec![0.0];
    for z in [-12.0, -4.0, 0.0, 4.0, 12.0] {
        let c = peak + z * width;
        if c > 0.0 {
            cuts.push(c);
        }
    }
    let integ = Integrator::with_tolerances(1e-13, 1e-18).panels(4);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integ.integrate(f, w[0], w[1])?.value;
    }
    total += integ.integrate_to_infinity(f, *cuts.last().expect("nonempty"))?.value;
    Ok(total)
}

/// `E s^K = Γ(1+θ) Γ(1+θ-θs) / Γ(1+2θ-θs)`.
pub fn mixed_poisson_gem_pgf(theta: f64, s: f64) -> Result<f64, LimitError> {
    check_theta(theta)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(LimitError::InvalidParameter(format!("s must lie in [0, 1], got {s}")));
    }
    let ts = theta * s;
    Ok((ln_gamma(1.0 + theta) + ln_gamma(1.0 + theta - ts) - ln_gamma(1.0 + 2.0 * theta - ts)).exp())
}

/// `E K^k = Σ_j S(k, j) E λ^j`, with Stirling numbers of the second kind.
pub fn mixed_poisson_gem_moment(theta: f64, k: u32) -> Result<f64, LimitError> {
    check_theta(theta)?;
    let k = k as usize;
    let mut stirling = vec![vec![0.0f64; k + 1]; k + 1];
    stirling[0][0] = 1.0;
    for n in 1..=k {
        for j in 1..=n {
            stirling[n][j] = j as f64 * stirling[n - 1][j] + stirling[n - 1][j - 1];
        }
    }
    let mut total = if k == 0 { 1.0 } else { 0.0 };
    for (j, &s) in stirling[k].iter().enumerate().skip(1) {
        total += s * expect_over_intensity(theta, |lam| lam.powi(j as i32))?;
    }
    Ok(total)
}

pub fn sample_mixed_poisson_gem<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> u64 {
    let u: f64 = Open01.sample(rng);
    let lam = -theta * (-u.powf(1.0 / theta)).ln_1p();
    if lam <= 0.0 {
        return 0;
    }
    Poisson::new(lam).expect("positive finite intensity").sample(rng) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::digamma;

    #[test]
    fn theta_one_is_geometric_half() {
        for k in 0..20 {
            let p = mixed_poisson_gem_pmf(1.0, k).unwrap();
            assert!((p - 0.5f64.powi(k as i32 + 1)).abs() < 1e-12, "k = {k}");
        }
        for s in [0.0, 0.3, 0.9] {
            assert!((mixed_poisson_gem_pgf(1.0, s).unwrap() - 1.0 / (2.0 - s)).abs() < 1e-14);
        }
    }

    #[test]
    fn pmf_and_pgf_reconcile() {
        for theta in [0.4, 2.0, 5.0] {
            let probs: Vec<f64> = (0..400).map(|k| mixed_poisson_gem_pmf(theta, k).unwrap()).collect();
            for s in [0.0f64, 0.25, 0.5, 0.75, 1.0] {
                let series: f64 = probs.iter().enumerate().map(|(k, p)| p * s.powi(k as i32)).sum();
                let closed = mixed_poisson_gem_pgf(theta, s).unwrap();
                assert!((series - closed).abs() < 1e-8, "θ = {theta}, s = {s}: {series} vs {closed}");
            }
        }
        assert!((mixed_poisson_gem_pgf(3.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mean_is_nu_over_mu() {
        // For beta(1, θ): ν = Ψ(1+θ) - Ψ(1), μ = 1/θ.
        let theta = 2.0;
        let target = theta * (digamma(1.0 + theta) - digamma(1.0));
        assert!((mixed_poisson_gem_moment(theta, 1).unwrap() - target).abs() < 1e-10);
    }
}
