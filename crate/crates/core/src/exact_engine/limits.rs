//! Limit laws of `K_{n,0}` and `K_{n,0} + K_{n,1}` as series over finite-`j` laws.

use super::recursions::{k0_levels, y_levels};
use super::{DecrementRows, ExactError, Pmf};
use crate::numeric::ExtReal;
use crate::xi_models::XiModel;

/// A truncated series value; the neglected terms sum to at most `remainder`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailValue {
    pub value: f64,
    pub remainder: f64,
}

/// `tails[i - 1] = P{X ≥ i}` for `i = 1..=i_max`, each series cut at `j_max`.
/// Every entry lies in `[tails[i-1], tails[i-1] + remainder]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTails {
    pub tails: Vec<f64>,
    pub remainder: f64,
    pub j_max: usize,
}

impl LimitTails {
    pub fn tail(&self, i: usize) -> TailValue {
        assert!(i >= 1, "tails start at i = 1");
        TailValue {
            value: self.tails.get(i - 1).copied().unwrap_or(0.0),
            remainder: self.remainder,
        }
    }

    /// `Σ_{i ≤ i_max} P{X ≥ i}`, the mean up to the level cutoff.
    pub fn mean(&self) -> f64 {
        self.tails.iter().sum()
    }

    /// Point probabilities implied by the tails; the mass beyond `i_max`
    /// becomes the deficit.
    pub fn pmf(&self) -> Pmf {
        let mut probs = Vec::with_capacity(self.tails.len());
        let mut prev = 1.0;
        for &t in &self.tails {
            probs.push((prev - t).max(0.0));
            prev = t;
        }
        Pmf::from_probs(0, probs)
    }

    fn degenerate(i_max: usize, j_max: usize) -> Self {
        LimitTails {
            tails: vec![0.0; i_max],
            remainder: 0.0,
            j_max,
        }
    }
}

/// `P{K_{∞,0} ≥ i} = μ^{-1} Σ_{j≥1} (Eξ̄^j / j) P{K_{j,0} = i-1}` for `i ≤ i_max`.
///
/// With `μ = ∞` the limit is `0` almost surely. Requires `ν < ∞`.
pub fn k0_limit_tails(model: &XiModel, j_max: usize, i_max: usize) -> Result<LimitTails, ExactError> {
    let Some((mu, nu)) = finite_moments(model)? else {
        return Ok(LimitTails::degenerate(i_max, j_max));
    };
    let j_max = j_max.max(1);
    let xibar = model.moments(j_max)?.xibar;
    let rows = DecrementRows::new(model, j_max)?;
    let lev = k0_levels(&rows, j_max, i_max.saturating_sub(1));
    let weights: Vec<f64> = (1..=j_max).map(|j| xibar[j] / j as f64).collect();
    let tails = (1..=i_max)
        .map(|i| weights.iter().enumerate().map(|(t, w)| w * lev[i - 1][t + 1]).sum::<f64>() / mu)
        .collect();
    let partial: f64 = weights.iter().sum();
    Ok(LimitTails {
        tails,
        remainder: ((nu - partial) / mu).max(0.0),
        j_max,
    })
}

pub fn k0_limit_tail(model: &XiModel, i: usize, j_max: usize) -> Result<TailValue, ExactError> {
    Ok(k0_limit_tails(model, j_max, i)?.tail(i))
}

/// `P{K_01 ≥ i}` for the limit of `K_{n,0} + K_{n,1}`:
/// `μ^{-1}(Eξ + Σ_{j≥2} w_j P{Y_j = 0})` at `i = 1` and
/// `μ^{-1}((Eξ̄)^(i-2) Eξ (1 - Eξ²) + Σ_{j≥2} w_j P{Y_j = i-1})` beyond,
/// with `w_j = Eξ̄^j / j + E[ξ̄^j ξ]`.
pub fn k01_limit_tails(model: &XiModel, j_max: usize, i_max: usize) -> Result<LimitTails, ExactError> {
    let Some((mu, nu)) = finite_moments(model)? else {
        return Ok(LimitTails::degenerate(i_max, j_max));
    };
    let j_max = j_max.max(2);
    let table = model.moments(j_max + 1)?;
    let (xi, xibar) = (&table.xi, &table.xibar);
    let rows = DecrementRows::new(model, j_max)?;
    let lev = y_levels(&rows, j_max, i_max.saturating_sub(1));
    let weights: Vec<f64> = (2..=j_max)
        .map(|j| xibar[j] / j as f64 + xibar[j] - xibar[j + 1])
        .collect();
    let series = |i: usize| -> f64 {
        weights.iter().enumerate().map(|(t, w)| w * lev[i - 1][t + 2]).sum()
    };
    let tails = (1..=i_max)
        .map(|i| {
            let head = if i == 1 {
                xi[1]
            } else {
                xibar[1].powi(i as i32 - 2) * xi[1] * (1.0 - xi[2])
            };
            (head + series(i)) / mu
        })
        .collect();
    let partial: f64 = (1..=j_max).map(|j| xibar[j] / j as f64).sum();
    Ok(LimitTails {
        tails,
        remainder: (((nu - partial).max(0.0) + xibar[j_max + 1]) / mu).max(0.0),
        j_max,
    })
}

pub fn k01_limit_tail(model: &XiModel, i: usize, j_max: usize) -> Result<TailValue, ExactError> {
    Ok(k01_limit_tails(model, j_max, i)?.tail(i))
}

/// `Some((μ, ν))` when both are finite, `None` when `μ = ∞`.
fn finite_moments(model: &XiModel) -> Result<Option<(f64, f64)>, ExactError> {
    let ExtReal::Finite(mu) = model.mu()? else {
        return Ok(None);
    };
    match model.nu()? {
        ExtReal::Finite(nu) => Ok(Some((mu, nu))),
        ExtReal::Infinite => Err(ExactError::Unsupported(
            "the limit requires E(-log ξ) < ∞".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_k0_limit_is_geometric_half() {
        let m = XiModel::beta(1.0, 1.0).unwrap();
        let t = k0_limit_tails(&m, 2000, 40).unwrap();
        for i in 1..=10 {
            let tv = t.tail(i);
            let target = 0.5f64.powi(i as i32);
            assert!(tv.value <= target + 1e-12 && target <= tv.value + tv.remainder + 1e-12, "i = {i}");
        }
        assert!((t.remainder - 1.0 / 2001.0).abs() < 1e-9);
        assert!((t.mean() + t.remainder - 1.0).abs() < 1e-8);
    }

    #[test]
    fn uniform_k01_mean() {
        let m = XiModel::beta(1.0, 1.0).unwrap();
        let t = k01_limit_tails(&m, 1000, 60).unwrap();
        assert!((t.mean() - 2.0).abs() <= t.remainder + 1e-8, "{} ± {}", t.mean(), t.remainder);
        assert!(t.tails.windows(2).all(|w| w[1] <= w[0]));
        assert!(t.tail(1).value >= 0.5);
    }

    #[test]
    fn infinite_mu_gives_zero() {
        let m = XiModel::log_pareto(1.0).unwrap();
        assert_eq!(k0_limit_tail(&m, 1, 100).unwrap().value, 0.0);
        assert_eq!(k01_limit_tail(&m, 1, 100).unwrap().value, 0.0);
    }

    #[test]
    fn infinite_nu_is_rejected() {
        assert!(k0_limit_tail(&XiModel::example27(), 1, 10).is_err());
    }
}
