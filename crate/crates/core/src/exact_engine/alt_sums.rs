//! `E K_{n,0}` through its alternating binomial representation.

use super::ExactError;
use crate::numeric::hp::{alternating_sum, binomial_row, hp, HpError, HpFloat, MAX_BITS};
use crate::xi_models::XiModel;

/// `E K_{n,0} = Σ_{k=1}^n (-1)^(k+1) C(n,k) (1 - Eξ^k) / (1 - Eξ̄^k)`.
///
/// Starts at `max(256, 4n)` bits. Families without exact high-precision
/// moments fail if the propagated moment error could exceed `1e-9`.
pub fn e_k0_alt_sum(model: &XiModel, n: usize) -> Result<f64, ExactError> {
    e_k0_alt_sum_from(model, n, (4 * n).clamp(256, MAX_BITS))
}

/// [`e_k0_alt_sum`] starting the precision escalation at `start` bits.
pub fn e_k0_alt_sum_from(model: &XiModel, n: usize, start: usize) -> Result<f64, ExactError> {
    if n == 0 {
        return Ok(0.0);
    }
    let table = model.moments(n)?;
    let sum = alternating_sum(start, |bits| {
        let c = binomial_row(n, bits);
        let (xi, xibar): (Vec<HpFloat>, Vec<HpFloat>) = match model.power_moments_hp(n, bits) {
            Some(pair) => pair,
            None => (
                table.xi[..=n].iter().map(|&x| hp(x, bits)).collect(),
                table.xibar[..=n].iter().map(|&x| hp(x, bits)).collect(),
            ),
        };
        let one = hp(1.0, bits);
        (1..=n)
            .map(|k| {
                let t = &c[k] * (&one - &xi[k]) / (&one - &xibar[k]);
                if k % 2 == 1 {
                    t
                } else {
                    -t
                }
            })
            .collect()
    })?;
    if !model.has_exact_moments() {
        // Relative perturbation of each ratio is at most tol·(1/(1-Eξ) + 1/(1-Eξ̄)).
        let tol = model.moment_tolerance();
        let amp = 1.0 / (1.0 - table.xi[1]) + 1.0 / (1.0 - table.xibar[1]);
        let bound = sum.abs_sum * tol * amp;
        if bound > 1e-9 {
            return Err(HpError::InputPrecision {
                input_error: tol,
                bound,
                limit: 1e-9,
            }
            .into());
        }
    }
    Ok(sum.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_engine::e_k0_dp;

    #[test]
    fn uniform_mean_is_one() {
        let m = XiModel::beta(1.0, 1.0).unwrap();
        for n in [1, 2, 5, 50, 100, 200] {
            assert!((e_k0_alt_sum(&m, n).unwrap() - 1.0).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn agrees_with_visit_route() {
        let m = XiModel::beta(2.0, 3.0).unwrap();
        for n in [1, 7, 60, 100] {
            let a = e_k0_alt_sum(&m, n).unwrap();
            let b = e_k0_dp(&m, n).unwrap();
            assert!((a - b).abs() < 1e-8, "n = {n}: {a} vs {b}");
        }
        let r1 = m.xibar_moment(1).unwrap() / m.xi_moment(1).unwrap();
        assert!((e_k0_alt_sum(&m, 1).unwrap() - r1).abs() < 1e-15);
    }
}
