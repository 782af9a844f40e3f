//! Exact law of `K_{n,0}` for GEM(θ) as a sum of independent geometrics.

use super::{ExactError, Pmf};

/// `K_{n,0} = (M_1 - 1)_+ + ... + (M_{n-1} - 1)_+ + M_n`, with `M_j`
/// geometric on `{0, 1, ...}` with success probability `j/(θ+j)`.
/// The convolution is truncated at `i_max`; lost mass is the deficit.
pub fn gem_k0_exact_pmf(theta: f64, n: usize, i_max: usize) -> Result<Pmf, ExactError> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(ExactError::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    if n == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let len = i_max + 1;
    let mut acc = vec![0.0; len];
    acc[0] = 1.0;
    for j in 1..=n {
        let p = j as f64 / (theta + j as f64);
        let fail = theta / (theta + j as f64);
        let mut comp = vec![0.0; len];
        if j < n {
            // (M - 1)_+: zero when M ∈ {0, 1}
            comp[0] = p + p * fail;
            let mut v = p * fail * fail;
            for c in comp.iter_mut().skip(1) {
                *c = v;
                v *= fail;
            }
        } else {
            let mut v = p;
            for c in comp.iter_mut() {
                *c = v;
                v *= fail;
            }
        }
        acc = convolve_truncated(&acc, &comp);
    }
    Ok(Pmf::from_probs(0, acc))
}

fn convolve_truncated(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for k in 0..=i {
            s += a[k] * b[i - k];
        }
        *o = s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::gamma;

    #[test]
    fn single_ball_is_geometric() {
        let theta = 2.5;
        let p = gem_k0_exact_pmf(theta, 1, 50).unwrap();
        for i in 0..=50 {
            let target = 1.0 / (theta + 1.0) * (theta / (theta + 1.0)).powi(i);
            assert!((p.prob(i as i64) - target).abs() < 1e-15);
        }
    }

    #[test]
    fn theta_one_approaches_geometric_half() {
        let p = gem_k0_exact_pmf(1.0, 5000, 60).unwrap();
        for i in 0..10 {
            assert!((p.prob(i) - 0.5f64.powi(i as i32 + 1)).abs() < 1e-3);
        }
    }

    #[test]
    fn pgf_approaches_mixed_poisson_limit() {
        let limit = |s: f64| gamma(3.0) * gamma(3.0 - 2.0 * s) / gamma(5.0 - 2.0 * s);
        let p = gem_k0_exact_pmf(2.0, 400, 200).unwrap();
        for s in [0.0, 0.25, 0.5, 0.75] {
            assert!((p.pgf(s) - limit(s)).abs() < 1e-3, "s = {s}");
        }
        // At n = 200 the gap is still O(1/n): P{K = 0} = Π_{j<n}(1 - (θ/(θ+j))²) · n/(θ+n).
        let p = gem_k0_exact_pmf(2.0, 200, 200).unwrap();
        let zero: f64 = (1..200).map(|j| 1.0 - (2.0 / (2.0 + j as f64)).powi(2)).product::<f64>() * 200.0 / 202.0;
        assert!((p.prob(0) - zero).abs() < 1e-14);
        assert!((zero - limit(0.0) - 1.658_374_792_7e-3).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_theta() {
        assert!(gem_k0_exact_pmf(0.0, 3, 5).is_err());
    }
}
