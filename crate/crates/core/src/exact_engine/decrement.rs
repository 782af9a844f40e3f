//! Decrement matrices of the remaining-balls chain.
//!
//! `qstar(n)[m] = P{a box captures m of n balls} = C(n,m) E[ξ^m ξ̄^(n-m)]`,
//! so `qstar(n)[0] = Eξ̄^n` and `P{A_n* = n - m} = qstar(n)[m]`. The plain
//! chain conditions on capturing at least one ball.
//!
//! Beta and atomic laws give rows in closed form. Other laws integrate the
//! top row `N` in quantile space and fill lower rows by sampling
//! consistency, `q*(n:m) = q*(n+1:m)(n+1-m)/(n+1) + q*(n+1:m+1)(m+1)/(n+1)`,
//! a recursion with nonnegative weights.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::ExactError;
use crate::numeric::hp::{self, alternating_sum, binomial_row, HpError};
use crate::numeric::special::ln_binomial;
use crate::numeric::Integrator;
use crate::xi_models::{CustomLaw, Family, XiError, XiModel};

/// Largest top row materialized for quadrature-based laws.
pub const MAX_TABLE_N: usize = 4096;

#[derive(Debug, Clone)]
enum Source {
    Beta { b: f64, c: f64, xibar: Arc<[f64]> },
    Atoms { xibar: Vec<f64>, weights: Vec<f64> },
    Table(Arc<Vec<Vec<f64>>>),
}

/// Row provider for `n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct DecrementRows {
    source: Source,
    n_max: usize,
}

type TableCache = Mutex<HashMap<(String, usize), Arc<Vec<Vec<f64>>>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl DecrementRows {
    pub fn new(model: &XiModel, n_max: usize) -> Result<Self, ExactError> {
        let source = match model.family() {
            Family::Beta { b, c } => Source::Beta {
                b: *b,
                c: *c,
                xibar: model.moments(n_max)?.xibar,
            },
            Family::Custom(spec) if matches!(spec.law, CustomLaw::Atoms { .. }) => {
                let CustomLaw::Atoms { xibar, weights } = &spec.law else {
                    unreachable!()
                };
                Source::Atoms {
                    xibar: xibar.clone(),
                    weights: weights.clone(),
                }
            }
            _ => {
                // Round the top row up so nearby requests share one table.
                let top = n_max.max(1).div_ceil(256) * 256;
                if top > MAX_TABLE_N {
                    return Err(ExactError::TooLarge {
                        n: n_max,
                        limit: MAX_TABLE_N,
                    });
                }
                let key = (model.fingerprint(), top);
                let cached = table_cache().lock().expect("table cache").get(&key).cloned();
                let table = match cached {
                    Some(t) => t,
                    None => {
                        let t = Arc::new(quadrature_table(model, top)?);
                        table_cache().lock().expect("table cache").insert(key, t.clone());
                        t
                    }
                };
                Source::Table(table)
            }
        };
        Ok(DecrementRows { source, n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `q*(n:m)` for `m = 0..=n` (`m` = balls captured).
    pub fn qstar(&self, n: usize) -> Vec<f64> {
        assert!(n <= self.n_max, "row {n} beyond prepared range {}", self.n_max);
        if n == 0 {
            return vec![1.0];
        }
        match &self.source {
            Source::Beta { b, c, xibar } => beta_row(*b, *c, n, xibar[n]),
            Source::Atoms { xibar, weights } => {
                let mut row = vec![0.0; n + 1];
                for (&a, &w) in xibar.iter().zip(weights) {
                    let start = a.powi(n as i32);
                    if start > 1e-280 {
                        // q*(n:m+1)/q*(n:m) = (n-m)/(m+1) · ξ/ξ̄
                        let ratio = (1.0 - a) / a;
                        let mut v = start;
                        for (m, r) in row.iter_mut().enumerate() {
                            *r += w * v;
                            v *= (n - m) as f64 / (m + 1) as f64 * ratio;
                        }
                    } else {
                        let (la, lb) = ((-a).ln_1p(), a.ln());
                        for (m, r) in row.iter_mut().enumerate() {
                            let lp = ln_binomial(n as u64, m as u64) + m as f64 * la + (n - m) as f64 * lb;
                            *r += w * lp.exp();
                        }
                    }
                }
                row
            }
            Source::Table(t) => t[n].clone(),
        }
    }

    /// `q(n:m)` for `m = 1..=n`, returned with index `m` (entry 0 is 0).
    pub fn q(&self, n: usize) -> Vec<f64> {
        let mut row = self.qstar(n);
        row[0] = 0.0;
        let escape: f64 = row.iter().sum();
        for r in row.iter_mut() {
            *r /= escape;
        }
        row
    }
}

/// Beta row by the ratio `q*(n:m+1)/q*(n:m) = (n-m)/(m+1) · (b+m)/(c+n-m-1)`.
fn beta_row(b: f64, c: f64, n: usize, xibar_n: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    if xibar_n > 1e-280 {
        let mut v = xibar_n;
        row.push(v);
        for m in 0..n {
            let (mf, nf) = (m as f64, n as f64);
            v *= (nf - mf) / (mf + 1.0) * (b + mf) / (c + nf - mf - 1.0);
            row.push(v);
        }
    } else {
        use crate::numeric::special::ln_gamma;
        let ln_b = ln_gamma(b) + ln_gamma(c) - ln_gamma(b + c);
        for m in 0..=n {
            let (mf, kf) = (m as f64, (n - m) as f64);
            let lb = ln_gamma(b + mf) + ln_gamma(c + kf) - ln_gamma(b + c + n as f64);
            row.push((ln_binomial(n as u64, m as u64) + lb - ln_b).exp());
        }
    }
    row
}

/// Top row by quantile-space quadrature, lower rows by sampling consistency.
fn quadrature_table(model: &XiModel, top: usize) -> Result<Vec<Vec<f64>>, ExactError> {
    let integ = Integrator::with_tolerances(1e-11, 1e-18).panels(2);
    let nf = top as f64;
    let top_row: Vec<f64> = (0..=top)
        .into_par_iter()
        .map(|m| -> Result<f64, ExactError> {
            let lc = ln_binomial(top as u64, m as u64);
            let mf = m as f64;
            let kf = nf - mf;
            let f = |u: f64| -> f64 {
                let (l_xi, l_bar) = model.log_pair_at(u).expect("quantile family");
                let mut lp = lc;
                if m > 0 {
                    lp += mf * l_xi;
                }
                if m < top {
                    lp += kf * l_bar;
                }
                let v = lp.exp();
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            };
            // Breakpoints around the binomial peak at ξ̄ = (N - m)/N.
            let x_star = kf / nf;
            let sd = (x_star * (1.0 - x_star)).max(1.0 / nf).sqrt() / nf.sqrt();
            let mut cuts = vec![0.0, 1.0];
            for k in [-12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0] {
                let x = x_star + k * sd;
                if x > 0.0 && x < 1.0 {
                    cuts.push(model.xibar_cdf(x));
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
            let mut total = 0.0;
            for w in cuts.windows(2) {
                total += integ.integrate(f, w[0], w[1]).map_err(XiError::from)?.value;
            }
            Ok(total)
        })
        .collect::<Result<_, _>>()?;
    let mut rows = vec![Vec::new(); top + 1];
    rows[top] = top_row;
    for n in (0..top).rev() {
        let above = &rows[n + 1];
        let n1 = (n + 1) as f64;
        let row: Vec<f64> = (0..=n)
            .map(|m| above[m] * (n1 - m as f64) / n1 + above[m + 1] * (m as f64 + 1.0) / n1)
            .collect();
        rows[n] = row;
    }
    Ok(rows)
}

/// `q*(n:m)` through the binomial expansion over power moments,
/// `C(n,m) Σ_i C(m,i) (-1)^i Eξ̄^(n-m+i)`, summed in high precision.
///
/// Exact-moment families use high-precision moments; quadrature families
/// feed their double-precision moments, and fail if the propagated input
/// error could exceed `1e-9`.
pub fn qstar_row_expansion(model: &XiModel, n: usize, start_bits: usize) -> Result<Vec<f64>, ExactError> {
    let table = model.moments(n)?;
    let tol = model.moment_tolerance();
    let mut row = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let terms = |bits: usize| {
            let cn = binomial_row(n, bits);
            let cm = binomial_row(m, bits);
            let moments: Vec<hp::HpFloat> = match model.power_moments_hp(n, bits) {
                Some((_, xibar)) => xibar,
                None => table.xibar[..=n].iter().map(|&x| hp::hp(x, bits)).collect(),
            };
            (0..=m)
                .map(|i| {
                    let t = &cn[m] * &cm[i] * &moments[n - m + i];
                    if i % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .collect()
        };
        let sum = alternating_sum(start_bits, terms)?;
        if !model.has_exact_moments() {
            let bound = sum.abs_sum * tol;
            if bound > 1e-9 {
                return Err(ExactError::Hp(HpError::InputPrecision {
                    input_error: tol,
                    bound,
                    limit: 1e-9,
                }));
            }
        }
        if sum.value < -1e-9 {
            return Err(ExactError::Hp(HpError::Cancellation {
                bits: sum.bits,
                lost_bits: sum.lost_bits,
            }));
        }
        row.push(sum.value.max(0.0));
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_rows_are_flat() {
        let m = XiModel::beta(1.0, 1.0).unwrap();
        let rows = DecrementRows::new(&m, 200).unwrap();
        for n in [1, 2, 17, 200] {
            for v in rows.qstar(n) {
                assert!((v - 1.0 / (n as f64 + 1.0)).abs() < 1e-14);
            }
            for v in &rows.q(n)[1..] {
                assert!((v - 1.0 / n as f64).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn first_row_is_the_first_moments() {
        for m in [XiModel::beta(2.0, 3.0).unwrap(), XiModel::log_pareto(0.5).unwrap(), XiModel::example27()] {
            let rows = DecrementRows::new(&m, 10).unwrap();
            let r = rows.qstar(1);
            assert!((r[0] - m.xibar_moment(1).unwrap()).abs() < 1e-9, "{m}");
            assert!((r[1] - m.xi_moment(1).unwrap()).abs() < 1e-9, "{m}");
        }
    }

    #[test]
    fn quadrature_rows_match_moments_and_sum_to_one() {
        for m in [XiModel::log_pareto(0.5).unwrap(), XiModel::log_pareto(1.5).unwrap(), XiModel::example27()] {
            let rows = DecrementRows::new(&m, 300).unwrap();
            for n in [1, 5, 50, 300] {
                let r = rows.qstar(n);
                assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-9, "{m} n={n}");
                let rel = (r[0] / m.xibar_moment(n).unwrap() - 1.0).abs();
                assert!(rel < 1e-7, "{m} n={n}: {rel}");
                let rel = (r[n] / m.xi_moment(n).unwrap() - 1.0).abs();
                assert!(rel < 1e-7, "{m} n={n}: {rel}");
            }
        }
    }

    #[test]
    fn expansion_route_matches_closed_form() {
        let m = XiModel::beta(2.0, 3.0).unwrap();
        let rows = DecrementRows::new(&m, 80).unwrap();
        for n in [1, 10, 80] {
            let e = qstar_row_expansion(&m, n, 256).unwrap();
            for (a, b) in rows.qstar(n).iter().zip(&e) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn expansion_route_for_quadrature_family_small_n() {
        let m = XiModel::example27();
        let rows = DecrementRows::new(&m, 2).unwrap();
        let e = qstar_row_expansion(&m, 2, 256).unwrap();
        for (a, b) in rows.qstar(2).iter().zip(&e) {
            assert!((a - b).abs() < 1e-8);
        }
        // Large rows amplify the quadrature error of the moments beyond use.
        assert!(qstar_row_expansion(&m, 60, 256).is_err());
    }

    #[test]
    fn atom_rows() {
        let m = XiModel::custom_atoms("two", vec![0.5, 0.25], vec![1.0, 1.0], None).unwrap();
        let rows = DecrementRows::new(&m, 3).unwrap();
        let r = rows.qstar(2);
        // ξ̄ ∈ {1/2, 1/4}: q*(2:0) = (1/4 + 1/16)/2
        assert!((r[0] - (0.25 + 0.0625) / 2.0).abs() < 1e-15);
        assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
