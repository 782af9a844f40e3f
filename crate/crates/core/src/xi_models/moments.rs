//! Moment functionals: `Eξ^k`, `Eξ̄^k`, `μ`, `ν`, `σ²`.
//!
//! Beta and atomic laws use exact formulas. The other families integrate
//! against distribution functions of `s = -log ξ̄` and `h = -log ξ`:
//!
//! ```text
//! Eξ̄^k = ∫_0^∞ e^{-u} P{s ≤ u/k} du,   μ = ∫_0^∞ P{s > t} dt,
//! Eξ^k  = ∫_0^∞ e^{-u} P{h ≤ u/k} du,   ν = ∫_0^∞ P{h > t} dt,
//! ```
//!
//! which keeps integrands bounded even where densities of `ξ̄` blow up.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use super::{CustomLaw, Family, LimitCase, XiError, XiModel};
use crate::numeric::hp::{hp, HpFloat};
use crate::numeric::special::{digamma, trigamma};
use crate::numeric::{ExtReal, Integrator};

/// Default length of the cached moment arrays for closed-form families.
pub const DEFAULT_K_MAX: usize = 4096;
pub const QUAD_REL_TOL: f64 = 1e-10;
pub const QUAD_ABS_TOL: f64 = 1e-300;

static SERIAL: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq)]
struct Scalars {
    mu: ExtReal,
    nu: ExtReal,
    sigma2: ExtReal,
}

/// `Eξ^k` and `Eξ̄^k` for `k = 0..=k_max`.
type MomentArrays = (Arc<[f64]>, Arc<[f64]>);

#[derive(Debug)]
pub(crate) struct MomentCache {
    pub(crate) serial: u64,
    scalars: OnceLock<Result<Scalars, XiError>>,
    arrays: RwLock<Option<MomentArrays>>,
}

impl Default for MomentCache {
    fn default() -> Self {
        MomentCache {
            serial: SERIAL.fetch_add(1, Ordering::Relaxed),
            scalars: OnceLock::new(),
            arrays: RwLock::new(None),
        }
    }
}

/// Moment functionals of a model with cached power moments for `k = 0..=k_max`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub mu: ExtReal,
    pub nu: ExtReal,
    pub sigma2: ExtReal,
    /// `xi[k] = Eξ^k`.
    pub xi: Arc<[f64]>,
    /// `xibar[k] = Eξ̄^k`.
    pub xibar: Arc<[f64]>,
    /// Relative accuracy of the cached entries.
    pub tolerance: f64,
}

impl MomentTable {
    pub fn k_max(&self) -> usize {
        self.xibar.len() - 1
    }
}

fn integrator() -> Integrator {
    Integrator::with_tolerances(QUAD_REL_TOL, QUAD_ABS_TOL)
}

impl XiModel {
    /// Whether power moments are exact (closed form) rather than quadrature.
    pub fn has_exact_moments(&self) -> bool {
        match &self.family {
            Family::Beta { .. } => true,
            Family::Custom(spec) => matches!(spec.law, CustomLaw::Atoms { .. }),
            _ => false,
        }
    }

    /// Relative accuracy of `Eξ^k`, `Eξ̄^k` as returned by this model.
    pub fn moment_tolerance(&self) -> f64 {
        if self.has_exact_moments() {
            1e-15
        } else {
            QUAD_REL_TOL
        }
    }

    pub fn xi_moment(&self, k: usize) -> Result<f64, XiError> {
        if k == 0 {
            return Ok(1.0);
        }
        Ok(self.moments(k)?.xi[k])
    }

    pub fn xibar_moment(&self, k: usize) -> Result<f64, XiError> {
        if k == 0 {
            return Ok(1.0);
        }
        Ok(self.moments(k)?.xibar[k])
    }

    pub fn mu(&self) -> Result<ExtReal, XiError> {
        Ok(self.scalars()?.mu)
    }

    pub fn nu(&self) -> Result<ExtReal, XiError> {
        Ok(self.scalars()?.nu)
    }

    pub fn sigma2(&self) -> Result<ExtReal, XiError> {
        Ok(self.scalars()?.sigma2)
    }

    /// Moment table with power moments available at least up to `k_max`.
    pub fn moments(&self, k_max: usize) -> Result<MomentTable, XiError> {
        let scalars = self.scalars()?;
        let (xi, xibar) = self.arrays(k_max)?;
        Ok(MomentTable {
            mu: scalars.mu,
            nu: scalars.nu,
            sigma2: scalars.sigma2,
            xi,
            xibar,
            tolerance: self.moment_tolerance(),
        })
    }

    fn scalars(&self) -> Result<Scalars, XiError> {
        self.cache
            .scalars
            .get_or_init(|| self.compute_scalars())
            .clone()
    }

    fn arrays(&self, k_max: usize) -> Result<MomentArrays, XiError> {
        if let Some((xi, xibar)) = self.cache.arrays.read().expect("moment cache").as_ref() {
            if xibar.len() > k_max {
                return Ok((xi.clone(), xibar.clone()));
            }
        }
        let mut guard = self.cache.arrays.write().expect("moment cache");
        let have = guard.as_ref().map_or(0, |(_, xb)| xb.len());
        if have > k_max {
            let (xi, xibar) = guard.as_ref().expect("present");
            return Ok((xi.clone(), xibar.clone()));
        }
        let target = if self.has_exact_moments() {
            k_max.max(DEFAULT_K_MAX)
        } else {
            k_max.max(64).next_power_of_two()
        };
        let (mut xi, mut xibar): (Vec<f64>, Vec<f64>) = match guard.as_ref() {
            Some((xi, xibar)) => (xi.to_vec(), xibar.to_vec()),
            None => (vec![1.0], vec![1.0]),
        };
        self.extend_power_moments(&mut xi, &mut xibar, target)?;
        let xi: Arc<[f64]> = xi.into();
        let xibar: Arc<[f64]> = xibar.into();
        *guard = Some((xi.clone(), xibar.clone()));
        Ok((xi, xibar))
    }

    fn extend_power_moments(
        &self,
        xi: &mut Vec<f64>,
        xibar: &mut Vec<f64>,
        target: usize,
    ) -> Result<(), XiError> {
        let start = xibar.len();
        match &self.family {
            Family::Beta { b, c } => {
                // Eξ^{k+1} = Eξ^k (b+k)/(b+c+k), Eξ̄^{k+1} = Eξ̄^k (c+k)/(b+c+k)
                for k in start - 1..target {
                    let k_f = k as f64;
                    let denom = b + c + k_f;
                    let next_xi = xi[k] * (b + k_f) / denom;
                    let next_xibar = xibar[k] * (c + k_f) / denom;
                    xi.push(next_xi);
                    xibar.push(next_xibar);
                }
            }
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Atoms { xibar: atoms, weights } => {
                    for k in start..=target {
                        xibar.push(atoms.iter().zip(weights).map(|(a, w)| w * a.powi(k as i32)).sum());
                        xi.push(atoms.iter().zip(weights).map(|(a, w)| w * (1.0 - a).powi(k as i32)).sum());
                    }
                }
                CustomLaw::Quantile(q) => {
                    let integ = integrator().panels(16);
                    for k in start..=target {
                        let kk = k as i32;
                        xibar.push(integ.integrate(|u| q(u).powi(kk), 0.0, 1.0)?.value);
                        xi.push(integ.integrate(|u| (1.0 - q(u)).powi(kk), 0.0, 1.0)?.value);
                    }
                }
            },
            _ => {
                for k in start..=target {
                    xibar.push(self.xibar_moment_quadrature(k)?);
                    xi.push(self.xi_moment_quadrature(k)?);
                }
            }
        }
        Ok(())
    }

    /// `Eξ̄^k` by quadrature against the distribution function of `-log ξ̄`.
    /// Available for every built-in family, including Beta as a cross-check.
    pub fn xibar_moment_quadrature(&self, k: usize) -> Result<f64, XiError> {
        if k == 0 {
            return Ok(1.0);
        }
        if matches!(self.family, Family::Custom(_)) {
            return self.xibar_moment(k);
        }
        let kf = k as f64;
        let q = integrator().integrate_half_line_log_tamed(|u| {
            (-u).exp() * self.step_cdf(u / kf).expect("built-in family")
        })?;
        Ok(q.value)
    }

    /// `Eξ^k` by quadrature against the distribution function of `-log ξ`.
    pub fn xi_moment_quadrature(&self, k: usize) -> Result<f64, XiError> {
        if k == 0 {
            return Ok(1.0);
        }
        if matches!(self.family, Family::Custom(_)) {
            return self.xi_moment(k);
        }
        let kf = k as f64;
        let q = integrator().integrate_half_line_log_tamed(|u| {
            (-u).exp() * self.companion_cdf(u / kf).expect("built-in family")
        })?;
        Ok(q.value)
    }

    fn compute_scalars(&self) -> Result<Scalars, XiError> {
        use ExtReal::{Finite, Infinite};
        let integ = integrator();
        match &self.family {
            Family::Beta { b, c } => Ok(Scalars {
                mu: Finite(digamma(b + c) - digamma(*c)),
                nu: Finite(digamma(b + c) - digamma(*b)),
                sigma2: Finite(trigamma(*c) - trigamma(b + c)),
            }),
            Family::LogPareto { alpha } => {
                let a = *alpha;
                let mu = if a > 1.0 { Finite(1.0 / (a - 1.0)) } else { Infinite };
                let sigma2 = if a > 2.0 {
                    Finite(2.0 / ((a - 1.0) * (a - 2.0)) - 1.0 / ((a - 1.0) * (a - 1.0)))
                } else {
                    Infinite
                };
                let nu = integ.integrate_half_line_log_tamed(|t| self.companion_survival(t).expect("built-in"))?;
                Ok(Scalars {
                    mu,
                    nu: Finite(nu.value),
                    sigma2,
                })
            }
            Family::Example27 => {
                let mu = integ
                    .integrate_half_line_log_tamed(|t| self.step_survival(t).expect("built-in"))?
                    .value;
                let second = integ
                    .integrate_half_line_log_tamed(|t| 2.0 * t * self.step_survival(t).expect("built-in"))?
                    .value;
                Ok(Scalars {
                    mu: Finite(mu),
                    nu: Infinite,
                    sigma2: Finite(second - mu * mu),
                })
            }
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Atoms { xibar, weights } => {
                    let mean = |f: &dyn Fn(f64) -> f64| -> f64 {
                        xibar.iter().zip(weights).map(|(a, w)| w * f(*a)).sum()
                    };
                    let mu = mean(&|a| -a.ln());
                    let second = mean(&|a| a.ln() * a.ln());
                    Ok(Scalars {
                        mu: Finite(mu),
                        nu: Finite(mean(&|a| -(-a).ln_1p())),
                        sigma2: Finite(second - mu * mu),
                    })
                }
                CustomLaw::Quantile(q) => {
                    let case = spec.hint.map(|h| h.case);
                    let integ = integ.panels(16);
                    let mu_infinite = matches!(case, Some(LimitCase::D | LimitCase::E));
                    let sigma_infinite =
                        mu_infinite || matches!(case, Some(LimitCase::B | LimitCase::C));
                    let mu = if mu_infinite {
                        Infinite
                    } else {
                        Finite(integ.integrate(|u| -q(u).ln(), 0.0, 1.0)?.value)
                    };
                    let sigma2 = match mu {
                        Finite(m) if !sigma_infinite => {
                            let second = integ.integrate(|u| q(u).ln().powi(2), 0.0, 1.0)?.value;
                            Finite(second - m * m)
                        }
                        _ => Infinite,
                    };
                    let nu = integ.integrate(|u| -(-q(u)).ln_1p(), 0.0, 1.0)?.value;
                    Ok(Scalars {
                        mu,
                        nu: Finite(nu),
                        sigma2,
                    })
                }
            },
        }
    }

    /// Exact power moments `(Eξ^k, Eξ̄^k)` for `k = 0..=k_max` at the given
    /// binary precision, when the family admits them (Beta and atoms).
    pub fn power_moments_hp(&self, k_max: usize, bits: usize) -> Option<(Vec<HpFloat>, Vec<HpFloat>)> {
        match &self.family {
            Family::Beta { b, c } => {
                let (b, c) = (hp(*b, bits), hp(*c, bits));
                let one = hp(1.0, bits);
                let mut xi = vec![one.clone()];
                let mut xibar = vec![one];
                for k in 0..k_max {
                    let kk = hp(k as f64, bits);
                    let denom = &b + &c + &kk;
                    let next_xi = &xi[k] * (&b + &kk) / &denom;
                    let next_xibar = &xibar[k] * (&c + &kk) / &denom;
                    xi.push(next_xi);
                    xibar.push(next_xibar);
                }
                Some((xi, xibar))
            }
            Family::Custom(spec) => match &spec.law {
                CustomLaw::Atoms { xibar: atoms, weights } => {
                    let atoms: Vec<(HpFloat, HpFloat, HpFloat)> = atoms
                        .iter()
                        .zip(weights)
                        .map(|(a, w)| (hp(*a, bits), hp(1.0, bits) - hp(*a, bits), hp(*w, bits)))
                        .collect();
                    let mut pow_bar: Vec<HpFloat> = atoms.iter().map(|_| hp(1.0, bits)).collect();
                    let mut pow: Vec<HpFloat> = pow_bar.clone();
                    let mut xi = Vec::with_capacity(k_max + 1);
                    let mut xibar = Vec::with_capacity(k_max + 1);
                    for _ in 0..=k_max {
                        let mut s = hp(0.0, bits);
                        let mut sb = hp(0.0, bits);
                        for (i, (a, abar, w)) in atoms.iter().enumerate() {
                            s += w * &pow[i];
                            sb += w * &pow_bar[i];
                            pow[i] = &pow[i] * abar;
                            pow_bar[i] = &pow_bar[i] * a;
                        }
                        xi.push(s);
                        xibar.push(sb);
                    }
                    Some((xi, xibar))
                }
                CustomLaw::Quantile(_) => None,
            },
            _ => None,
        }
    }
}
