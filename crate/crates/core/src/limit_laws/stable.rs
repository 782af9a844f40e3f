//! Spectrally negative stable laws: distribution functions by
//! characteristic-function inversion, samples by Chambers–Mallows–Stuck.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Uniform};

use super::LimitError;
use crate::numeric::special::gamma;
use crate::numeric::Integrator;

/// Envelope level below which the inversion integrand is dropped.
const ENVELOPE: f64 = 1e-10;

fn check_alpha(alpha: f64) -> Result<(), LimitError> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(LimitError::InvalidParameter(format!("stable index must lie in (1, 2), got {alpha}")))
    }
}

/// `(A, B)` with `φ(t) = exp(-A t^α - i B t^α)` for `t > 0`, i.e.
/// `A + iB = Γ(1-α)(cos(πα/2) + i sin(πα/2))`.
fn coefficients(alpha: f64) -> (f64, f64) {
    let g = gamma(1.0 - alpha);
    let h = FRAC_PI_2 * alpha;
    (g * h.cos(), g * h.sin())
}

/// Integrator with one panel per half oscillation of the integrand.
fn oscillatory(t_max: f64, frequency: f64) -> Integrator {
    let panels = ((t_max * frequency / PI).ceil() as usize).clamp(8, 200_000);
    Integrator {
        max_intervals: panels + 4000,
        ..Integrator::with_tolerances(1e-10, 1e-10).panels(panels)
    }
}

/// Distribution function of the law with characteristic function
/// `exp{-|t|^α Γ(1-α)(cos(πα/2) + i sin(πα/2) sgn t)}`, `α ∈ (1, 2)`:
/// `F(x) = 1/2 + π^{-1} ∫_0^∞ e^{-A t^α} sin(tx + B t^α) / t dt`.
pub fn stable_cdf(alpha: f64, x: f64) -> Result<f64, LimitError> {
    check_alpha(alpha)?;
    let (a, b) = coefficients(alpha);
    let t_max = (-ENVELOPE.ln() / a).powf(1.0 / alpha);
    let freq = x.abs() + b.abs() * t_max.powf(alpha - 1.0);
    let q = oscillatory(t_max, freq).integrate(
        |t| {
            let ta = t.powf(alpha);
            (-a * ta).exp() * (t * x + b * ta).sin() / t
        },
        0.0,
        t_max,
    )?;
    Ok((0.5 + q.value / PI).clamp(0.0, 1.0))
}

/// Distribution function of the 1-stable law with characteristic function
/// `exp{-|t|(π/2 - i log|t| sgn t)}`:
/// `F(x) = 1/2 - π^{-1} ∫_0^∞ e^{-πt/2} sin(t log t - tx) / t dt`.
pub fn one_stable_cdf(x: f64) -> Result<f64, LimitError> {
    let t_max = -ENVELOPE.ln() / FRAC_PI_2;
    let freq = x.abs() + t_max.ln().abs() + 1.0;
    let q = oscillatory(t_max, freq).integrate(
        |t| (-FRAC_PI_2 * t).exp() * (t * t.ln() - t * x).sin() / t,
        0.0,
        t_max,
    )?;
    Ok((0.5 - q.value / PI).clamp(0.0, 1.0))
}

fn angle_and_exp<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let v = Uniform::new(-FRAC_PI_2, FRAC_PI_2).expect("finite range").sample(rng);
    let w: f64 = Exp1.sample(rng);
    (v, w)
}

/// Draw from the `α ∈ (1, 2)` law of [`stable_cdf`].
///
/// The law is `S_α(β = -1)` with scale `A^{1/α}`; CMS gives the unit-scale
/// variable with characteristic function `exp{-|t|^α (1 + i tan(πα/2) sgn t)}`.
pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let (a, _) = coefficients(alpha);
    let tan = (FRAC_PI_2 * alpha).tan();
    let shift = (-tan).atan() / alpha;
    let scale = (1.0 + tan * tan).powf(0.5 / alpha);
    let (v, w) = angle_and_exp(rng);
    let arg = alpha * (v + shift);
    let x = scale * arg.sin() / v.cos().powf(1.0 / alpha) * ((v - arg).cos() / w).powf((1.0 - alpha) / alpha);
    a.powf(1.0 / alpha) * x
}

/// Draw from the 1-stable law of [`one_stable_cdf`]: `S_1(β = -1)` with
/// scale `π/2`, obtained from the unit-scale CMS variable `X` as
/// `(π/2) X - log(π/2)`.
pub fn sample_one_stable<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let (v, w) = angle_and_exp(rng);
    let shifted = FRAC_PI_2 - v;
    let x = (shifted * v.tan() + (FRAC_PI_2 * w * v.cos() / shifted).ln()) / FRAC_PI_2;
    FRAC_PI_2 * x - FRAC_PI_2.ln()
}
