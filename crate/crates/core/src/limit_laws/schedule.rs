//! Normalizing constants `(a_n, b_n)` for `(K_n* - b_n)/a_n`.
//!
//! Schedules are evaluated through `log n`, so `n` may be far beyond the
//! range of any integer type.

use std::fmt::Write as _;

use super::functional::truncated_mean;
use super::{LimitError, LimitLaw};
use crate::numeric::ExtReal;
use crate::xi_models::{Family, LimitCase, SlowlyVarying, XiModel};

#[derive(Debug, Clone)]
pub enum ScheduleKind {
    /// `b = log n / μ`, `a = (σ² log n / μ³)^{1/2}`.
    Normal { mu: f64, sigma2: f64 },
    /// `b = log n / μ`, `a = μ^{-3/2} c_m`, `m L(c_m) / c_m² = 1`, `m = ⌊log n⌋`.
    NormalSlowlyVarying { mu: f64, l: SlowlyVarying },
    /// `b = log n / μ`, `a = μ^{-(α+1)/α} c_m`, `m L(c_m) / c_m^α = 1`, `m = ⌊log n⌋`.
    Stable { mu: f64, alpha: f64, l: SlowlyVarying },
    /// Closed form for `P{ξ̄ ≤ x} = 1/(1 - log x)`:
    /// `a = log n / (log log n)²`, `b = a (log log n + log log log n)`.
    OneStableClosed,
    /// `b = b(log n)`, `a = b(log n)²/log n` with `b = ψ^{-1}`,
    /// `ψ(x) = x m(x)`; tail `~ 1/t` (`c(x) = x`). Numerical and unpinned.
    OneStableNumeric { model: XiModel },
    /// `b = 0`, `a = (log n)^α / L(log n)`.
    MittagLeffler { alpha: f64, l: SlowlyVarying },
}

#[derive(Debug, Clone)]
pub struct NormalizationSchedule {
    pub case: LimitCase,
    pub kind: ScheduleKind,
    pub law: LimitLaw,
    /// Set for schedules that are not pinned to a closed form.
    pub experimental: bool,
}

/// Root of `m L(c) / c^α = 1` on `c ≥ 1`, by bisection to relative `1e-13`.
///
/// `c ↦ L(c)/c^α` is decreasing on `c ≥ 1` for the supported `L`, so the
/// root is unique. Returns `1` when `m L(1) ≤ 1`.
pub fn solve_c(m: f64, alpha: f64, l: SlowlyVarying) -> f64 {
    let h = |c: f64| m * l.eval(c) / c.powf(alpha) - 1.0;
    let mut lo = 1.0;
    if h(lo) <= 0.0 {
        return lo;
    }
    let mut hi = m.max(2.0).powf(2.0 / alpha);
    while h(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo) > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn floor_log(log_n: f64) -> f64 {
    log_n.floor().max(1.0)
}

/// Inverse of the increasing map `x ↦ x m(x)`.
fn psi_inverse(model: &XiModel, y: f64) -> f64 {
    let psi = |x: f64| x * truncated_mean(model, x).unwrap_or(f64::NAN);
    let (mut lo, mut hi) = (0.0, y.max(1.0));
    while psi(hi) < y {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

impl NormalizationSchedule {
    /// `c_{⌊log n⌋}` for the cases that use it.
    pub fn c_log(&self, log_n: f64) -> Option<f64> {
        match &self.kind {
            ScheduleKind::NormalSlowlyVarying { l, .. } => Some(solve_c(floor_log(log_n), 2.0, *l)),
            ScheduleKind::Stable { alpha, l, .. } => Some(solve_c(floor_log(log_n), *alpha, *l)),
            _ => None,
        }
    }

    pub fn a_log(&self, log_n: f64) -> f64 {
        match &self.kind {
            ScheduleKind::Normal { mu, sigma2 } => (sigma2 * log_n / mu.powi(3)).sqrt(),
            ScheduleKind::NormalSlowlyVarying { mu, .. } => mu.powf(-1.5) * self.c_log(log_n).expect("c"),
            ScheduleKind::Stable { mu, alpha, .. } => {
                mu.powf(-(alpha + 1.0) / alpha) * self.c_log(log_n).expect("c")
            }
            ScheduleKind::OneStableClosed => log_n / log_n.ln().powi(2),
            ScheduleKind::OneStableNumeric { model } => psi_inverse(model, log_n).powi(2) / log_n,
            ScheduleKind::MittagLeffler { alpha, l } => log_n.powf(*alpha) / l.eval(log_n),
        }
    }

    pub fn b_log(&self, log_n: f64) -> f64 {
        match &self.kind {
            ScheduleKind::Normal { mu, .. }
            | ScheduleKind::NormalSlowlyVarying { mu, .. }
            | ScheduleKind::Stable { mu, .. } => log_n / mu,
            ScheduleKind::OneStableClosed => {
                let ll = log_n.ln();
                self.a_log(log_n) * (ll + ll.ln())
            }
            ScheduleKind::OneStableNumeric { model } => psi_inverse(model, log_n),
            ScheduleKind::MittagLeffler { .. } => 0.0,
        }
    }

    pub fn a_n(&self, n: f64) -> f64 {
        self.a_log(n.ln())
    }

    pub fn b_n(&self, n: f64) -> f64 {
        self.b_log(n.ln())
    }

    /// `(x - b_n) / a_n`.
    pub fn normalize(&self, x: f64, n: f64) -> f64 {
        let log_n = n.ln();
        (x - self.b_log(log_n)) / self.a_log(log_n)
    }

    /// Key-value report with the schedule evaluated on `n_grid`.
    pub fn describe(&self, n_grid: &[f64]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case = {}", self.case.tag());
        let _ = writeln!(out, "law = {}", self.law);
        let _ = writeln!(out, "law_tolerance = {:e}", self.law.tolerance());
        let _ = writeln!(out, "experimental = {}", self.experimental);
        let _ = writeln!(out, "schedule = {}", self.formula());
        for &n in n_grid {
            let log_n = n.ln();
            let _ = write!(out, "n = {n:e}: a_n = {:.10e}, b_n = {:.10e}", self.a_log(log_n), self.b_log(log_n));
            if let Some(c) = self.c_log(log_n) {
                let _ = write!(out, ", c = {c:.10e}");
            }
            out.push('\n');
        }
        out
    }

    fn formula(&self) -> String {
        match &self.kind {
            ScheduleKind::Normal { mu, sigma2 } => {
                format!("b_n = log n / {mu}, a_n = ({sigma2} log n / {mu}^3)^(1/2)")
            }
            ScheduleKind::NormalSlowlyVarying { mu, l } => {
                format!("b_n = log n / {mu}, a_n = {mu}^(-3/2) c_floor(log n), m L(c)/c^2 = 1, L = {l:?}")
            }
            ScheduleKind::Stable { mu, alpha, l } => format!(
                "b_n = log n / {mu}, a_n = {mu}^(-({alpha}+1)/{alpha}) c_floor(log n), m L(c)/c^{alpha} = 1, L = {l:?}"
            ),
            ScheduleKind::OneStableClosed => {
                "a_n = log n / (log log n)^2, b_n = a_n (log log n + log log log n)".into()
            }
            ScheduleKind::OneStableNumeric { .. } => {
                "b_n = psi^-1(log n), a_n = b_n^2 / log n, psi(x) = x m(x)".into()
            }
            ScheduleKind::MittagLeffler { alpha, l } => format!("b_n = 0, a_n = (log n)^{alpha} / L(log n), L = {l:?}"),
        }
    }
}

/// Normalization of `K_n*` (and of the functionals sharing its limit).
pub fn normalization(model: &XiModel) -> Result<NormalizationSchedule, LimitError> {
    let cls = model.classify_case();
    let finite_mu = || -> Result<f64, LimitError> {
        match model.mu()? {
            ExtReal::Finite(mu) => Ok(mu),
            ExtReal::Infinite => Err(LimitError::Unsupported("case requires a finite mean step".into())),
        }
    };
    let alpha = || -> Result<f64, LimitError> {
        cls.alpha
            .ok_or_else(|| LimitError::Unsupported(format!("case ({}) requires a tail index", cls.case.tag())))
    };
    let (kind, law, experimental) = match cls.case {
        LimitCase::A => {
            let mu = finite_mu()?;
            let sigma2 = model
                .sigma2()?
                .finite()
                .ok_or_else(|| LimitError::Unsupported("case (a) requires finite variance".into()))?;
            (ScheduleKind::Normal { mu, sigma2 }, LimitLaw::Normal01, false)
        }
        LimitCase::B => (
            ScheduleKind::NormalSlowlyVarying {
                mu: finite_mu()?,
                l: cls.slowly_varying,
            },
            LimitLaw::Normal01,
            false,
        ),
        LimitCase::C => {
            let a = alpha()?;
            if !(a > 1.0 && a < 2.0) {
                return Err(LimitError::Unsupported(format!("stable index {a} outside (1, 2)")));
            }
            (
                ScheduleKind::Stable {
                    mu: finite_mu()?,
                    alpha: a,
                    l: cls.slowly_varying,
                },
                LimitLaw::Stable { alpha: a },
                false,
            )
        }
        LimitCase::D => match model.family() {
            Family::LogPareto { alpha } if *alpha == 1.0 => (ScheduleKind::OneStableClosed, LimitLaw::OneStable, false),
            _ => (
                ScheduleKind::OneStableNumeric { model: model.clone() },
                LimitLaw::OneStable,
                true,
            ),
        },
        LimitCase::E => {
            let a = alpha()?;
            (
                ScheduleKind::MittagLeffler {
                    alpha: a,
                    l: cls.slowly_varying,
                },
                LimitLaw::MittagLeffler { alpha: a },
                false,
            )
        }
        LimitCase::Unsupported => {
            return Err(LimitError::Unsupported(format!(
                "model {model} has no limit classification; supply a case hint"
            )))
        }
    };
    Ok(NormalizationSchedule {
        case: cls.case,
        kind,
        law,
        experimental,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xi_models::CaseHint;
    use std::sync::Arc;

    #[test]
    fn uniform_case_a() {
        let s = normalization(&XiModel::beta(1.0, 1.0).unwrap()).unwrap();
        for log_n in [5.0, 20.0, 100.0] {
            assert!((s.b_log(log_n) - log_n).abs() < 1e-12 * log_n);
            assert!((s.a_log(log_n) - log_n.sqrt()).abs() < 1e-9 * log_n);
        }
        assert_eq!(s.law, LimitLaw::Normal01);
    }

    #[test]
    fn log_pareto_half_is_mittag_leffler() {
        let s = normalization(&XiModel::log_pareto(0.5).unwrap()).unwrap();
        assert_eq!(s.law, LimitLaw::MittagLeffler { alpha: 0.5 });
        assert_eq!(s.b_n(1e12), 0.0);
        assert!((s.a_n(1e12) - 1e12f64.ln().sqrt()).abs() < 1e-12);
    }

    #[test]
    fn log_pareto_three_halves_stable() {
        let s = normalization(&XiModel::log_pareto(1.5).unwrap()).unwrap();
        let log_n = 1e9f64.ln();
        let m = log_n.floor();
        let c = s.c_log(log_n).unwrap();
        assert!((c - m.powf(2.0 / 3.0)).abs() < 1e-9 * c);
        assert!((s.a_log(log_n) - 2f64.powf(-5.0 / 3.0) * c).abs() < 1e-9);
        assert_eq!(s.law, LimitLaw::Stable { alpha: 1.5 });
    }

    #[test]
    fn case_b_root_solves_its_equation() {
        let l = SlowlyVarying::TwiceLogOnePlus;
        for m in [1.0, 7.0, 27.0, 1e3] {
            let c = solve_c(m, 2.0, l);
            assert!((m * l.eval(c) / (c * c) - 1.0).abs() < 1e-9, "m = {m}");
        }
        // L(c)/c² decreasing on [1, ∞)
        let vals: Vec<f64> = (0..200).map(|i| 1.0 + i as f64 * 0.5).map(|c| l.eval(c) / (c * c)).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn closed_one_stable_schedule_pinned() {
        // log n = e^e: log log n = e, log log log n = 1.
        let s = normalization(&XiModel::log_pareto(1.0).unwrap()).unwrap();
        let e = std::f64::consts::E;
        let log_n = e.powf(e);
        let a = e.powf(e - 2.0);
        assert!((s.a_log(log_n) - a).abs() < 1e-12 * a);
        assert!((s.b_log(log_n) - a * (e + 1.0)).abs() < 1e-12 * a);
        assert!(!s.experimental);
    }

    #[test]
    fn numeric_one_stable_inverts_psi() {
        let hint = CaseHint { case: LimitCase::D, alpha: Some(1.0) };
        // -log ξ̄ = 1/U - 1: tail (1+t)^{-1}, as for the closed form.
        let m = XiModel::custom_quantile("lp1", Arc::new(|u: f64| (1.0 - 1.0 / u).exp()), Some(hint), true);
        let s = normalization(&m).unwrap();
        assert!(s.experimental);
        // ξ̄ = e^{-s} underflows for s > 745, which bounds what a quantile
        // oracle can resolve.
        for log_n in [10.0, 100.0, 1e3] {
            let b = s.b_log(log_n);
            let psi = b * b.ln_1p();
            assert!((psi - log_n).abs() < 1e-3 * log_n, "log n = {log_n}: ψ(b) = {psi}");
        }
    }

    #[test]
    fn a_n_diverges_on_probe_grid() {
        let models = [
            XiModel::beta(2.0, 3.0).unwrap(),
            XiModel::log_pareto(2.0).unwrap(),
            XiModel::log_pareto(1.5).unwrap(),
            XiModel::log_pareto(1.0).unwrap(),
            XiModel::log_pareto(0.5).unwrap(),
        ];
        for m in models {
            let s = normalization(&m).unwrap();
            let a: Vec<f64> = (2..=12).map(|e| s.a_n(10f64.powi(e))).collect();
            assert!(a.iter().all(|&x| x > 0.0), "{m}");
            assert!(a.last() > a.first(), "{m}");
        }
    }
}
