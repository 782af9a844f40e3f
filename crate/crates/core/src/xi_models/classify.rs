//! Selection of the limit regime for the renewal counts of the walk.

use serde::{Deserialize, Serialize};

use super::{CustomLaw, Family, XiModel};

/// Limit regime of `(N_t - b)/a`, by the tail of `-log ξ̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LimitCase {
    /// Finite variance: normal limit.
    A,
    /// Infinite variance, slowly varying truncated second moment: normal limit.
    B,
    /// Tail index in `(1, 2)`, or `1` with finite mean: stable limit.
    C,
    /// Tail index `1`, infinite mean: 1-stable limit.
    D,
    /// Tail index in `[0, 1)`: Mittag-Leffler limit.
    E,
    Unsupported,
}

impl LimitCase {
    pub fn tag(self) -> &'static str {
        match self {
            LimitCase::A => "a",
            LimitCase::B => "b",
            LimitCase::C => "c",
            LimitCase::D => "d",
            LimitCase::E => "e",
            LimitCase::Unsupported => "unsupported",
        }
    }
}

/// User-supplied regime for a custom model. The slowly varying factor of
/// the tail is taken to be constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseHint {
    pub case: LimitCase,
    pub alpha: Option<f64>,
}

/// Slowly varying functions realized by the built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SlowlyVarying {
    One,
    /// `L(x) = 2 log(1 + x)`: truncated second moment of a log-Pareto(2) step.
    TwiceLogOnePlus,
}

impl SlowlyVarying {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            SlowlyVarying::One => 1.0,
            SlowlyVarying::TwiceLogOnePlus => 2.0 * x.ln_1p(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub case: LimitCase,
    /// Tail index in the regularly varying cases (b)–(e).
    pub alpha: Option<f64>,
    pub slowly_varying: SlowlyVarying,
}

impl XiModel {
    pub fn classify_case(&self) -> Classification {
        let plain = |case, alpha| Classification {
            case,
            alpha,
            slowly_varying: SlowlyVarying::One,
        };
        match &self.family {
            Family::Beta { .. } | Family::Example27 => plain(LimitCase::A, None),
            Family::LogPareto { alpha } => {
                let a = *alpha;
                if a > 2.0 {
                    plain(LimitCase::A, None)
                } else if a == 2.0 {
                    Classification {
                        case: LimitCase::B,
                        alpha: Some(2.0),
                        slowly_varying: SlowlyVarying::TwiceLogOnePlus,
                    }
                } else if a > 1.0 {
                    plain(LimitCase::C, Some(a))
                } else if a == 1.0 {
                    plain(LimitCase::D, Some(1.0))
                } else {
                    plain(LimitCase::E, Some(a))
                }
            }
            Family::Custom(spec) => match (spec.hint, &spec.law) {
                (Some(h), _) => plain(h.case, h.alpha),
                // Bounded steps: every moment is finite.
                (None, CustomLaw::Atoms { .. }) => plain(LimitCase::A, None),
                (None, CustomLaw::Quantile(_)) => plain(LimitCase::Unsupported, None),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn built_in_families() {
        let case = |m: XiModel| m.classify_case().case;
        assert_eq!(case(XiModel::beta(2.0, 3.0).unwrap()), LimitCase::A);
        assert_eq!(case(XiModel::example27()), LimitCase::A);
        assert_eq!(case(XiModel::log_pareto(3.0).unwrap()), LimitCase::A);
        assert_eq!(case(XiModel::log_pareto(2.0).unwrap()), LimitCase::B);
        assert_eq!(case(XiModel::log_pareto(1.5).unwrap()), LimitCase::C);
        assert_eq!(case(XiModel::log_pareto(1.0).unwrap()), LimitCase::D);
        let c = XiModel::log_pareto(0.5).unwrap().classify_case();
        assert_eq!((c.case, c.alpha, c.slowly_varying), (LimitCase::E, Some(0.5), SlowlyVarying::One));
    }

    #[test]
    fn consistent_with_moment_finiteness() {
        for a in [0.5, 1.0, 1.5, 2.0, 2.5] {
            let m = XiModel::log_pareto(a).unwrap();
            let c = m.classify_case().case;
            assert_eq!(m.sigma2().unwrap().is_finite(), c == LimitCase::A, "α = {a}");
            assert_eq!(
                m.mu().unwrap().is_finite(),
                !matches!(c, LimitCase::D | LimitCase::E),
                "α = {a}"
            );
        }
    }

    #[test]
    fn custom_without_hint_is_unsupported() {
        let m = XiModel::custom_quantile("u", Arc::new(|u| u), None, true);
        assert_eq!(m.classify_case().case, LimitCase::Unsupported);
        let hint = CaseHint { case: LimitCase::E, alpha: Some(0.3) };
        let m = XiModel::custom_quantile("u", Arc::new(|u| u), Some(hint), true);
        assert_eq!(m.classify_case().alpha, Some(0.3));
    }
}
