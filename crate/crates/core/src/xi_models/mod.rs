//! Laws of the stick-breaking factor `ξ` and their moment functionals.
//!
//! Every family is described through the walk step `s = -log ξ̄` and its
//! companion `h = -log ξ`. The built-in families are
//!
//! - `Beta(b, c)`: `ξ ~ beta(b, c)`, so `ξ̄ ~ beta(c, b)`; `GEM(θ)` is `Beta(1, θ)`,
//! - `LogPareto(α)`: `P{ξ̄ ≤ x} = (1 - log x)^(-α)`, i.e. `P{s > t} = (1 + t)^(-α)`,
//! - `Example27`: `P{ξ̄ ≤ x} = -log(1-x) / (1 - log(1-x))`, with `ν = ∞`,
//! - `Custom`: a user quantile for `ξ̄` or a finite set of atoms.

mod classify;
mod family;
mod moments;
mod sample;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numeric::QuadratureError;

pub use classify::{CaseHint, Classification, LimitCase, SlowlyVarying};
pub use moments::MomentTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XiError {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse model spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Quantile function `u ↦ ξ̄` of a custom law, nondecreasing on `(0, 1)`.
pub type QuantileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum CustomLaw {
    Quantile(QuantileFn),
    /// Finitely many values of `ξ̄` in `(0, 1)` with positive weights.
    Atoms { xibar: Vec<f64>, weights: Vec<f64> },
}

#[derive(Clone)]
pub struct CustomSpec {
    pub label: String,
    pub law: CustomLaw,
    pub hint: Option<CaseHint>,
    /// User attestation that the law of `-log ξ̄` is nonlattice.
    pub nonlattice: bool,
}

#[derive(Clone)]
pub enum Family {
    Beta { b: f64, c: f64 },
    LogPareto { alpha: f64 },
    Example27,
    Custom(CustomSpec),
}

/// An immutable, cheaply cloneable law for `ξ` with a shared moment cache.
#[derive(Clone)]
pub struct XiModel {
    family: Family,
    cache: Arc<moments::MomentCache>,
}

impl XiModel {
    pub fn beta(b: f64, c: f64) -> Result<Self, XiError> {
        positive("b", b)?;
        positive("c", c)?;
        Ok(Self::from_family(Family::Beta { b, c }))
    }

    /// `GEM(θ)`, stored as `Beta(1, θ)`.
    pub fn gem(theta: f64) -> Result<Self, XiError> {
        positive("theta", theta)?;
        Self::beta(1.0, theta)
    }

    pub fn log_pareto(alpha: f64) -> Result<Self, XiError> {
        positive("alpha", alpha)?;
        Ok(Self::from_family(Family::LogPareto { alpha }))
    }

    pub fn example27() -> Self {
        Self::from_family(Family::Example27)
    }

    pub fn custom_quantile(
        label: impl Into<String>,
        quantile: QuantileFn,
        hint: Option<CaseHint>,
        nonlattice: bool,
    ) -> Self {
        Self::from_family(Family::Custom(CustomSpec {
            label: label.into(),
            law: CustomLaw::Quantile(quantile),
            hint,
            nonlattice,
        }))
    }

    /// A discrete law putting mass `weights[i]` on `ξ̄ = xibar[i]`.
    pub fn custom_atoms(
        label: impl Into<String>,
        xibar: Vec<f64>,
        weights: Vec<f64>,
        hint: Option<CaseHint>,
    ) -> Result<Self, XiError> {
        if xibar.is_empty() || xibar.len() != weights.len() {
            return Err(XiError::InvalidParameter(
                "atoms and weights must be nonempty and of equal length".into(),
            ));
        }
        if xibar.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
            return Err(XiError::InvalidParameter("atoms must lie in (0, 1)".into()));
        }
        if weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(XiError::InvalidParameter("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / total).collect();
        // A finite support is a lattice only in degenerate cases we do not try to detect.
        Ok(Self::from_family(Family::Custom(CustomSpec {
            label: label.into(),
            law: CustomLaw::Atoms { xibar, weights },
            hint,
            nonlattice: false,
        })))
    }

    fn from_family(family: Family) -> Self {
        XiModel {
            family,
            cache: Arc::new(moments::MomentCache::default()),
        }
    }

    /// Parse `beta:<b>,<c>`, `gem:<theta>`, `logpareto:<alpha>` or `example27`.
    pub fn parse(spec: &str) -> Result<Self, XiError> {
        let err = |reason: &str| XiError::Parse {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        let (name, args) = match lower.split_once(':') {
            Some((name, args)) => (name, Some(args)),
            None => (lower.as_str(), None),
        };
        let numbers = |expected: usize| -> Result<Vec<f64>, XiError> {
            let args = args.ok_or_else(|| err(&format!("expected {expected} parameter(s)")))?;
            let values: Vec<&str> = args.split(',').collect();
            if values.len() != expected {
                return Err(err(&format!(
                    "expected {expected} parameter(s), found {}",
                    values.len()
                )));
            }
            values
                .iter()
                .map(|v| v.parse::<f64>().map_err(|_| err(&format!("not a number: {v:?}"))))
                .collect()
        };
        match name {
            "beta" => {
                let p = numbers(2)?;
                Self::beta(p[0], p[1])
            }
            "gem" => Self::gem(numbers(1)?[0]),
            "logpareto" => Self::log_pareto(numbers(1)?[0]),
            "example27" => {
                if args.is_some() {
                    return Err(err("example27 takes no parameters"));
                }
                Ok(Self::example27())
            }
            _ => Err(err("unknown family; expected beta, gem, logpareto or example27")),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `Some(θ)` when the model is `GEM(θ) = Beta(1, θ)`.
    pub fn gem_theta(&self) -> Option<f64> {
        match self.family {
            Family::Beta { b: 1.0, c } => Some(c),
            _ => None,
        }
    }

    /// Whether the support condition excluding lattice step laws is known to hold.
    pub fn nonlattice(&self) -> bool {
        match &self.family {
            Family::Custom(spec) => spec.nonlattice,
            _ => true,
        }
    }

    /// Stable identity string used as a cache key.
    pub fn fingerprint(&self) -> String {
        match &self.family {
            Family::Custom(spec) => {
                format!("custom:{}#{}", spec.label, self.cache.serial)
            }
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for XiModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Beta { b, c } => write!(f, "beta:{b},{c}"),
            Family::LogPareto { alpha } => write!(f, "logpareto:{alpha}"),
            Family::Example27 => write!(f, "example27"),
            Family::Custom(spec) => write!(f, "custom:{}", spec.label),
        }
    }
}

impl fmt::Debug for XiModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiModel({self})")
    }
}

fn positive(name: &str, v: f64) -> Result<(), XiError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(XiError::InvalidParameter(format!(
            "{name} must be a finite positive number, got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_spec_grammar() {
        assert_eq!(XiModel::parse("beta:2,3").unwrap().to_string(), "beta:2,3");
        assert_eq!(XiModel::parse(" beta : 2 , 3 ").unwrap().to_string(), "beta:2,3");
        assert_eq!(XiModel::parse("gem:2").unwrap().to_string(), "beta:1,2");
        assert_eq!(XiModel::parse("LogPareto:0.5").unwrap().to_string(), "logpareto:0.5");
        assert_eq!(XiModel::parse("example27").unwrap().to_string(), "example27");
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["beta:1", "beta:1,2,3", "gem", "gem:-1", "logpareto:0", "example27:1", "foo:1", "beta:a,b"] {
            assert!(XiModel::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn gem_is_beta_one_theta() {
        let gem = XiModel::gem(2.0).unwrap();
        assert_eq!(gem.gem_theta(), Some(2.0));
        assert_eq!(gem.fingerprint(), XiModel::beta(1.0, 2.0).unwrap().fingerprint());
    }
}
