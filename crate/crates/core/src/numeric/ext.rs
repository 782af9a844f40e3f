use std::fmt;

use serde::{Deserialize, Serialize};

/// A nonnegative extended real: either a finite value or `+∞`.
///
/// Moment functionals such as `μ = E(-log ξ̄)` are infinite for heavy-tailed
/// families, and every limit statement branches on finiteness, so infinity
/// is carried as its own variant rather than as a large float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// `f64` view with `+∞` mapped to `f64::INFINITY`; for display and
    /// comparisons only.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}
