//! Limit laws of the occupancy functionals and their normalizations.

mod functional;
mod laws;
mod mittag_leffler;
mod mixed_poisson;
mod schedule;
mod stable;

use thiserror::Error;

use crate::numeric::QuadratureError;
use crate::xi_models::XiError;

pub use functional::{limit_for, truncated_mean, z_limit_pmf, z_limit_remainder, Functional, LimitOutcome, ZScale};
pub use laws::LimitLaw;
pub use mittag_leffler::{mittag_leffler_cdf, mittag_leffler_moment, sample_mittag_leffler};
pub use mixed_poisson::{mixed_poisson_gem_moment, mixed_poisson_gem_pgf, mixed_poisson_gem_pmf, sample_mixed_poisson_gem};
pub use schedule::{normalization, solve_c, NormalizationSchedule, ScheduleKind};
pub use stable::{one_stable_cdf, sample_one_stable, sample_stable, stable_cdf};

#[derive(Debug, Error)]
pub enum LimitError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Xi(#[from] XiError),
    #[error("characteristic function inversion failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("no normalization available: {0}")]
    Unsupported(String),
    #[error("limit theorem not applicable: {0}")]
    Inapplicable(String),
}
