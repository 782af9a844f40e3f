//! Exact finite-`n` laws and means from the first-box recursions.
//!
//! DPs with nonnegative terms run in double precision; alternating
//! binomial sums run in escalating binary precision (see [`crate::numeric::hp`]).

mod alt_sums;
mod decrement;
mod gem;
mod limits;
mod pmf;
mod recursions;
mod visits;

use thiserror::Error;

use crate::numeric::hp::HpError;
use crate::xi_models::XiError;

pub use alt_sums::{e_k0_alt_sum, e_k0_alt_sum_from};
pub use decrement::{qstar_row_expansion, DecrementRows, MAX_TABLE_N};
pub use gem::gem_k0_exact_pmf;
pub use limits::{k01_limit_tail, k01_limit_tails, k0_limit_tail, k0_limit_tails, LimitTails, TailValue};
pub use pmf::Pmf;
pub use recursions::{default_kstar_cap, k0_pmf, k_pmf, kstar_pmf, kstar_tail_direct, kstar_tail_direct_from, y_pmf};
pub use visits::{e_k0_dp, visit_probs, zn_pmf, VisitTable};

#[derive(Debug, Error)]
pub enum ExactError {
    #[error(transparent)]
    Xi(#[from] XiError),
    #[error(transparent)]
    Hp(#[from] HpError),
    #[error("n = {n} exceeds the supported table size {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not defined for this model: {0}")]
    Unsupported(String),
}
