//! A laboratory for the Bernoulli sieve occupancy scheme.
//!
//! `n` balls are allocated to boxes `1, 2, ...` by stick-breaking: box `j`
//! captures each surviving ball independently with probability `ξ_j`, where
//! the `ξ_j` are iid on `(0, 1)`. The crate provides
//!
//! - [`xi_models`]: laws for `ξ`, their moment functionals and the
//!   classification that selects the limit regime,
//! - [`sieve_sim`]: exact Monte Carlo engines for the weak composition of box
//!   counts and for the renewal counting process behind it,
//! - [`exact_engine`]: finite-`n` laws from the Markov-chain recursions of
//!   the remaining-balls process,
//! - [`limit_laws`]: the limiting distributions and normalization schedules,
//! - [`stats_harness`]: goodness-of-fit machinery used to confront the three,
//! - [`suites`]: named verification suites bundling the acceptance checks.

pub mod exact_engine;
pub mod limit_laws;
pub mod numeric;
pub mod sieve_sim;
pub mod stats_harness;
pub mod suites;
pub mod xi_models;

pub use exact_engine::Pmf;
pub use numeric::ExtReal;
pub use sieve_sim::{RngStream, SieveStats, WeakComposition};
pub use xi_models::{LimitCase, XiModel};
