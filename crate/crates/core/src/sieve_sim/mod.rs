//! Monte Carlo engines for the sieve and its renewal walk.

mod composition;
pub mod replicates;
mod rng;
pub mod simulate;

pub use composition::{CompositionError, SieveStats, WeakComposition};
pub use replicates::{run_replicates, Method, Samples, SimError, Statistic};
pub use rng::{splitmix64, RngStream};
pub use simulate::{
    sample_exp_max, sample_exp_order_stat, simulate_composition, simulate_composition_walkpoints, simulate_kstar_fast,
    simulate_poissonized, simulate_renewal_count, simulate_undershoot, Undershoot, DEFAULT_K_CAP,
};
