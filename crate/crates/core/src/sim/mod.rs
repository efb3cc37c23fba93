//! Seeded Monte Carlo experiments: BER against SNR or condition number,
//! the `R̂`/`R_D` conditioning study, and flop / wall-time complexity.
//!
//! Work is split by channel realization. Channel `i` draws everything it
//! needs (fading, ill-conditioning coin, bits, noise) from
//! [`stream_rng`](crate::model::stream_rng)`(seed, i)`, and per-channel
//! counters are merged by integer addition, so results do not depend on
//! the worker count or scheduling order. The same channels, symbols and
//! unit-variance noise are reused at every sweep coordinate.

mod ber;
mod cond;
mod config;
mod stats;

pub use ber::{
    complexity_rows, run_ber_sweep, run_complexity_sweep, run_kappa_sweep, ComplexityRow,
    RunOptions,
};
pub use cond::{run_cond_study, CondStudyConfig, CondStudyPoint};
pub use config::{TrialConfig, DEFAULT_GAMMA};
pub use stats::{confidence_interval, intervals_overlap, BerPoint, DecoderStats};

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid config field `{field}`: {reason}")]
    ConfigInvalid { field: String, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl SimError {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Self::ConfigInvalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

/// Runs `f` on a pool with `threads` workers (the global pool when `None`).
#[cfg(feature = "parallel")]
pub(crate) fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, SimError> {
    match threads {
        None => Ok(f()),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| SimError::Pool(e.to_string())),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn with_pool<T: Send>(
    _threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, SimError> {
    Ok(f())
}

/// Ordered map over `0..count`, parallel when the feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T: Send>(count: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T: Send>(count: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..count).map(f).collect()
}
