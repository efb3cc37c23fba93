//! The MIMO signal model `y = Hx + w` and its real-valued expansion.

mod channel;
mod constellation;
mod rng;

pub use channel::{
    draw_noise, draw_rayleigh, force_condition, realify_channel, realify_vector, sigma_for_snr,
    ComplexChannel, RealChannel,
};
pub use constellation::{bits_to_symbols, slice, symbols_to_bits, Constellation, SymbolVector};
pub use rng::{stream_rng, SimRng};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unsupported QAM order {0} (expected 4, 16, 64 or 256)")]
    UnsupportedOrder(u32),
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error(
        "invalid channel dimensions: {n_rx} receive x {n_tx} transmit (need n_rx >= n_tx >= 1)"
    )]
    InvalidDimensions { n_rx: usize, n_tx: usize },
    #[error("target condition number must be finite and >= 1, got {0}")]
    InvalidKappa(f64),
    #[error("a single-stream channel always has condition number 1, cannot reach {0}")]
    ConditionUnreachable(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
