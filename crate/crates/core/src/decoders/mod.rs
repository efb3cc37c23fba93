//! Detectors for `y = Hx + w` over a finite QAM lattice.
//!
//! Every detector consumes the same [`RealChannel`] (QR, `R̂`/`R_D` split
//! and condition number already cached) and returns a [`DecodeOutcome`]
//! whose residual is always recomputed as `‖y − Hx̂‖²`.

mod flops;
mod linear;
mod ml;
mod sphere;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use flops::{flops_mzf, flops_zf, projection_flops};
pub use linear::{
    decode_hybrid, decode_mzf, decode_zf, mzf_estimate, zf_estimate, zf_estimate_pinv,
};
pub use ml::{decode_ml_bruteforce, decode_ml_bruteforce_capped, DEFAULT_ML_CAP};
pub use sphere::{decode_sphere, SphereConfig, SphereMode};

use crate::model::{Constellation, ModelError, RealChannel, SymbolVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DecoderKind {
    #[serde(rename = "ZF")]
    Zf,
    #[serde(rename = "MZF")]
    Mzf,
    #[serde(rename = "HD")]
    Hd,
    #[serde(rename = "SD")]
    Sd,
    #[serde(rename = "ML")]
    Ml,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 5] = [Self::Zf, Self::Mzf, Self::Hd, Self::Sd, Self::Ml];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Zf => "ZF",
            Self::Mzf => "MZF",
            Self::Hd => "HD",
            Self::Sd => "SD",
            Self::Ml => "ML",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown decoder `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("received vector has length {got}, channel expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hybrid threshold must exceed 1, got {0}")]
    InvalidGamma(f64),
    #[error("invalid sphere configuration: {0}")]
    InvalidSphereConfig(String),
    #[error("no lattice point inside the search sphere")]
    SearchFailed,
    #[error("sphere search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
    #[error("exhaustive search over {points} points exceeds the cap of {cap}")]
    TooLarge { points: u128, cap: u128 },
}

impl From<crate::linalg::LinalgError> for DecodeError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        Self::Model(e.into())
    }
}

/// Result of one detection.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub symbols: SymbolVector,
    /// `‖y − Hx̂‖²`.
    pub residual: f64,
    /// Flops charged to this received vector.
    pub flops: u64,
    /// Flops charged once per channel realization (the hybrid decoder's
    /// condition-number computation); zero for the other detectors.
    pub setup_flops: u64,
    pub decoder: DecoderKind,
    /// For the hybrid decoder, the branch that produced the output.
    pub branch: Option<DecoderKind>,
    /// Tree nodes visited (sphere decoder only).
    pub nodes_visited: u64,
}

impl DecodeOutcome {
    fn new(
        decoder: DecoderKind,
        symbols: SymbolVector,
        y: &[f64],
        ch: &RealChannel,
        c: &Constellation,
        flops: u64,
    ) -> Self {
        let residual = ch.residual(y, &symbols.values(c));
        Self {
            symbols,
            residual,
            flops,
            setup_flops: 0,
            decoder,
            branch: None,
            nodes_visited: 0,
        }
    }

    /// Per-vector flops plus the per-channel setup cost.
    pub fn total_flops(&self) -> u64 {
        self.flops + self.setup_flops
    }
}

/// Parameters shared by the dispatching [`decode`] entry point.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSettings {
    pub gamma: f64,
    pub sphere: SphereConfig,
    pub ml_cap: u128,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self {
            gamma: 100.0,
            sphere: SphereConfig::default(),
            ml_cap: DEFAULT_ML_CAP,
        }
    }
}

pub fn decode(
    kind: DecoderKind,
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
    settings: &DetectorSettings,
) -> Result<DecodeOutcome, DecodeError> {
    match kind {
        DecoderKind::Zf => decode_zf(y, ch, c),
        DecoderKind::Mzf => decode_mzf(y, ch, c),
        DecoderKind::Hd => decode_hybrid(y, ch, c, settings.gamma),
        DecoderKind::Sd => decode_sphere(y, ch, c, &settings.sphere),
        DecoderKind::Ml => decode_ml_bruteforce_capped(y, ch, c, settings.ml_cap),
    }
}

fn check_len(y: &[f64], ch: &RealChannel) -> Result<(), DecodeError> {
    if y.len() != ch.n() {
        return Err(DecodeError::DimensionMismatch {
            expected: ch.n(),
            got: y.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in DecoderKind::ALL {
            assert_eq!(k.as_str().parse::<DecoderKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
        assert!("zz".parse::<DecoderKind>().is_err());
    }
}
