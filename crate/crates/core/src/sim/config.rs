use serde::{Deserialize, Deserializer, Serialize};

use super::SimError;
use crate::decoders::{DecoderKind, SphereConfig, DEFAULT_ML_CAP};
use crate::model::Constellation;

pub const DEFAULT_GAMMA: f64 = 100.0;

/// One Monte Carlo scenario.
///
/// The JSON form uses the short names `M`, `N`, `q` and `P`; everything but
/// the antenna counts and QAM order has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    #[serde(rename = "M")]
    pub n_tx: usize,
    #[serde(rename = "N")]
    pub n_rx: usize,
    pub q: u32,
    /// SNR grid in dB. Accepts a list or `{"start", "stop", "step"}`.
    #[serde(default = "default_snr_grid", deserialize_with = "de_snr_grid")]
    pub snr_db: Vec<f64>,
    /// Fraction of channel realizations forced to `kappa`.
    #[serde(rename = "P", default)]
    pub p_ill: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    /// Condition numbers swept by `sweep-kappa`.
    #[serde(default = "default_kappa_grid")]
    pub kappa_grid: Vec<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_decoders")]
    pub decoders: Vec<DecoderKind>,
    #[serde(default = "default_trials")]
    pub trials_per_point: usize,
    #[serde(default = "default_channels")]
    pub channels_per_point: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sphere: SphereConfig,
    /// Measure wall time around each decode call.
    #[serde(default)]
    pub timing: bool,
}

fn default_snr_grid() -> Vec<f64> {
    (0..=10).map(|k| 2.0 * k as f64).collect()
}

fn default_kappa() -> f64 {
    1e3
}

fn default_kappa_grid() -> Vec<f64> {
    vec![1.0, 10.0, 100.0, 1e3, 1e4]
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

fn default_decoders() -> Vec<DecoderKind> {
    vec![
        DecoderKind::Zf,
        DecoderKind::Mzf,
        DecoderKind::Hd,
        DecoderKind::Sd,
    ]
}

fn default_trials() -> usize {
    100
}

fn default_channels() -> usize {
    1000
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

fn de_snr_grid<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    match GridSpec::deserialize(d)? {
        GridSpec::List(v) => Ok(v),
        GridSpec::Range { start, stop, step } => {
            if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
                return Err(serde::de::Error::custom(
                    "snr_db range needs finite start/stop and step > 0",
                ));
            }
            let count = ((stop - start) / step + 1e-9).floor();
            if !(0.0..=1e5).contains(&count) {
                return Err(serde::de::Error::custom(
                    "snr_db range is empty or too long",
                ));
            }
            Ok((0..=count as usize)
                .map(|k| start + step * k as f64)
                .collect())
        }
    }
}

impl TrialConfig {
    /// Defaults for everything except the antenna counts and QAM order.
    pub fn new(n_tx: usize, n_rx: usize, q: u32) -> Self {
        Self {
            n_tx,
            n_rx,
            q,
            snr_db: default_snr_grid(),
            p_ill: 0.0,
            kappa: default_kappa(),
            kappa_grid: default_kappa_grid(),
            gamma: default_gamma(),
            decoders: default_decoders(),
            trials_per_point: default_trials(),
            channels_per_point: default_channels(),
            seed: 0,
            sphere: SphereConfig::default(),
            timing: false,
        }
    }

    pub fn constellation(&self) -> Result<Constellation, SimError> {
        Constellation::new(self.q).map_err(|e| SimError::invalid("q", e.to_string()))
    }

    /// Bits carried by one transmitted vector.
    pub fn bits_per_vector(&self) -> Result<usize, SimError> {
        Ok(2 * self.n_tx * self.constellation()?.bits_per_pam() as usize)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_tx == 0 {
            return Err(SimError::invalid("M", "must be >= 1"));
        }
        if self.n_rx < self.n_tx {
            return Err(SimError::invalid(
                "N",
                format!("must be >= M ({})", self.n_tx),
            ));
        }
        let c = self.constellation()?;
        check_grid("snr_db", &self.snr_db, f64::NEG_INFINITY)?;
        if !(0.0..=1.0).contains(&self.p_ill) {
            return Err(SimError::invalid(
                "P",
                format!("must lie in [0, 1], got {}", self.p_ill),
            ));
        }
        if !self.kappa.is_finite() || self.kappa < 1.0 {
            return Err(SimError::invalid(
                "kappa",
                format!("must be finite and >= 1, got {}", self.kappa),
            ));
        }
        check_grid("kappa_grid", &self.kappa_grid, 1.0)?;
        if self.n_tx == 1 && (self.kappa != 1.0 || self.kappa_grid.iter().any(|&k| k != 1.0)) {
            return Err(SimError::invalid(
                "kappa",
                "a single transmit antenna cannot be ill-conditioned; use kappa = 1",
            ));
        }
        if !self.gamma.is_finite() || self.gamma <= 1.0 {
            return Err(SimError::invalid(
                "gamma",
                format!("must be finite and > 1, got {}", self.gamma),
            ));
        }
        if self.decoders.is_empty() {
            return Err(SimError::invalid(
                "decoders",
                "at least one decoder is required",
            ));
        }
        for (i, d) in self.decoders.iter().enumerate() {
            if self.decoders[..i].contains(d) {
                return Err(SimError::invalid("decoders", format!("{d} listed twice")));
            }
        }
        if self.decoders.contains(&DecoderKind::Ml) {
            let points = (c.side() as u128).checked_pow(2 * self.n_tx as u32);
            if points.is_none_or(|p| p > DEFAULT_ML_CAP) {
                return Err(SimError::invalid(
                    "decoders",
                    format!("ML enumeration of q^M points exceeds the cap of {DEFAULT_ML_CAP}"),
                ));
            }
        }
        if self.trials_per_point == 0 {
            return Err(SimError::invalid("trials_per_point", "must be >= 1"));
        }
        if self.channels_per_point == 0 {
            return Err(SimError::invalid("channels_per_point", "must be >= 1"));
        }
        self.sphere
            .validate()
            .map_err(|e| SimError::invalid("sphere", e.to_string()))?;
        Ok(())
    }
}

fn check_grid(field: &str, grid: &[f64], min: f64) -> Result<(), SimError> {
    if grid.is_empty() {
        return Err(SimError::invalid(field, "must not be empty"));
    }
    if grid.iter().any(|v| !v.is_finite() || *v < min) {
        return Err(SimError::invalid(
            field,
            format!("values must be finite and >= {min}"),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::invalid(field, "must be strictly increasing"));
    }
    Ok(())
}
