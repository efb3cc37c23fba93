//! Browser bindings for the interactive demo page.
//!
//! Each export takes plain numbers or a JSON config and returns a JSON
//! string. The `*_json` functions hold the logic so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert errors. Seeds are
//! `u32` on the JS side to avoid `BigInt`.

use mzf_core::decoders::{mzf_estimate, zf_estimate};
use mzf_core::model::{
    draw_noise, draw_rayleigh, force_condition, sigma_for_snr, stream_rng, SymbolVector,
};
use mzf_core::sim::{run_ber_sweep, run_cond_study, RunOptions};
use mzf_core::{Constellation, RealChannel, TrialConfig};
use rand::Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound on decodes per call so the page stays responsive.
pub const MAX_DECODES: usize = 2_000_000;
pub const MAX_SCATTER: usize = 5_000;
pub const MAX_COND_RUNS: usize = 20_000;

#[derive(Serialize)]
struct Curve {
    decoder: String,
    snr_db: Vec<f64>,
    ber: Vec<f64>,
    ber_lo: Vec<f64>,
    ber_hi: Vec<f64>,
    flops_mean: Vec<f64>,
}

/// BER against SNR for a config in the CLI's JSON format. Timing is
/// always off.
pub fn ber_curve_json(config: &str) -> Result<String, String> {
    let mut cfg: TrialConfig = serde_json::from_str(config).map_err(|e| e.to_string())?;
    cfg.timing = false;
    cfg.validate().map_err(|e| e.to_string())?;
    let work =
        cfg.snr_db.len() * cfg.channels_per_point * cfg.trials_per_point * cfg.decoders.len();
    if work > MAX_DECODES {
        return Err(format!(
            "{work} decodes requested; the demo allows {MAX_DECODES}"
        ));
    }
    let points = run_ber_sweep(&cfg, &RunOptions::default()).map_err(|e| e.to_string())?;
    let curves: Vec<Curve> = cfg
        .decoders
        .iter()
        .map(|&d| {
            let stats: Vec<_> = points
                .iter()
                .map(|p| p.get(d).expect("configured"))
                .collect();
            Curve {
                decoder: d.to_string(),
                snr_db: points.iter().map(|p| p.snr_db).collect(),
                ber: stats.iter().map(|s| s.ber()).collect(),
                ber_lo: stats.iter().map(|s| s.ber_interval().0).collect(),
                ber_hi: stats.iter().map(|s| s.ber_interval().1).collect(),
                flops_mean: stats.iter().map(|s| s.flops_mean()).collect(),
            }
        })
        .collect();
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

/// Mean `cond(R̂)` and `cond(R_D)` over `runs` channels at each kappa.
pub fn cond_study_json(
    kappa_grid: &[f64],
    runs: usize,
    antennas: usize,
    seed: u64,
) -> Result<String, String> {
    if runs > MAX_COND_RUNS {
        return Err(format!("at most {MAX_COND_RUNS} runs per point"));
    }
    let pts =
        run_cond_study(kappa_grid, runs, (antennas, antennas), seed).map_err(|e| e.to_string())?;
    serde_json::to_string(&pts).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Scatter {
    cond: f64,
    levels: Vec<f64>,
    sent: Vec<[f64; 2]>,
    zf: Vec<[f64; 2]>,
    mzf: Vec<[f64; 2]>,
}

/// Unsliced ZF and MZF estimates of the first stream of a 2×2 16-QAM link
/// over one channel forced to `kappa`, for `count` noisy transmissions.
pub fn estimate_scatter_json(
    kappa: f64,
    snr_db: f64,
    count: usize,
    seed: u64,
) -> Result<String, String> {
    if count == 0 || count > MAX_SCATTER {
        return Err(format!("count must lie in 1..={MAX_SCATTER}"));
    }
    let c = Constellation::new(16).map_err(|e| e.to_string())?;
    let mut rng = stream_rng(seed, 0);
    let raw = draw_rayleigh(2, 2, &mut rng).map_err(|e| e.to_string())?;
    let hc = force_condition(&raw, kappa).map_err(|e| e.to_string())?;
    let ch = RealChannel::from_complex(&hc, std::f64::consts::FRAC_1_SQRT_2)
        .map_err(|e| e.to_string())?;
    let sigma = sigma_for_snr(snr_db);

    // Real layout is [Re x1, Re x2, Im x1, Im x2].
    let pick = |v: &[f64]| [v[0], v[2]];
    let mut out = Scatter {
        cond: ch.cond(),
        levels: c.levels().to_vec(),
        sent: Vec::with_capacity(count),
        zf: Vec::with_capacity(count),
        mzf: Vec::with_capacity(count),
    };
    for _ in 0..count {
        let idx = (0..4)
            .map(|_| rng.random_range(0..c.side() as u16))
            .collect();
        let x = SymbolVector::from_indices(idx).values(&c);
        let w = draw_noise(4, sigma, &mut rng);
        let y: Vec<f64> = ch
            .h()
            .mul_vec(&x)
            .iter()
            .zip(&w)
            .map(|(a, b)| a + b)
            .collect();
        out.sent.push(pick(&x));
        out.zf
            .push(pick(&zf_estimate(&y, &ch).map_err(|e| e.to_string())?));
        out.mzf
            .push(pick(&mzf_estimate(&y, &ch).map_err(|e| e.to_string())?));
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn ber_curve(config: &str) -> Result<String, JsError> {
    ber_curve_json(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cond_study(
    kappa_grid: Vec<f64>,
    runs: usize,
    antennas: usize,
    seed: u32,
) -> Result<String, JsError> {
    cond_study_json(&kappa_grid, runs, antennas, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn estimate_scatter(
    kappa: f64,
    snr_db: f64,
    count: usize,
    seed: u32,
) -> Result<String, JsError> {
    estimate_scatter_json(kappa, snr_db, count, seed.into()).map_err(|e| JsError::new(&e))
}
