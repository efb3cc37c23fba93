use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use super::{map_indices, with_pool, BerPoint, DecoderStats, SimError, TrialConfig};
use crate::decoders::{decode, DecodeOutcome, DecoderKind, DetectorSettings};
use crate::model::{
    bits_to_symbols, draw_noise, draw_rayleigh, force_condition, sigma_for_snr, stream_rng,
    symbols_to_bits, Constellation, ModelError, RealChannel, SymbolVector,
};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// BER against SNR at the configured `kappa`.
pub fn run_ber_sweep(cfg: &TrialConfig, opts: &RunOptions) -> Result<Vec<BerPoint>, SimError> {
    cfg.validate()?;
    let coords = cfg.snr_db.iter().map(|&s| (s, cfg.kappa)).collect();
    run_points(cfg, coords, opts)
}

/// BER against the forced condition number, for every SNR in the grid
/// (SNR-major order).
pub fn run_kappa_sweep(cfg: &TrialConfig, opts: &RunOptions) -> Result<Vec<BerPoint>, SimError> {
    cfg.validate()?;
    let coords = cfg
        .snr_db
        .iter()
        .flat_map(|&s| cfg.kappa_grid.iter().map(move |&k| (s, k)))
        .collect();
    run_points(cfg, coords, opts)
}

/// Mean cost per decoder and SNR point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityRow {
    pub snr_db: f64,
    pub decoder: DecoderKind,
    pub flops_mean: f64,
    pub time_ns_per_bit: f64,
    pub time_ns_per_decode: f64,
    pub time_ns_stderr: f64,
    pub nodes_mean: f64,
    /// Mean wall time to build one channel (QR, split, condition number).
    pub setup_ns_per_channel: f64,
}

/// Runs the SNR sweep with timing enabled and reduces it to cost tables.
pub fn run_complexity_sweep(
    cfg: &TrialConfig,
    opts: &RunOptions,
) -> Result<Vec<ComplexityRow>, SimError> {
    let cfg = TrialConfig {
        timing: true,
        ..cfg.clone()
    };
    Ok(complexity_rows(&run_ber_sweep(&cfg, opts)?))
}

pub fn complexity_rows(points: &[BerPoint]) -> Vec<ComplexityRow> {
    points
        .iter()
        .flat_map(|p| {
            let setup = p.setup_time_ns as f64 / p.channels.max(1) as f64;
            p.stats.iter().map(move |s| ComplexityRow {
                snr_db: p.snr_db,
                decoder: s.decoder,
                flops_mean: s.flops_mean(),
                time_ns_per_bit: s.time_ns_per_bit(),
                time_ns_per_decode: s.time_ns_per_decode(),
                time_ns_stderr: s.time_ns_stderr(),
                nodes_mean: s.nodes_mean(),
                setup_ns_per_channel: setup,
            })
        })
        .collect()
}

fn run_points(
    cfg: &TrialConfig,
    coords: Vec<(f64, f64)>,
    opts: &RunOptions,
) -> Result<Vec<BerPoint>, SimError> {
    let constellation = cfg.constellation()?;
    let settings = DetectorSettings {
        gamma: cfg.gamma,
        sphere: cfg.sphere.clone(),
        ..DetectorSettings::default()
    };
    let per_channel = with_pool(opts.threads, || {
        map_indices(cfg.channels_per_point as u64, |idx| {
            simulate_channel(cfg, &constellation, &settings, &coords, idx)
        })
    })?;

    let mut totals: Vec<BerPoint> = coords
        .iter()
        .map(|&(s, k)| BerPoint::empty(s, k, &cfg.decoders))
        .collect();
    for points in &per_channel {
        for (t, p) in totals.iter_mut().zip(points) {
            t.merge(p);
        }
    }
    Ok(totals)
}

struct Trial {
    bits: Vec<u8>,
    symbols: SymbolVector,
    x: Vec<f64>,
    unit_noise: Vec<f64>,
}

fn simulate_channel(
    cfg: &TrialConfig,
    c: &Constellation,
    settings: &DetectorSettings,
    coords: &[(f64, f64)],
    idx: u64,
) -> Vec<BerPoint> {
    let mut rng = stream_rng(cfg.seed, idx);
    let raw = draw_rayleigh(cfg.n_rx, cfg.n_tx, &mut rng).expect("validated dimensions");
    let forced = rng.random_bool(cfg.p_ill);
    let (n, m) = (2 * cfg.n_rx, 2 * cfg.n_tx);
    let nbits = m * c.bits_per_pam() as usize;
    let trials: Vec<Trial> = (0..cfg.trials_per_point)
        .map(|_| {
            let bits: Vec<u8> = (0..nbits).map(|_| u8::from(rng.random::<bool>())).collect();
            let symbols = bits_to_symbols(&bits, c, m).expect("bit count matches");
            let x = symbols.values(c);
            let unit_noise = draw_noise(n, 1.0, &mut rng);
            Trial {
                bits,
                symbols,
                x,
                unit_noise,
            }
        })
        .collect();

    let gain = 1.0 / (cfg.n_tx as f64).sqrt();
    let build = |kappa: f64| -> (Result<RealChannel, ModelError>, u128) {
        let start = cfg.timing.then(Instant::now);
        let ch = if forced {
            force_condition(&raw, kappa).and_then(|h| RealChannel::from_complex(&h, gain))
        } else {
            RealChannel::from_complex(&raw, gain)
        };
        (ch, start.map_or(0, |s| s.elapsed().as_nanos()))
    };
    let mut raw_channel: Option<(Result<RealChannel, ModelError>, u128)> = None;

    coords
        .iter()
        .map(|&(snr_db, kappa)| {
            let mut point = BerPoint::empty(snr_db, kappa, &cfg.decoders);
            point.channels = 1;
            point.forced_channels = u64::from(forced);
            let built;
            let (channel, setup_ns) = if forced {
                built = build(kappa);
                (&built.0, built.1)
            } else {
                let cached = raw_channel.get_or_insert_with(|| build(kappa));
                (&cached.0, cached.1)
            };
            point.setup_time_ns = setup_ns;
            let sigma = sigma_for_snr(snr_db);
            for (t, trial) in trials.iter().enumerate() {
                let Ok(ch) = channel else {
                    point
                        .stats
                        .iter_mut()
                        .for_each(|s| record_erasure(s, nbits, cfg.n_tx));
                    continue;
                };
                let y: Vec<f64> = ch
                    .h()
                    .mul_vec(&trial.x)
                    .iter()
                    .zip(&trial.unit_noise)
                    .map(|(hx, w)| hx + sigma * w)
                    .collect();
                for stats in point.stats.iter_mut() {
                    let start = cfg.timing.then(Instant::now);
                    let result = decode(stats.decoder, &y, ch, c, settings);
                    if let Some(s) = start {
                        let ns = s.elapsed().as_nanos();
                        stats.wall_time_ns += ns;
                        stats.wall_time_sq_ns2 += ns * ns;
                        stats.timed_decodes += 1;
                    }
                    match result {
                        Ok(out) => record(stats, &out, trial, c, cfg.n_tx, t == 0),
                        Err(_) => record_erasure(stats, nbits, cfg.n_tx),
                    }
                }
            }
            point
        })
        .collect()
}

fn record(
    stats: &mut DecoderStats,
    out: &DecodeOutcome,
    trial: &Trial,
    c: &Constellation,
    n_tx: usize,
    first_on_channel: bool,
) {
    let bits = symbols_to_bits(&out.symbols, c);
    let bit_errors = bits.iter().zip(&trial.bits).filter(|(a, b)| a != b).count();
    let (got, sent) = (out.symbols.indices(), trial.symbols.indices());
    let symbol_errors = (0..n_tx)
        .filter(|&j| got[j] != sent[j] || got[j + n_tx] != sent[j + n_tx])
        .count();
    stats.bit_errors += bit_errors as u64;
    stats.bits_total += bits.len() as u64;
    stats.symbol_errors += symbol_errors as u64;
    stats.symbols_total += n_tx as u64;
    stats.vectors_total += 1;
    stats.flops_total += out.flops;
    if first_on_channel {
        stats.flops_total += out.setup_flops;
    }
    stats.sd_nodes_visited += out.nodes_visited;
}

/// A failed decode counts every bit and symbol of the vector as wrong.
fn record_erasure(stats: &mut DecoderStats, nbits: usize, n_tx: usize) {
    stats.bit_errors += nbits as u64;
    stats.bits_total += nbits as u64;
    stats.symbol_errors += n_tx as u64;
    stats.symbols_total += n_tx as u64;
    stats.vectors_total += 1;
    stats.erasures += 1;
}
