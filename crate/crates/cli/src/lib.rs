//! Experiment driver behind the `mzf` binary: config loading, result
//! files and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mzf_core::decoders::flops_zf;
use mzf_core::sim::{
    complexity_rows, run_ber_sweep, run_kappa_sweep, BerPoint, CondStudyConfig, CondStudyPoint,
    RunOptions, SimError, TrialConfig,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;
pub const BER_HEADER: [&str; 9] = [
    "snr_db",
    "decoder",
    "ber",
    "ber_lo",
    "ber_hi",
    "ser",
    "flops_mean",
    "time_ns_per_bit",
    "erasures",
];
pub const COND_HEADER: [&str; 4] = ["kappa_in", "mean_cond_rhat", "mean_cond_rdiag", "runs"];
pub const COMPLEXITY_HEADER: [&str; 8] = [
    "snr_db",
    "decoder",
    "flops_mean",
    "time_ns_per_bit",
    "time_ns_per_decode",
    "time_ns_stderr",
    "sd_nodes_mean",
    "setup_ns_per_channel",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Runtime(_) => 3,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::ConfigInvalid { .. } => Self::Config(e.to_string()),
            other => Self::Runtime(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

/// Global options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct GlobalOpts {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub quiet: bool,
}

impl GlobalOpts {
    fn run_options(&self) -> RunOptions {
        RunOptions {
            threads: self.threads,
        }
    }
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Reads and validates a BER / sweep config. Unknown keys are rejected.
pub fn parse_config(path: &Path) -> Result<TrialConfig, CliError> {
    let cfg: TrialConfig = load_json(path)?;
    cfg.validate()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

pub fn parse_cond_config(path: &Path) -> Result<CondStudyConfig, CliError> {
    let cfg: CondStudyConfig = load_json(path)?;
    cfg.validate()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

#[derive(Debug, Serialize)]
struct Conventions {
    snr_definition: &'static str,
    gray_map: &'static str,
    gamma: Option<f64>,
    conditioning_method: &'static str,
    sphere_failure: &'static str,
    time_ns_per_bit: &'static str,
}

#[derive(Debug, Serialize)]
struct RunManifest<'a, C: Serialize> {
    schema_version: u32,
    tool_version: &'static str,
    command: &'a str,
    master_seed: u64,
    timestamp: String,
    config_echo: &'a C,
    conventions: Conventions,
    outputs: Vec<&'a str>,
}

fn conventions(gamma: Option<f64>) -> Conventions {
    Conventions {
        snr_definition: "total transmit power 1 independent of M (unit-energy QAM, symbols scaled by 1/sqrt(M)); SNR = 1/N0 with N0 = 2*sigma^2 per complex noise sample",
        gray_map: "reflected binary Gray code per real dimension, lowest level 0...0",
        gamma,
        conditioning_method: "singular values replaced by a geometric progression from sigma_1 to sigma_1/kappa, singular vectors kept, Frobenius norm restored",
        sphere_failure: "fixed-radius search failures are erasures: every bit of the vector counts as an error",
        time_ns_per_bit: "empty unless the config sets timing = true",
    }
}

fn write_manifest<C: Serialize>(
    out_dir: &Path,
    command: &str,
    seed: u64,
    config: &C,
    gamma: Option<f64>,
    outputs: Vec<&str>,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        master_seed: seed,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        config_echo: config,
        conventions: conventions(gamma),
        outputs,
    };
    let path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| io_err(&path, e))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| io_err(&path, e))
}

fn prepare_dir(out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io_err(path, e))
}

/// Rows of `ber.csv` (or, with a leading kappa column, `ber_vs_kappa.csv`).
pub fn ber_rows(points: &[BerPoint], with_kappa: bool) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for p in points {
        for s in &p.stats {
            let (lo, hi) = s.ber_interval();
            let mut row = Vec::with_capacity(10);
            if with_kappa {
                row.push(p.kappa.to_string());
            }
            row.extend([
                p.snr_db.to_string(),
                s.decoder.to_string(),
                s.ber().to_string(),
                lo.to_string(),
                hi.to_string(),
                s.ser().to_string(),
                s.flops_mean().to_string(),
                if s.timed() {
                    s.time_ns_per_bit().to_string()
                } else {
                    String::new()
                },
                s.erasures.to_string(),
            ]);
            rows.push(row);
        }
    }
    rows
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn write_complexity(path: &Path, points: &[BerPoint]) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = complexity_rows(points)
        .iter()
        .map(|r| {
            vec![
                r.snr_db.to_string(),
                r.decoder.to_string(),
                r.flops_mean.to_string(),
                r.time_ns_per_bit.to_string(),
                r.time_ns_per_decode.to_string(),
                r.time_ns_stderr.to_string(),
                r.nodes_mean.to_string(),
                r.setup_ns_per_channel.to_string(),
            ]
        })
        .collect();
    write_csv(path, &COMPLEXITY_HEADER, &rows)
}

fn apply_seed(cfg: &mut TrialConfig, opts: &GlobalOpts) {
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
}

fn note(opts: &GlobalOpts, msg: impl AsRef<str>) {
    if !opts.quiet {
        let _ = writeln!(std::io::stderr(), "{}", msg.as_ref());
    }
}

/// `mzf ber`: BER against SNR. Writes `ber.csv`, `manifest.json`, and
/// `complexity.csv` when timing is enabled.
pub fn cmd_ber(
    config: &Path,
    out_dir: &Path,
    opts: &GlobalOpts,
) -> Result<Vec<BerPoint>, CliError> {
    let mut cfg = parse_config(config)?;
    apply_seed(&mut cfg, opts);
    note(
        opts,
        format!(
            "ber: {}x{} {}-QAM, P = {}, kappa = {}, {} SNR points x {} channels x {} trials",
            cfg.n_rx,
            cfg.n_tx,
            cfg.q,
            cfg.p_ill,
            cfg.kappa,
            cfg.snr_db.len(),
            cfg.channels_per_point,
            cfg.trials_per_point
        ),
    );
    let points = run_ber_sweep(&cfg, &opts.run_options())?;
    prepare_dir(out_dir)?;
    write_csv(
        &out_dir.join("ber.csv"),
        &BER_HEADER,
        &ber_rows(&points, false),
    )?;
    let mut outputs = vec!["ber.csv"];
    if cfg.timing {
        write_complexity(&out_dir.join("complexity.csv"), &points)?;
        outputs.push("complexity.csv");
    }
    write_manifest(out_dir, "ber", cfg.seed, &cfg, Some(cfg.gamma), outputs)?;
    note(opts, format!("wrote {}", out_dir.join("ber.csv").display()));
    Ok(points)
}

/// `mzf sweep-kappa`: BER against the imposed condition number at each SNR
/// of the grid. Writes `ber_vs_kappa.csv`.
pub fn cmd_sweep_kappa(
    config: &Path,
    out_dir: &Path,
    opts: &GlobalOpts,
) -> Result<Vec<BerPoint>, CliError> {
    let mut cfg = parse_config(config)?;
    apply_seed(&mut cfg, opts);
    note(
        opts,
        format!(
            "sweep-kappa: {}x{} {}-QAM, SNR {:?} dB, kappa {:?}",
            cfg.n_rx, cfg.n_tx, cfg.q, cfg.snr_db, cfg.kappa_grid
        ),
    );
    let points = run_kappa_sweep(&cfg, &opts.run_options())?;
    prepare_dir(out_dir)?;
    let mut header = vec!["kappa"];
    header.extend(BER_HEADER);
    write_csv(
        &out_dir.join("ber_vs_kappa.csv"),
        &header,
        &ber_rows(&points, true),
    )?;
    write_manifest(
        out_dir,
        "sweep-kappa",
        cfg.seed,
        &cfg,
        Some(cfg.gamma),
        vec!["ber_vs_kappa.csv"],
    )?;
    note(
        opts,
        format!("wrote {}", out_dir.join("ber_vs_kappa.csv").display()),
    );
    Ok(points)
}

pub fn cond_rows(points: &[CondStudyPoint]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|p| {
            vec![
                p.kappa_in.to_string(),
                p.mean_cond_rhat.to_string(),
                p.mean_cond_rdiag.to_string(),
                p.runs.to_string(),
            ]
        })
        .collect()
}

/// `mzf cond-study`: condition numbers of `R̂` and `R_D` against the
/// imposed `cond(H)`. Rows follow the config's `sizes` order, each size
/// covering the whole kappa grid.
pub fn cmd_cond_study(
    config: &Path,
    out_dir: &Path,
    opts: &GlobalOpts,
) -> Result<Vec<CondStudyPoint>, CliError> {
    let mut cfg = parse_cond_config(config)?;
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    note(
        opts,
        format!(
            "cond-study: sizes {:?}, kappa {:?}, {} runs each",
            cfg.sizes, cfg.kappa_grid, cfg.runs_per_point
        ),
    );
    let points = cfg.run(&opts.run_options())?;
    prepare_dir(out_dir)?;
    write_csv(
        &out_dir.join("cond_study.csv"),
        &COND_HEADER,
        &cond_rows(&points),
    )?;
    write_manifest(
        out_dir,
        "cond-study",
        cfg.seed,
        &cfg,
        None,
        vec!["cond_study.csv"],
    )?;
    if !opts.quiet {
        for p in &points {
            note(opts, format!(
                "  {}x{} kappa {:>8}: cond(R^) {:>12.3}  cond(R_D) {:>10.3}  ({} submultiplicativity violations)",
                p.n_rx, p.n_tx, p.kappa_in, p.mean_cond_rhat, p.mean_cond_rdiag,
                p.submultiplicative_violations
            ));
        }
    }
    Ok(points)
}

/// `mzf flops`: the closed-form costs for an n×m real system.
pub fn cmd_flops(n: u64, m: u64) -> Result<String, CliError> {
    if m == 0 || n < m {
        return Err(CliError::Config(format!(
            "need n >= m >= 1, got n = {n}, m = {m}"
        )));
    }
    let exact_zf = 2.0 * (n * m * m) as f64 - 2.0 / 3.0 * (m * m * m) as f64;
    let zf = flops_zf(n, m);
    let mzf = zf - m * m;
    Ok(format!(
        "n = {n}, m = {m}\nflops_zf  = {zf} (exact {exact_zf:.4})\nflops_mzf = {mzf} (exact {:.4})\n",
        exact_zf - (m * m) as f64
    ))
}

/// Directory holding the shipped figure presets.
pub fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets")
}
