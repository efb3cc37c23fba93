use serde::{Deserialize, Serialize};

use super::{map_indices, with_pool, RunOptions, SimError};
use crate::linalg::{condition_number, qr_factorize, split_r};
use crate::model::{draw_rayleigh, force_condition, realify_channel, stream_rng, ModelError};

/// Relative slack for the per-run check `cond(R̂)·cond(R_D) ≥ cond(R)`,
/// which holds with equality in exact arithmetic for some inputs.
pub const SUBMULT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondStudyConfig {
    #[serde(default = "default_grid")]
    pub kappa_grid: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs_per_point: usize,
    /// Complex channel sizes as `[N, M]` pairs.
    #[serde(default = "default_sizes")]
    pub sizes: Vec<[usize; 2]>,
    #[serde(default)]
    pub seed: u64,
}

fn default_grid() -> Vec<f64> {
    vec![1.0, 10.0, 100.0, 1e3, 1e4]
}

fn default_runs() -> usize {
    10_000
}

fn default_sizes() -> Vec<[usize; 2]> {
    vec![[2, 2], [4, 4]]
}

impl Default for CondStudyConfig {
    fn default() -> Self {
        Self {
            kappa_grid: default_grid(),
            runs_per_point: default_runs(),
            sizes: default_sizes(),
            seed: 0,
        }
    }
}

impl CondStudyConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.kappa_grid.is_empty() || self.kappa_grid.iter().any(|k| !k.is_finite() || *k < 1.0)
        {
            return Err(SimError::invalid("kappa_grid", "needs finite values >= 1"));
        }
        if self.runs_per_point == 0 {
            return Err(SimError::invalid("runs_per_point", "must be >= 1"));
        }
        if self.sizes.is_empty() {
            return Err(SimError::invalid("sizes", "must not be empty"));
        }
        for &[n, m] in &self.sizes {
            if m == 0 || n < m {
                return Err(SimError::invalid(
                    "sizes",
                    format!("[{n}, {m}] needs N >= M >= 1"),
                ));
            }
            if m == 1 && self.kappa_grid.iter().any(|&k| k != 1.0) {
                return Err(SimError::invalid(
                    "sizes",
                    "M = 1 channels cannot be ill-conditioned",
                ));
            }
        }
        Ok(())
    }

    /// Every size in order, each over the whole kappa grid.
    pub fn run(&self, opts: &RunOptions) -> Result<Vec<CondStudyPoint>, SimError> {
        self.validate()?;
        let mut out = Vec::new();
        for &[n, m] in &self.sizes {
            out.extend(with_pool(opts.threads, || {
                run_cond_study(&self.kappa_grid, self.runs_per_point, (n, m), self.seed)
            })??);
        }
        Ok(out)
    }
}

/// Averaged condition numbers of the two factors of `R` at one target κ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondStudyPoint {
    pub kappa_in: f64,
    pub n_rx: usize,
    pub n_tx: usize,
    pub mean_cond_rhat: f64,
    pub mean_cond_rdiag: f64,
    pub mean_cond_h: f64,
    pub runs: usize,
    /// Runs where `cond(R̂)·cond(R_D) < cond(R)` beyond [`SUBMULT_SLACK`].
    pub submultiplicative_violations: usize,
}

struct RunSample {
    rhat: f64,
    rdiag: f64,
    h: f64,
    violates: bool,
}

/// For each κ: draw `runs` Rayleigh channels of size `(N, M)`, force their
/// condition number to κ, factor the real expansion and record
/// `cond(R̂)` and `cond(R_D)`. Run `r` always uses stream `r`, so every κ
/// sees the same underlying channels.
pub fn run_cond_study(
    kappa_grid: &[f64],
    runs: usize,
    size: (usize, usize),
    seed: u64,
) -> Result<Vec<CondStudyPoint>, SimError> {
    if runs == 0 {
        return Err(SimError::invalid("runs_per_point", "must be >= 1"));
    }
    let (n_rx, n_tx) = size;
    kappa_grid
        .iter()
        .map(|&kappa| {
            let samples = map_indices(runs as u64, |r| -> Result<RunSample, ModelError> {
                let mut rng = stream_rng(seed, r);
                let hc = force_condition(&draw_rayleigh(n_rx, n_tx, &mut rng)?, kappa)?;
                let h = realify_channel(&hc);
                let qr = qr_factorize(&h)?;
                let split = split_r(&qr.r)?;
                let rhat = condition_number(&split.r_hat)?;
                let rdiag = split.diag_condition();
                let cond_r = condition_number(&qr.r)?;
                Ok(RunSample {
                    rhat,
                    rdiag,
                    h: condition_number(&h)?,
                    violates: rhat * rdiag < cond_r * (1.0 - SUBMULT_SLACK),
                })
            });
            let samples: Vec<RunSample> = samples.into_iter().collect::<Result<_, _>>()?;
            let mean = |f: fn(&RunSample) -> f64| samples.iter().map(f).sum::<f64>() / runs as f64;
            Ok(CondStudyPoint {
                kappa_in: kappa,
                n_rx,
                n_tx,
                mean_cond_rhat: mean(|s| s.rhat),
                mean_cond_rdiag: mean(|s| s.rdiag),
                mean_cond_h: mean(|s| s.h),
                runs,
                submultiplicative_violations: samples.iter().filter(|s| s.violates).count(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_kappa_is_perfectly_conditioned() {
        let pts = run_cond_study(&[1.0], 200, (2, 2), 3).unwrap();
        let p = &pts[0];
        assert_eq!(p.runs, 200);
        assert!(p.mean_cond_rhat >= 1.0 && p.mean_cond_rhat < 1.0 + 1e-9);
        assert!(p.mean_cond_rdiag >= 1.0 && p.mean_cond_rdiag < 1.0 + 1e-9);
        assert_eq!(p.submultiplicative_violations, 0);
    }

    #[test]
    fn imposed_condition_is_measured() {
        let pts = run_cond_study(&[10.0, 1e3], 100, (4, 4), 1).unwrap();
        for p in &pts {
            assert!((p.mean_cond_h - p.kappa_in).abs() / p.kappa_in < 1e-6);
            assert!(p.mean_cond_rdiag >= 1.0 && p.mean_cond_rhat >= 1.0);
            assert_eq!(p.submultiplicative_violations, 0);
        }
    }

    #[test]
    fn config_grid_layout() {
        let cfg = CondStudyConfig {
            runs_per_point: 5,
            ..CondStudyConfig::default()
        };
        let pts = cfg.run(&RunOptions::default()).unwrap();
        assert_eq!(pts.len(), 10);
        assert_eq!((pts[0].n_rx, pts[9].n_rx), (2, 4));
        assert!(CondStudyConfig {
            runs_per_point: 0,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(CondStudyConfig {
            sizes: vec![[1, 2]],
            ..cfg
        }
        .validate()
        .is_err());
    }
}
