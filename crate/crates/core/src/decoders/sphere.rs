use serde::{Deserialize, Serialize};

use super::{check_len, projection_flops, DecodeError, DecodeOutcome, DecoderKind};
use crate::linalg::Matrix;
use crate::model::{Constellation, RealChannel, SymbolVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereMode {
    /// Radius starts at infinity and shrinks to every full path found.
    /// Always returns the ML point.
    Adaptive,
    /// Search only inside `‖y − Hx‖ < rho`.
    FixedRadius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereConfig {
    pub mode: SphereMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default = "default_budget")]
    pub node_budget: u64,
}

fn default_budget() -> u64 {
    10_000_000
}

impl Default for SphereConfig {
    fn default() -> Self {
        Self {
            mode: SphereMode::Adaptive,
            rho: None,
            node_budget: default_budget(),
        }
    }
}

impl SphereConfig {
    pub fn fixed(rho: f64) -> Self {
        Self {
            mode: SphereMode::FixedRadius,
            rho: Some(rho),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.node_budget == 0 {
            return Err(DecodeError::InvalidSphereConfig(
                "node_budget must be >= 1".into(),
            ));
        }
        match (self.mode, self.rho) {
            (SphereMode::FixedRadius, Some(r)) if r > 0.0 && r.is_finite() => Ok(()),
            (SphereMode::FixedRadius, _) => Err(DecodeError::InvalidSphereConfig(
                "fixed_radius mode needs a finite rho > 0".into(),
            )),
            (SphereMode::Adaptive, None) => Ok(()),
            (SphereMode::Adaptive, Some(_)) => Err(DecodeError::InvalidSphereConfig(
                "rho is only meaningful in fixed_radius mode".into(),
            )),
        }
    }
}

/// Depth-first Schnorr–Euchner search of `‖Qᵀy − Rx‖²`, last coordinate
/// first, children visited nearest-to-center first.
///
/// Flops: `2nm` for `Qᵀy`, then per tree level `2(m−1−k) + 2` for the
/// center and 3 per child metric evaluated.
pub fn decode_sphere(
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
    cfg: &SphereConfig,
) -> Result<DecodeOutcome, DecodeError> {
    check_len(y, ch)?;
    cfg.validate()?;
    let (n, m) = (ch.n(), ch.m());
    let q = &ch.qr().q;
    let z = q.tr_mul_vec(y);

    // Energy of y outside span(Q) adds to every candidate's residual.
    let y_energy: f64 = y.iter().map(|v| v * v).sum();
    let z_energy: f64 = z.iter().map(|v| v * v).sum();
    let outside = (y_energy - z_energy).max(0.0);

    let radius_sq = match cfg.mode {
        SphereMode::Adaptive => f64::INFINITY,
        SphereMode::FixedRadius => {
            let rho = cfg.rho.expect("validated");
            let r2 = rho * rho - outside;
            if r2 <= 0.0 {
                return Err(DecodeError::SearchFailed);
            }
            r2
        }
    };

    let mut search = Search {
        r: &ch.qr().r,
        z: &z,
        c,
        budget: cfg.node_budget,
        best_metric: radius_sq,
        best: None,
        current: vec![0; m],
        values: vec![0.0; m],
        nodes: 0,
        flops: projection_flops(n as u64, m as u64),
    };
    search.descend(m - 1, 0.0)?;
    let Search {
        best, nodes, flops, ..
    } = search;
    let symbols = SymbolVector::from_indices(best.ok_or(DecodeError::SearchFailed)?);
    let mut out = DecodeOutcome::new(DecoderKind::Sd, symbols, y, ch, c, flops);
    out.nodes_visited = nodes;
    Ok(out)
}

struct Search<'a> {
    r: &'a Matrix,
    z: &'a [f64],
    c: &'a Constellation,
    budget: u64,
    best_metric: f64,
    best: Option<Vec<u16>>,
    current: Vec<u16>,
    values: Vec<f64>,
    nodes: u64,
    flops: u64,
}

impl Search<'_> {
    fn descend(&mut self, k: usize, partial: f64) -> Result<(), DecodeError> {
        let m = self.values.len();
        let row = self.r.row(k);
        let interference: f64 = (k + 1..m).map(|j| row[j] * self.values[j]).sum();
        let rkk = row[k];
        let center = (self.z[k] - interference) / rkk;
        self.flops += 2 * (m - 1 - k) as u64 + 2;

        let levels = self.c.levels();
        for idx in ZigZag::new(levels, center, self.c.nearest_index(center)) {
            let d = rkk * (center - levels[idx]);
            let metric = partial + d * d;
            self.flops += 3;
            // Children come nearest-first, so the rest can only be worse.
            if metric >= self.best_metric {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(DecodeError::BudgetExceeded(self.budget));
            }
            self.current[k] = idx as u16;
            self.values[k] = levels[idx];
            if k == 0 {
                self.best_metric = metric;
                self.best = Some(self.current.clone());
            } else {
                self.descend(k - 1, metric)?;
            }
        }
        Ok(())
    }
}

/// Level indices in order of increasing distance from `center`, starting at
/// the nearest one.
struct ZigZag<'a> {
    levels: &'a [f64],
    center: f64,
    lo: isize,
    hi: usize,
    first: Option<usize>,
}

impl<'a> ZigZag<'a> {
    fn new(levels: &'a [f64], center: f64, nearest: usize) -> Self {
        Self {
            levels,
            center,
            lo: nearest as isize - 1,
            hi: nearest + 1,
            first: Some(nearest),
        }
    }
}

impl Iterator for ZigZag<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if let Some(f) = self.first.take() {
            return Some(f);
        }
        let lo_ok = self.lo >= 0;
        let hi_ok = self.hi < self.levels.len();
        let take_lo = match (lo_ok, hi_ok) {
            (false, false) => return None,
            (true, false) => true,
            (false, true) => false,
            (true, true) => {
                (self.center - self.levels[self.lo as usize])
                    <= (self.levels[self.hi] - self.center)
            }
        };
        if take_lo {
            self.lo -= 1;
            Some((self.lo + 1) as usize)
        } else {
            self.hi += 1;
            Some(self.hi - 1)
        }
    }
}
