use super::{check_len, DecodeError, DecodeOutcome, DecoderKind};
use crate::model::{Constellation, RealChannel, SymbolVector};

/// Largest lattice the exhaustive search will enumerate by default.
pub const DEFAULT_ML_CAP: u128 = 1 << 20;

pub fn decode_ml_bruteforce(
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
) -> Result<DecodeOutcome, DecodeError> {
    decode_ml_bruteforce_capped(y, ch, c, DEFAULT_ML_CAP)
}

/// Exhaustive minimizer of `‖y − Hx‖²` over every lattice point. Points are
/// visited in lexicographic order and only a strictly smaller metric
/// replaces the incumbent, so ties resolve to the smallest vector.
pub fn decode_ml_bruteforce_capped(
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
    cap: u128,
) -> Result<DecodeOutcome, DecodeError> {
    check_len(y, ch)?;
    let (n, m, side) = (ch.n(), ch.m(), c.side());
    let points = (side as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if points > cap {
        return Err(DecodeError::TooLarge { points, cap });
    }
    let levels = c.levels();

    let mut idx = vec![0u16; m];
    let mut best = idx.clone();
    let mut best_metric = f64::INFINITY;
    let mut x = vec![levels[0]; m];
    loop {
        let metric = ch.residual(y, &x);
        if metric < best_metric {
            best_metric = metric;
            best.copy_from_slice(&idx);
        }
        // Odometer with the last coordinate fastest.
        let mut k = m;
        loop {
            if k == 0 {
                let flops = points as u64 * (2 * n * m + 3 * n) as u64;
                return Ok(DecodeOutcome::new(
                    DecoderKind::Ml,
                    SymbolVector::from_indices(best),
                    y,
                    ch,
                    c,
                    flops,
                ));
            }
            k -= 1;
            if (idx[k] as usize) + 1 < side {
                idx[k] += 1;
                x[k] = levels[idx[k] as usize];
                break;
            }
            idx[k] = 0;
            x[k] = levels[0];
        }
    }
}
