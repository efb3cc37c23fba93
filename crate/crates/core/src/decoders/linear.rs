use super::{check_len, flops_mzf, flops_zf, DecodeError, DecodeOutcome, DecoderKind};
use crate::linalg::back_substitute;
use crate::model::{slice, Constellation, RealChannel};

/// Unsliced least-squares estimate from `R z = Qᵀy`.
pub fn zf_estimate(y: &[f64], ch: &RealChannel) -> Result<Vec<f64>, DecodeError> {
    check_len(y, ch)?;
    let qr = ch.qr();
    let z = qr.q.tr_mul_vec(y);
    Ok(back_substitute(&qr.r, &z)?)
}

/// Unsliced estimate `H⁺y` through the explicit pseudo-inverse. Uses the
/// channel's cached `H⁺` when present.
pub fn zf_estimate_pinv(y: &[f64], ch: &RealChannel) -> Result<Vec<f64>, DecodeError> {
    check_len(y, ch)?;
    match ch.pseudo_inverse() {
        Some(p) => Ok(p.mul_vec(y)),
        None => Ok(crate::linalg::pseudo_inverse(ch.h())?.mul_vec(y)),
    }
}

/// Unsliced estimate `R_D⁻¹ Qᵀ y`.
pub fn mzf_estimate(y: &[f64], ch: &RealChannel) -> Result<Vec<f64>, DecodeError> {
    check_len(y, ch)?;
    let z = ch.qr().q.tr_mul_vec(y);
    Ok(z.iter()
        .zip(&ch.split().r_diag)
        .map(|(zi, d)| zi / d)
        .collect())
}

pub fn decode_zf(
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
) -> Result<DecodeOutcome, DecodeError> {
    let est = zf_estimate(y, ch)?;
    let sym = slice(&est, c)?;
    let flops = flops_zf(ch.n() as u64, ch.m() as u64);
    Ok(DecodeOutcome::new(DecoderKind::Zf, sym, y, ch, c, flops))
}

pub fn decode_mzf(
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
) -> Result<DecodeOutcome, DecodeError> {
    let est = mzf_estimate(y, ch)?;
    let sym = slice(&est, c)?;
    let flops = flops_mzf(ch.n() as u64, ch.m() as u64);
    Ok(DecodeOutcome::new(DecoderKind::Mzf, sym, y, ch, c, flops))
}

/// ZF when `cond(H) ≤ γ`, MZF otherwise. The boundary case `cond(H) = γ`
/// goes to ZF.
pub fn decode_hybrid(
    y: &[f64],
    ch: &RealChannel,
    c: &Constellation,
    gamma: f64,
) -> Result<DecodeOutcome, DecodeError> {
    if gamma.is_nan() || gamma <= 1.0 {
        return Err(DecodeError::InvalidGamma(gamma));
    }
    let mut out = if ch.cond() <= gamma {
        decode_zf(y, ch, c)?
    } else {
        decode_mzf(y, ch, c)?
    };
    out.branch = Some(out.decoder);
    out.decoder = DecoderKind::Hd;
    out.setup_flops = ch.cond_flops();
    Ok(out)
}
