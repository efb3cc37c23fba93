use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ModelError;
use crate::linalg::{
    self, condition_number, qr_factorize, split_r, svd, LinalgError, Matrix, QrFactors, RSplit,
};

/// N×M complex flat-fading channel, row-major, `N ≥ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexChannel {
    n_rx: usize,
    n_tx: usize,
    entries: Vec<Complex64>,
}

impl ComplexChannel {
    pub fn new(n_rx: usize, n_tx: usize, entries: Vec<Complex64>) -> Result<Self, ModelError> {
        if n_tx == 0 || n_rx < n_tx {
            return Err(ModelError::InvalidDimensions { n_rx, n_tx });
        }
        if entries.len() != n_rx * n_tx {
            return Err(ModelError::LengthMismatch {
                expected: n_rx * n_tx,
                got: entries.len(),
            });
        }
        if let Some(pos) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(ModelError::NonFinite(pos));
        }
        Ok(Self {
            n_rx,
            n_tx,
            entries,
        })
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n_tx + j]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_tx);
        (0..self.n_rx)
            .map(|i| (0..self.n_tx).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inverse of [`realify_channel`]: reads `Re` and `Im` from the left
    /// column blocks of a 2N×2M real matrix.
    fn from_real_blocks(h: &Matrix, n_rx: usize, n_tx: usize) -> Self {
        let entries = (0..n_rx)
            .flat_map(|i| (0..n_tx).map(move |j| Complex64::new(h[(i, j)], h[(i + n_rx, j)])))
            .collect();
        Self {
            n_rx,
            n_tx,
            entries,
        }
    }
}

/// Real expansion `[[Re H, -Im H], [Im H, Re H]]`.
pub fn realify_channel(hc: &ComplexChannel) -> Matrix {
    let (n, m) = (hc.n_rx, hc.n_tx);
    let mut h = Matrix::zeros(2 * n, 2 * m);
    for i in 0..n {
        for j in 0..m {
            let z = hc.get(i, j);
            h[(i, j)] = z.re;
            h[(i, j + m)] = -z.im;
            h[(i + n, j)] = z.im;
            h[(i + n, j + m)] = z.re;
        }
    }
    h
}

/// Stacks real parts, then imaginary parts.
pub fn realify_vector(v: &[Complex64]) -> Vec<f64> {
    v.iter()
        .map(|z| z.re)
        .chain(v.iter().map(|z| z.im))
        .collect()
}

/// I.i.d. `CN(0, 1)` entries: real and imaginary parts each have variance 1/2.
pub fn draw_rayleigh<R: Rng + ?Sized>(
    n_rx: usize,
    n_tx: usize,
    rng: &mut R,
) -> Result<ComplexChannel, ModelError> {
    if n_tx == 0 || n_rx < n_tx {
        return Err(ModelError::InvalidDimensions { n_rx, n_tx });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let entries = (0..n_rx * n_tx)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect();
    Ok(ComplexChannel {
        n_rx,
        n_tx,
        entries,
    })
}

/// Reshapes the singular values of `hc` to a geometric progression from
/// `σ₁` down to `σ₁/κ`, keeps both singular-vector sets, and rescales so the
/// Frobenius norm is unchanged.
///
/// Works on the real expansion, whose singular values are the complex ones
/// with doubled multiplicity; each degenerate pair gets the same target so
/// the result keeps the complex block structure.
pub fn force_condition(hc: &ComplexChannel, kappa: f64) -> Result<ComplexChannel, ModelError> {
    if !kappa.is_finite() || kappa < 1.0 {
        return Err(ModelError::InvalidKappa(kappa));
    }
    let m = hc.n_tx;
    let h = realify_channel(hc);
    let d = svd(&h)?;
    let smax = d.sigma[0];
    if let Some(k) = d.sigma.iter().position(|&s| s <= linalg::TOL_RANK * smax) {
        return Err(LinalgError::RankDeficient {
            pivot: k,
            magnitude: d.sigma[k],
        }
        .into());
    }
    if m == 1 && kappa != 1.0 {
        return Err(ModelError::ConditionUnreachable(kappa));
    }

    let target = |k: usize| {
        if m == 1 {
            smax
        } else {
            smax * kappa.powf(-(k as f64) / (m - 1) as f64)
        }
    };
    let mut sigma: Vec<f64> = (0..2 * m).map(|i| target(i / 2)).collect();
    let energy = sigma.iter().map(|s| s * s).sum::<f64>().sqrt();
    let gain = h.frobenius_norm() / energy;
    sigma.iter_mut().for_each(|s| *s *= gain);

    let us = d.u.matmul(&Matrix::from_diag(&sigma))?;
    let shaped = us.matmul(&d.v.transpose())?;
    Ok(ComplexChannel::from_real_blocks(&shaped, hc.n_rx, hc.n_tx))
}

/// `n` i.i.d. zero-mean Gaussians with standard deviation `sigma`.
pub fn draw_noise<R: Rng + ?Sized>(n: usize, sigma: f64, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Per-real-dimension noise standard deviation for a given SNR.
///
/// Total transmit power is 1 regardless of the antenna count (unit-energy
/// constellation, symbols scaled by `1/√M`), and `SNR = 1 / N₀` with
/// `N₀ = 2σ²` the variance of one complex noise sample.
pub fn sigma_for_snr(snr_db: f64) -> f64 {
    (0.5 * 10f64.powf(-snr_db / 10.0)).sqrt()
}

/// Real-expanded channel with everything the decoders need precomputed.
#[derive(Debug, Clone)]
pub struct RealChannel {
    h: Matrix,
    qr: QrFactors,
    split: RSplit,
    cond: f64,
    cond_flops: u64,
    pinv: Option<Matrix>,
}

impl RealChannel {
    pub fn new(h: Matrix) -> Result<Self, ModelError> {
        let qr = qr_factorize(&h)?;
        let split = split_r(&qr.r)?;
        let (cond, cond_flops) = linalg::svd::condition_number_counted(&h)?;
        Ok(Self {
            h,
            qr,
            split,
            cond,
            cond_flops,
            pinv: None,
        })
    }

    /// Real expansion of `hc` scaled by `gain` (the per-antenna amplitude).
    pub fn from_complex(hc: &ComplexChannel, gain: f64) -> Result<Self, ModelError> {
        Self::new(realify_channel(hc).scaled(gain))
    }

    /// Also caches the explicit pseudo-inverse `H⁺`.
    pub fn with_pseudo_inverse(mut self) -> Result<Self, ModelError> {
        self.pinv = Some(linalg::pseudo_inverse(&self.h)?);
        Ok(self)
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn qr(&self) -> &QrFactors {
        &self.qr
    }

    pub fn split(&self) -> &RSplit {
        &self.split
    }

    /// `cond(H)` in the 2-norm.
    pub fn cond(&self) -> f64 {
        self.cond
    }

    /// Flops spent by the SVD that produced [`Self::cond`].
    pub fn cond_flops(&self) -> u64 {
        self.cond_flops
    }

    pub fn pseudo_inverse(&self) -> Option<&Matrix> {
        self.pinv.as_ref()
    }

    /// Number of receive dimensions `n = 2N`.
    pub fn n(&self) -> usize {
        self.h.rows()
    }

    /// Number of transmit dimensions `m = 2M`.
    pub fn m(&self) -> usize {
        self.h.cols()
    }

    /// `‖y - Hx‖²`.
    pub fn residual(&self, y: &[f64], x: &[f64]) -> f64 {
        self.h
            .mul_vec(x)
            .iter()
            .zip(y)
            .map(|(hx, yi)| (yi - hx) * (yi - hx))
            .sum()
    }

    pub fn condition_of_h(&self) -> Result<f64, LinalgError> {
        condition_number(&self.h)
    }
}
