use super::{LinalgError, Matrix, TOL_RANK};

/// Thin QR factors: `q` is n×m with orthonormal columns, `r` is m×m upper
/// triangular with a nonnegative diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QrFactors {
    pub q: Matrix,
    pub r: Matrix,
}

/// `R = R̂ · diag(r_diag)` with `R̂` unit upper triangular.
///
/// `R̂` keeps the cross-column coupling of `R`, the diagonal keeps the
/// per-column energy.
#[derive(Debug, Clone, PartialEq)]
pub struct RSplit {
    pub r_hat: Matrix,
    pub r_diag: Vec<f64>,
}

impl RSplit {
    pub fn reconstruct(&self) -> Matrix {
        self.r_hat
            .matmul(&Matrix::from_diag(&self.r_diag))
            .expect("square factors")
    }

    /// Condition number of the diagonal factor, `max|r_ii| / min|r_ii|`.
    pub fn diag_condition(&self) -> f64 {
        let (lo, hi) = self
            .r_diag
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| {
                (lo.min(d.abs()), hi.max(d.abs()))
            });
        hi / lo
    }
}

/// Householder QR of a tall matrix (rows ≥ cols) with thin `Q`.
///
/// The sign of each reflection is chosen for stability, then rows of `R`
/// and columns of `Q` are flipped so that `diag(R) ≥ 0`.
pub fn qr_factorize(h: &Matrix) -> Result<QrFactors, LinalgError> {
    let (n, m) = (h.rows(), h.cols());
    if n < m {
        return Err(LinalgError::Shape(format!(
            "QR needs rows >= cols, got {n}x{m}"
        )));
    }
    let threshold = TOL_RANK * h.frobenius_norm();
    let mut a = h.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(m);

    for j in 0..m {
        let norm = (j..n).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
        if norm <= threshold {
            return Err(LinalgError::RankDeficient {
                pivot: j,
                magnitude: norm,
            });
        }
        let alpha = if a[(j, j)] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|x| *x /= vnorm);
        }
        // A[j.., j..] -= 2 v (vᵀ A[j.., j..])
        for c in j..m {
            let proj: f64 = v.iter().enumerate().map(|(k, vk)| vk * a[(j + k, c)]).sum();
            for (k, vk) in v.iter().enumerate() {
                a[(j + k, c)] -= 2.0 * vk * proj;
            }
        }
        reflectors.push(v);
    }

    let mut r = Matrix::zeros(m, m);
    for i in 0..m {
        for c in i..m {
            r[(i, c)] = a[(i, c)];
        }
    }

    // Q = H_0 H_1 ... H_{m-1} applied to the first m columns of I.
    let mut q = Matrix::zeros(n, m);
    for i in 0..m {
        q[(i, i)] = 1.0;
    }
    for (j, v) in reflectors.iter().enumerate().rev() {
        for c in 0..m {
            let proj: f64 = v.iter().enumerate().map(|(k, vk)| vk * q[(j + k, c)]).sum();
            for (k, vk) in v.iter().enumerate() {
                q[(j + k, c)] -= 2.0 * vk * proj;
            }
        }
    }

    for i in 0..m {
        if r[(i, i)] < 0.0 {
            for c in i..m {
                r[(i, c)] = -r[(i, c)];
            }
            for row in 0..n {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    Ok(QrFactors { q, r })
}

/// Splits an upper-triangular `r` into `R̂ · R_D` with `r̂_ij = r_ij / r_jj`.
pub fn split_r(r: &Matrix) -> Result<RSplit, LinalgError> {
    let m = r.rows();
    if r.cols() != m {
        return Err(LinalgError::Shape(format!(
            "split_r needs a square matrix, got {m}x{}",
            r.cols()
        )));
    }
    if !r.is_upper_triangular() {
        return Err(LinalgError::Shape(
            "split_r needs an upper-triangular matrix".into(),
        ));
    }
    let r_diag = r.diagonal();
    check_diagonal(&r_diag, r.max_abs())?;
    let mut r_hat = Matrix::identity(m);
    for i in 0..m {
        for j in i + 1..m {
            r_hat[(i, j)] = r[(i, j)] / r_diag[j];
        }
    }
    Ok(RSplit { r_hat, r_diag })
}

/// Solves `r · x = b` for upper-triangular `r`.
///
/// Row `i` costs `2(m-1-i) + 1` flops, so the whole solve is exactly `m²`.
pub fn back_substitute(r: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let m = r.rows();
    if r.cols() != m || b.len() != m {
        return Err(LinalgError::Shape(format!(
            "back substitution needs square r and matching b, got {}x{} and {}",
            m,
            r.cols(),
            b.len()
        )));
    }
    check_diagonal(&r.diagonal(), r.max_abs())?;
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let row = r.row(i);
        let acc: f64 = (i + 1..m).map(|j| row[j] * x[j]).sum();
        x[i] = (b[i] - acc) / row[i];
    }
    Ok(x)
}

fn check_diagonal(diag: &[f64], scale: f64) -> Result<(), LinalgError> {
    let threshold = TOL_RANK * scale;
    match diag.iter().position(|d| d.abs() <= threshold) {
        Some(index) => Err(LinalgError::SingularDiagonal {
            index,
            value: diag[index],
        }),
        None => Ok(()),
    }
}
