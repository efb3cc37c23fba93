use super::matrix::dot;
use super::{LinalgError, Matrix, MAX_SWEEPS, TOL_RANK};

/// Thin singular value decomposition `a = u · diag(sigma) · vᵀ`.
///
/// `flops` counts the floating-point work of the Jacobi iteration under a
/// simple model: a length-n dot product is 2n flops and a plane rotation
/// of two length-n columns is 6n flops.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
    pub flops: u64,
}

/// One-sided (Hestenes) Jacobi SVD of a matrix with rows ≥ cols.
pub fn svd(a: &Matrix) -> Result<Svd, LinalgError> {
    let (n, m) = (a.rows(), a.cols());
    if n < m {
        return Err(LinalgError::Shape(format!(
            "svd needs rows >= cols, got {n}x{m}"
        )));
    }
    jacobi(a, true)
}

/// Singular values in descending order. Wide matrices are transposed first.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>, LinalgError> {
    singular_values_counted(a).map(|(s, _)| s)
}

pub(crate) fn singular_values_counted(a: &Matrix) -> Result<(Vec<f64>, u64), LinalgError> {
    let res = if a.rows() >= a.cols() {
        jacobi(a, false)?
    } else {
        jacobi(&a.transpose(), false)?
    };
    Ok((res.sigma, res.flops))
}

/// 2-norm condition number `σ_max / σ_min`; `+∞` when `σ_min` is below the
/// rank threshold.
pub fn condition_number(a: &Matrix) -> Result<f64, LinalgError> {
    condition_number_counted(a).map(|(c, _)| c)
}

pub(crate) fn condition_number_counted(a: &Matrix) -> Result<(f64, u64), LinalgError> {
    if a.rows() < a.cols() {
        return Err(LinalgError::Shape(format!(
            "condition number needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.max_abs() < TOL_RANK {
        return Err(LinalgError::ZeroMatrix);
    }
    let (s, flops) = singular_values_counted(a)?;
    let (hi, lo) = (s[0], s[s.len() - 1]);
    let cond = if lo < TOL_RANK * hi {
        f64::INFINITY
    } else {
        hi / lo
    };
    // One division for the ratio.
    Ok((cond, flops + 1))
}

/// Moore-Penrose pseudo-inverse `V Σ⁻¹ Uᵀ` of a full-column-rank matrix.
pub fn pseudo_inverse(a: &Matrix) -> Result<Matrix, LinalgError> {
    let d = svd(a)?;
    let (n, m) = (a.rows(), a.cols());
    let smax = d.sigma[0];
    if let Some(k) = d.sigma.iter().position(|&s| s <= TOL_RANK * smax) {
        return Err(LinalgError::RankDeficient {
            pivot: k,
            magnitude: d.sigma[k],
        });
    }
    let mut pinv = Matrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            pinv[(i, j)] = (0..m).map(|k| d.v[(i, k)] * d.u[(j, k)] / d.sigma[k]).sum();
        }
    }
    Ok(pinv)
}

fn jacobi(a: &Matrix, want_vectors: bool) -> Result<Svd, LinalgError> {
    let (n, m) = (a.rows(), a.cols());
    // Column-major working copy: cols[j] is column j.
    let mut cols: Vec<Vec<f64>> = (0..m).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..m).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let (n64, m64) = (n as u64, m as u64);
    let mut flops = 0u64;

    // A rotation is skipped once |γ| ≤ ε·sqrt(αβ). This relative test is
    // stricter than |γ| < 1e-14·‖a‖²_F and keeps small singular values
    // accurate to high relative precision.
    const EPS: f64 = 1e-15;
    let mut converged = m == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                flops += 6 * n64;
                if gamma == 0.0 || gamma.abs() <= EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                flops += 12;
                rotate(&mut cols, p, q, c, s);
                flops += 6 * n64;
                if want_vectors {
                    rotate(&mut v, p, q, c, s);
                    flops += 6 * m64;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(LinalgError::NoConvergence(MAX_SWEEPS));
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    flops += m64 * (2 * n64 + 1);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();

    let (mut u, mut vm) = (Matrix::zeros(n, m), Matrix::zeros(m, m));
    if want_vectors {
        for (dst, &src) in order.iter().enumerate() {
            let s = norms[src];
            for i in 0..n {
                u[(i, dst)] = if s > 0.0 { cols[src][i] / s } else { 0.0 };
            }
            for i in 0..m {
                vm[(i, dst)] = v[src][i];
            }
        }
    }
    Ok(Svd {
        u,
        sigma,
        v: vm,
        flops,
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_permuted() {
        let s = singular_values(&Matrix::from_diag(&[3.0, 2.0, 1.0])).unwrap();
        assert_eq!(s, vec![3.0, 2.0, 1.0]);
        let a = Matrix::from_rows(&[&[0.0, 2.0], &[1.0, 0.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wide_matrix_is_transposed() {
        let a = Matrix::from_rows(&[&[3.0, 0.0, 0.0], &[0.0, 0.0, 4.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn condition_examples() {
        let c = condition_number(&Matrix::from_diag(&[10.0, 0.01])).unwrap();
        assert!((c - 1000.0).abs() < 1e-9);

        let a = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        // Eigenvalues of aᵀa are (3 ± √5)/2.
        let expected = ((3.0 + 5f64.sqrt()) / (3.0 - 5f64.sqrt())).sqrt();
        assert!((condition_number(&a).unwrap() - expected).abs() < 1e-12);
        assert!((expected - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);

        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rot = Matrix::from_rows(&[&[c, -s], &[s, c]]).unwrap();
        assert!((condition_number(&rot).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn condition_edge_cases() {
        assert_eq!(
            condition_number(&Matrix::zeros(2, 2)),
            Err(LinalgError::ZeroMatrix)
        );
        let singular = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(condition_number(&singular).unwrap(), f64::INFINITY);
    }

    #[test]
    fn svd_reconstructs_and_pinv_inverts() {
        let a = Matrix::from_rows(&[&[2.0, -1.0], &[0.5, 3.0], &[1.0, 1.0]]).unwrap();
        let d = svd(&a).unwrap();
        let us = d.u.matmul(&Matrix::from_diag(&d.sigma)).unwrap();
        let back = us.matmul(&d.v.transpose()).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-13);
        assert!(d.flops > 0);
        let p = pseudo_inverse(&a).unwrap();
        assert!(p.matmul(&a).unwrap().max_abs_diff(&Matrix::identity(2)) < 1e-13);
    }
}
