//! Closed-form flop counts for the linear detectors.
//!
//! `flops_zf = 2nm² − (2/3)m³` and `flops_mzf = flops_zf − m²`, where the
//! `m²` term is the back substitution that the diagonal solve avoids. The
//! fractional term is kept exact as `(6nm² − 2m³)/3` and rounded to the
//! nearest integer only at the end.

pub fn flops_zf(n: u64, m: u64) -> u64 {
    assert!(n >= m && m >= 1, "need n >= m >= 1");
    let thirds = 6 * n * m * m - 2 * m * m * m;
    // Round-half-up of thirds/3; the remainder is never exactly one half.
    (thirds + 1) / 3
}

pub fn flops_mzf(n: u64, m: u64) -> u64 {
    flops_zf(n, m) - m * m
}

/// Cost of forming `Qᵀy` for an n×m `Q`.
pub fn projection_flops(n: u64, m: u64) -> u64 {
    2 * n * m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_complex_mimo() {
        assert_eq!(flops_zf(4, 4), 85);
        assert_eq!(flops_mzf(4, 4), 69);
    }

    #[test]
    fn four_by_four_complex_mimo() {
        assert_eq!(flops_zf(8, 8), 683);
        assert_eq!(flops_mzf(8, 8), 683 - 64);
    }

    #[test]
    fn rounding_matches_exact_rational() {
        for m in 1..40u64 {
            for n in m..m + 5 {
                let exact = 2.0 * (n * m * m) as f64 - 2.0 / 3.0 * (m * m * m) as f64;
                assert_eq!(flops_zf(n, m), exact.round() as u64);
                assert_eq!(flops_zf(n, m) - flops_mzf(n, m), m * m);
                assert!(flops_mzf(n, m) < flops_zf(n, m));
            }
        }
    }
}
