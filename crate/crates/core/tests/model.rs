use mzf_core::linalg::{condition_number, singular_values};
use mzf_core::model::{
    draw_noise, draw_rayleigh, force_condition, realify_channel, realify_vector, sigma_for_snr,
    stream_rng, ComplexChannel, Constellation,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn rayleigh_golden_values_seed_42() {
    let mut rng = stream_rng(42, 0);
    let h = draw_rayleigh(2, 2, &mut rng).unwrap();
    let z = h.get(0, 0);
    assert_eq!(z.re, 0.33798377491795095);
    assert_eq!(z.im, 0.9433303750765869);
}

#[test]
fn noise_golden_values_seed_42() {
    let w = draw_noise(4, 1.0, &mut stream_rng(42, 0));
    assert_eq!(
        w,
        [
            0.47798123835102174,
            1.3340706102318078,
            -0.21086668327103028,
            0.4763469238088213
        ]
    );
}

#[test]
fn rayleigh_entry_moments() {
    let mut rng = stream_rng(1, 0);
    let h = draw_rayleigh(1000, 100, &mut rng).unwrap();
    let n = h.entries().len() as f64;
    let power = h.entries().iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
    let var_re = h.entries().iter().map(|z| z.re * z.re).sum::<f64>() / n;
    let var_im = h.entries().iter().map(|z| z.im * z.im).sum::<f64>() / n;
    assert!((power - 1.0).abs() < 0.02, "E|h|^2 = {power}");
    assert!((var_re - 0.5).abs() < 0.01, "Var Re = {var_re}");
    assert!((var_im - 0.5).abs() < 0.01, "Var Im = {var_im}");
}

#[test]
fn noise_variance_matches_sigma() {
    let w = draw_noise(1_000_000, 1.0, &mut stream_rng(2, 0));
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / w.len() as f64;
    assert!((var - 1.0).abs() < 0.005, "variance {var}");
    assert!(mean.abs() < 0.005);

    // 2 sigma^2 = 10^(-snr/10)
    for snr in [-5.0, 0.0, 7.5, 20.0] {
        let s = sigma_for_snr(snr);
        assert!((2.0 * s * s - 10f64.powf(-snr / 10.0)).abs() < 1e-15);
    }
}

#[test]
fn constellation_energy_by_enumeration() {
    for q in [4u32, 16, 64, 256] {
        let c = Constellation::new(q).unwrap();
        let lv = c.levels();
        let energy: f64 = lv
            .iter()
            .flat_map(|a| lv.iter().map(move |b| a * a + b * b))
            .sum::<f64>()
            / q as f64;
        assert!((energy - 1.0).abs() < 1e-12, "q={q}: {energy}");
    }
    assert!(Constellation::new(8).is_err());
}

#[test]
fn gray_neighbours_differ_in_one_bit() {
    let c = Constellation::new(64).unwrap();
    for i in 1..c.side() {
        let d = c.gray_label(i) ^ c.gray_label(i - 1);
        assert_eq!(d.count_ones(), 1);
    }
}

#[test]
fn realified_spectrum_doubles_complex_spectrum() {
    for s in 0..50 {
        let hc = draw_rayleigh(4, 3, &mut stream_rng(3, s)).unwrap();
        let oracle = DMatrix::from_row_slice(4, 3, hc.entries());
        let mut want: Vec<f64> = oracle.singular_values().iter().copied().collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let got = singular_values(&realify_channel(&hc)).unwrap();
        for (k, w) in want.iter().enumerate() {
            assert!((got[2 * k] - w).abs() < 1e-10);
            assert!((got[2 * k + 1] - w).abs() < 1e-10);
        }
    }
}

#[test]
fn realified_product_matches_complex_product() {
    let hc = draw_rayleigh(3, 2, &mut stream_rng(4, 0)).unwrap();
    let x = [Complex64::new(0.3, -1.1), Complex64::new(-0.7, 0.2)];
    let direct = realify_vector(&hc.mul_vec(&x));
    let via_real = realify_channel(&hc).mul_vec(&realify_vector(&x));
    for (a, b) in direct.iter().zip(&via_real) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn forced_condition_hits_target_and_keeps_energy() {
    for s in 0..100 {
        let hc = draw_rayleigh(2, 2, &mut stream_rng(5, s)).unwrap();
        for kappa in [1.0, 10.0, 1e3, 1e4] {
            let forced = force_condition(&hc, kappa).unwrap();
            let cond = condition_number(&realify_channel(&forced)).unwrap();
            assert!((cond - kappa).abs() <= 1e-6 * kappa, "{cond} vs {kappa}");
            let (a, b) = (hc.frobenius_norm(), forced.frobenius_norm());
            assert!((a - b).abs() < 1e-10 * a);
        }
    }
}

#[test]
fn forced_condition_rejects_bad_input() {
    let hc = draw_rayleigh(2, 2, &mut stream_rng(6, 0)).unwrap();
    assert!(force_condition(&hc, 0.5).is_err());
    assert!(force_condition(&hc, f64::NAN).is_err());
    let single = ComplexChannel::new(2, 1, vec![Complex64::new(1.0, 0.0); 2]).unwrap();
    assert!(force_condition(&single, 1.0).is_ok());
    assert!(force_condition(&single, 10.0).is_err());
    let zero = ComplexChannel::new(2, 2, vec![Complex64::new(0.0, 0.0); 4]).unwrap();
    assert!(force_condition(&zero, 10.0).is_err());
}

#[test]
fn channel_dimensions_are_validated() {
    assert!(draw_rayleigh(1, 2, &mut stream_rng(0, 0)).is_err());
    assert!(ComplexChannel::new(2, 2, vec![Complex64::new(0.0, 0.0); 3]).is_err());
}
