use mzf_core::decoders::DecoderKind;
use mzf_core::sim::{
    confidence_interval, intervals_overlap, run_ber_sweep, run_cond_study, run_kappa_sweep,
    RunOptions, TrialConfig,
};

fn small(decoders: Vec<DecoderKind>) -> TrialConfig {
    TrialConfig {
        snr_db: vec![0.0, 10.0, 20.0],
        decoders,
        trials_per_point: 20,
        channels_per_point: 200,
        seed: 99,
        ..TrialConfig::new(2, 2, 16)
    }
}

fn threads(n: usize) -> RunOptions {
    RunOptions { threads: Some(n) }
}

#[test]
fn forced_fraction_tracks_mixing_probability() {
    for p in [0.1, 0.5, 0.9] {
        let cfg = TrialConfig {
            p_ill: p,
            snr_db: vec![10.0],
            trials_per_point: 1,
            channels_per_point: 10_000,
            decoders: vec![DecoderKind::Zf],
            ..TrialConfig::new(2, 2, 4)
        };
        let pts = run_ber_sweep(&cfg, &RunOptions::default()).unwrap();
        let n = pts[0].channels as f64;
        let frac = pts[0].forced_channels as f64 / n;
        let se = (p * (1.0 - p) / n).sqrt();
        assert!((frac - p).abs() <= 3.0 * se, "P={p}: got {frac}");
    }
}

#[test]
fn sphere_and_exhaustive_counters_agree() {
    let pts = run_ber_sweep(
        &small(vec![DecoderKind::Sd, DecoderKind::Ml]),
        &RunOptions::default(),
    )
    .unwrap();
    for p in &pts {
        let (sd, ml) = (
            p.get(DecoderKind::Sd).unwrap(),
            p.get(DecoderKind::Ml).unwrap(),
        );
        assert_eq!(sd.bit_errors, ml.bit_errors);
        assert_eq!(sd.symbol_errors, ml.symbol_errors);
        assert_eq!(sd.erasures, 0);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = TrialConfig {
        p_ill: 0.5,
        ..small(DecoderKind::ALL.to_vec())
    };
    let a = run_ber_sweep(&cfg, &threads(1)).unwrap();
    let b = run_ber_sweep(&cfg, &threads(4)).unwrap();
    assert_eq!(a, b);
    let c = run_ber_sweep(&TrialConfig { seed: 100, ..cfg }, &threads(1)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn hybrid_degenerates_to_its_branches() {
    let base = TrialConfig {
        p_ill: 0.5,
        ..small(vec![DecoderKind::Zf, DecoderKind::Mzf, DecoderKind::Hd])
    };
    let huge = run_ber_sweep(
        &TrialConfig {
            gamma: 1e300,
            ..base.clone()
        },
        &threads(1),
    )
    .unwrap();
    for p in &huge {
        let (zf, hd) = (
            p.get(DecoderKind::Zf).unwrap(),
            p.get(DecoderKind::Hd).unwrap(),
        );
        assert_eq!(zf.bit_errors, hd.bit_errors);
    }
    // Every non-forced channel has cond > 1 almost surely.
    let tiny = run_ber_sweep(
        &TrialConfig {
            gamma: 1.0 + 1e-12,
            ..base
        },
        &threads(1),
    )
    .unwrap();
    for p in &tiny {
        let (mzf, hd) = (
            p.get(DecoderKind::Mzf).unwrap(),
            p.get(DecoderKind::Hd).unwrap(),
        );
        assert_eq!(mzf.bit_errors, hd.bit_errors);
    }
}

#[test]
fn bit_accounting_is_complete() {
    let cfg = small(vec![DecoderKind::Zf, DecoderKind::Sd]);
    for p in run_ber_sweep(&cfg, &threads(1)).unwrap() {
        for s in &p.stats {
            assert_eq!(s.bits_total, 200 * 20 * 2 * 4);
            assert_eq!(s.symbols_total, 200 * 20 * 2);
            assert_eq!(s.vectors_total, 200 * 20);
            assert!(s.bit_errors <= s.bits_total);
        }
    }
}

#[test]
fn ber_falls_with_snr_on_benign_channels() {
    let cfg = small(vec![DecoderKind::Zf, DecoderKind::Sd]);
    let pts = run_ber_sweep(&cfg, &threads(1)).unwrap();
    for d in [DecoderKind::Zf, DecoderKind::Sd] {
        let ber: Vec<f64> = pts.iter().map(|p| p.get(d).unwrap().ber()).collect();
        assert!(ber[0] > ber[1] && ber[1] > ber[2], "{d}: {ber:?}");
    }
}

#[test]
fn kappa_sweep_is_snr_major() {
    let cfg = TrialConfig {
        p_ill: 1.0,
        snr_db: vec![5.0, 15.0],
        kappa_grid: vec![1.0, 100.0, 1e4],
        channels_per_point: 50,
        trials_per_point: 5,
        ..TrialConfig::new(2, 2, 16)
    };
    let pts = run_kappa_sweep(&cfg, &threads(1)).unwrap();
    let coords: Vec<(f64, f64)> = pts.iter().map(|p| (p.snr_db, p.kappa)).collect();
    assert_eq!(
        coords,
        [
            (5.0, 1.0),
            (5.0, 100.0),
            (5.0, 1e4),
            (15.0, 1.0),
            (15.0, 100.0),
            (15.0, 1e4)
        ]
    );
    // At kappa = 1 every column is orthogonal, so ZF and MZF coincide.
    for p in pts.iter().filter(|p| p.kappa == 1.0) {
        assert_eq!(
            p.get(DecoderKind::Zf).unwrap().bit_errors,
            p.get(DecoderKind::Mzf).unwrap().bit_errors
        );
    }
}

#[test]
fn invalid_configs_name_the_field() {
    let cases: Vec<(TrialConfig, &str)> = vec![
        (
            TrialConfig {
                p_ill: 1.5,
                ..TrialConfig::new(2, 2, 16)
            },
            "P",
        ),
        (
            TrialConfig {
                decoders: vec![],
                ..TrialConfig::new(2, 2, 16)
            },
            "decoders",
        ),
        (
            TrialConfig {
                gamma: 0.5,
                ..TrialConfig::new(2, 2, 16)
            },
            "gamma",
        ),
        (TrialConfig::new(2, 1, 16), "N"),
        (TrialConfig::new(2, 2, 8), "q"),
        (
            TrialConfig {
                kappa: 0.1,
                ..TrialConfig::new(2, 2, 16)
            },
            "kappa",
        ),
        (
            TrialConfig {
                snr_db: vec![],
                ..TrialConfig::new(2, 2, 16)
            },
            "snr_db",
        ),
    ];
    for (cfg, field) in cases {
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains(field), "{field}: {err}");
    }
}

#[test]
fn config_json_round_trip_and_grid_forms() {
    let cfg = TrialConfig {
        p_ill: 0.5,
        seed: 3,
        ..TrialConfig::new(2, 2, 16)
    };
    let back: TrialConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(cfg, back);

    let ranged: TrialConfig =
        serde_json::from_str(r#"{"M":2,"N":2,"q":16,"snr_db":{"start":0,"stop":20,"step":5}}"#)
            .unwrap();
    assert_eq!(ranged.snr_db, [0.0, 5.0, 10.0, 15.0, 20.0]);
    assert!(serde_json::from_str::<TrialConfig>(r#"{"M":2,"N":2,"q":16,"gama":3}"#).is_err());
}

#[test]
fn wilson_interval_behaviour() {
    let (lo, hi) = confidence_interval(0, 1000);
    assert_eq!(lo, 0.0);
    assert!(hi > 0.0 && hi < 0.01);
    let (lo, hi) = confidence_interval(500, 1000);
    assert!(lo < 0.5 && hi > 0.5);
    assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    assert!(intervals_overlap((0.1, 0.2), (0.2, 0.3)));
    assert!(!intervals_overlap((0.1, 0.2), (0.21, 0.3)));
}

#[test]
fn cond_study_respects_submultiplicativity() {
    let pts = run_cond_study(&[1.0, 100.0, 1e4], 500, (2, 2), 1).unwrap();
    for p in &pts {
        assert_eq!(p.submultiplicative_violations, 0);
        assert!((p.mean_cond_h - p.kappa_in).abs() <= 1e-6 * p.kappa_in);
        assert!(p.mean_cond_rdiag <= p.kappa_in * (1.0 + 1e-9));
    }
    assert!((pts[0].mean_cond_rhat - 1.0).abs() < 1e-9);
}
