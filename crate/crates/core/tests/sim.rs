mod common;

use polarlab::sim::{records_to_csv, run_monte_carlo, CodewordMode, SimConfig, SnrAxis};

use common::small_setup;

fn config(snr: Vec<f64>, frames: u64, jobs: usize) -> SimConfig {
    SimConfig {
        snr_points: snr,
        max_frames: frames,
        min_bit_errors: None,
        master_seed: 2024,
        jobs,
        ..Default::default()
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let codes = small_setup().build().unwrap();
    let one = run_monte_carlo(&codes, &config(vec![0.0, 2.0], 300, 1)).unwrap();
    let three = run_monte_carlo(&codes, &config(vec![0.0, 2.0], 300, 3)).unwrap();
    assert_eq!(one, three);
    let mut early = config(vec![0.0], 5000, 1);
    early.min_bit_errors = Some(200);
    let a = run_monte_carlo(&codes, &early).unwrap();
    early.jobs = 4;
    let b = run_monte_carlo(&codes, &early).unwrap();
    assert_eq!(a, b);
    assert!(a[0].bit_errors >= 200 && a[0].frames < 5000);
}

#[test]
fn ber_falls_with_snr() {
    let codes = small_setup().build().unwrap();
    let recs = run_monte_carlo(&codes, &config(vec![-1.0, 0.5, 2.0, 3.5], 2000, 1)).unwrap();
    for w in recs.windows(2) {
        assert!(w[1].ber < w[0].ber, "{} dB: {} then {} dB: {}", w[0].snr_db, w[0].ber, w[1].snr_db, w[1].ber);
    }
}

#[test]
fn stop_rules_and_axes() {
    let codes = small_setup().build().unwrap();
    let mut cfg = config(vec![1.0], 10_000, 1);
    cfg.min_frame_errors = Some(25);
    let r = &run_monte_carlo(&codes, &cfg).unwrap()[0];
    assert!(r.frame_errors >= 25);
    assert_eq!(r.bler, r.frame_errors as f64 / r.frames as f64);
    assert!((r.es_n0_db - (r.eb_n0_db + 10.0 * codes.rate_total().log10())).abs() < 1e-12);

    cfg.snr_axis = SnrAxis::EsN0;
    let r = &run_monte_carlo(&codes, &cfg).unwrap()[0];
    assert_eq!(r.es_n0_db, 1.0);
    assert_eq!(r.snr_db, 1.0);
}

#[test]
fn all_zero_mode_runs_and_same_seed_reproduces() {
    let codes = small_setup().build().unwrap();
    let mut cfg = config(vec![1.5], 400, 1);
    cfg.codeword = CodewordMode::AllZero;
    let a = run_monte_carlo(&codes, &cfg).unwrap();
    let b = run_monte_carlo(&codes, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(records_to_csv(&a), records_to_csv(&b));
    cfg.master_seed += 1;
    assert_ne!(run_monte_carlo(&codes, &cfg).unwrap(), a);
}

#[test]
fn csv_is_plain_decimal() {
    let codes = small_setup().build().unwrap();
    let recs = run_monte_carlo(&codes, &config(vec![4.0], 64, 1)).unwrap();
    let text = records_to_csv(&recs);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "setup,snr_db,frames,bit_errors,frame_errors,ber,bler,iters_mean,eb_n0_db,es_n0_db"
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 10);
    assert_eq!(fields[0], "small");
    for f in &fields[1..] {
        assert!(f.parse::<f64>().is_ok() && !f.contains(['e', 'E']), "{row}");
    }
}

#[test]
fn rejects_bad_configs() {
    let codes = small_setup().build().unwrap();
    assert!(run_monte_carlo(&codes, &config(vec![], 10, 1)).is_err());
    assert!(run_monte_carlo(&codes, &config(vec![f64::NAN], 10, 1)).is_err());
    assert!(run_monte_carlo(&codes, &config(vec![1.0], 0, 1)).is_err());
}
