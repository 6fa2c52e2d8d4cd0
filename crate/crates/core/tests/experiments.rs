use qs_fractal::monte_carlo::{
    borel_experiment, decoded_samples, ks_uniform, mean_distribution_experiment,
    sample_digit_prefix, ExperimentConfig,
};
use qs_fractal::QsSystem;

#[test]
fn lebesgue_decoded_values_pass_ks() {
    let cfg = ExperimentConfig::lebesgue(QsSystem::uniform(2).unwrap(), 100_000, 1000, 2024);
    let ks = ks_uniform(&decoded_samples(&cfg).unwrap());
    assert!(ks.passes, "D = {} vs {}", ks.statistic, ks.critical_value);

    let cfg =
        ExperimentConfig::lebesgue(QsSystem::from_f64(&[0.2, 0.3, 0.5]).unwrap(), 1000, 1000, 7);
    let ks = ks_uniform(&decoded_samples(&cfg).unwrap());
    assert!(ks.passes, "D = {} vs {}", ks.statistic, ks.critical_value);
}

#[test]
fn ks_rejects_a_skewed_sample() {
    let xs: Vec<f64> = (0..1000).map(|i| (i as f64 / 1000.0).powi(2)).collect();
    assert!(!ks_uniform(&xs).passes);
}

#[test]
fn borel_uniform_three() {
    let cfg = ExperimentConfig::lebesgue(QsSystem::uniform(3).unwrap(), 100_000, 200, 1);
    let r = borel_experiment(&cfg).unwrap();
    assert!(r.pass_fraction >= 0.99);
    assert!((r.mean_of_means - 1.0).abs() < 0.01);
    assert!(r.identity_holds);
    let tol = 4.0 * ((2.0 / 9.0) / 1e5f64).sqrt();
    assert!(r
        .per_digit_tolerance
        .iter()
        .all(|t| (t - tol).abs() < 1e-15));
}

#[test]
fn borel_nonuniform_mean() {
    let cfg = ExperimentConfig::lebesgue(
        QsSystem::from_f64(&[0.2, 0.3, 0.5]).unwrap(),
        100_000,
        200,
        3,
    );
    let r = borel_experiment(&cfg).unwrap();
    assert!((r.mean_of_means - 1.3).abs() < 0.01);
    assert!(r.pass_fraction >= 0.99);
}

#[test]
fn mean_distribution_variance() {
    let cfg = ExperimentConfig::lebesgue(QsSystem::uniform(3).unwrap(), 10_000, 1000, 5);
    let h = mean_distribution_experiment(&cfg, 40).unwrap();
    let expect = (2.0 / 3.0) / 1e4;
    assert!((h.expected_variance - expect).abs() < 1e-15);
    assert!(h.variance / expect < 1.5 && expect / h.variance < 1.5);
    assert_eq!(h.bins.iter().map(|b| b.count).sum::<u64>(), 1000);
}

#[test]
fn mean_distribution_singular_measure_concentrates_at_one() {
    let cfg = ExperimentConfig::lebesgue(QsSystem::uniform(3).unwrap(), 10_000, 500, 8)
        .with_measure(vec![0.5, 0.0, 0.5]);
    let h = mean_distribution_experiment(&cfg, 40).unwrap();
    assert!((h.mean - 1.0).abs() < 0.01);
    // single mode: counts rise to the peak then fall
    let counts: Vec<u64> = h.bins.iter().map(|b| b.count).collect();
    let peak = counts
        .iter()
        .enumerate()
        .max_by_key(|(_, c)| **c)
        .unwrap()
        .0;
    assert!((h.bins[peak].bin_left - 1.0).abs() <= h.bin_width);
    assert!(counts[..peak].windows(2).all(|w| w[0] <= w[1]));
    assert!(counts[peak..].windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn lebesgue_consistency_of_sample_mean() {
    let bound = 3.0 / (12.0f64 * 1e4).sqrt();
    for q in [
        vec![0.5, 0.5],
        vec![0.2, 0.3, 0.5],
        vec![0.1, 0.6, 0.05, 0.25],
    ] {
        let cfg = ExperimentConfig::lebesgue(QsSystem::from_f64(&q).unwrap(), 1000, 10_000, 99);
        let xs = decoded_samples(&cfg).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() <= bound, "{q:?}: {mean}");
    }
}

#[test]
fn trials_are_reproducible_and_independent_of_trial_count() {
    let sys = QsSystem::uniform(3).unwrap();
    let a = ExperimentConfig::lebesgue(sys.clone(), 500, 4, 42);
    let b = ExperimentConfig::lebesgue(sys.clone(), 500, 40, 42);
    assert_eq!(
        sample_digit_prefix(&a, 2).unwrap(),
        sample_digit_prefix(&b, 2).unwrap()
    );
    assert_ne!(
        sample_digit_prefix(&a, 2).unwrap(),
        sample_digit_prefix(&a, 3).unwrap()
    );
    assert_eq!(borel_experiment(&a).unwrap(), borel_experiment(&a).unwrap());
    let c = ExperimentConfig::lebesgue(sys, 500, 4, 43);
    assert_ne!(
        sample_digit_prefix(&a, 0).unwrap(),
        sample_digit_prefix(&c, 0).unwrap()
    );
}

#[test]
fn invalid_configs_are_rejected() {
    let sys = QsSystem::uniform(3).unwrap();
    assert!(borel_experiment(&ExperimentConfig::lebesgue(sys.clone(), 0, 1, 0)).is_err());
    let bad = ExperimentConfig::lebesgue(sys.clone(), 10, 1, 0).with_measure(vec![0.5, 0.5]);
    assert!(borel_experiment(&bad).is_err());
    let bad = ExperimentConfig::lebesgue(sys, 10, 1, 0).with_measure(vec![0.5, 0.6, -0.1]);
    assert!(borel_experiment(&bad).is_err());
}
