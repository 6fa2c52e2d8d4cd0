use proptest::prelude::*;
use qs_fractal::dim_opt::{
    m0_optimum, m1_optimum, m2_dimension, maximize_1d, maximize_be_constrained, maximize_be_linear,
    solve_cubic_real, Cubic, LinearConstraint,
};
use qs_fractal::fractal_dim::{ak_dimension, be_dimension, moran_dimension};
use qs_fractal::{FrequencyVector, QsSystem, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct evaluation of the ratio, independent of the library formula.
fn be_oracle(q: &[f64], tau: &[f64]) -> f64 {
    let num: f64 = tau.iter().filter(|&&t| t > 0.0).map(|t| t * t.ln()).sum();
    let den: f64 = tau.iter().zip(q).map(|(t, w)| t * w.ln()).sum();
    num / den
}

fn random_simplex(rng: &mut ChaCha8Rng, s: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..s)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}

#[test]
fn be_dimension_is_at_most_one_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let s = rng.random_range(2..7);
        let q = random_simplex(&mut rng, s);
        let tau = random_simplex(&mut rng, s);
        let sys = QsSystem::from_f64(&q).unwrap();
        let d = be_dimension(&sys, &FrequencyVector::from_f64(&tau).unwrap())
            .unwrap()
            .value;
        assert!((0.0..=1.0 + 1e-12).contains(&d));
        assert!((d - be_oracle(&q, &tau).clamp(0.0, 1.0)).abs() < 1e-12);
    }
}

#[test]
fn be_dimension_equals_one_at_tau_equal_q() {
    let sys = QsSystem::from_f64(&[0.2, 0.3, 0.5]).unwrap();
    let d = be_dimension(&sys, &FrequencyVector::from_f64(&[0.2, 0.3, 0.5]).unwrap()).unwrap();
    assert!((d.value - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn be_dimension_is_symmetric_under_joint_permutation(seed in any::<u64>(), shift in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_simplex(&mut rng, 4);
        let tau = random_simplex(&mut rng, 4);
        let rot = |v: &[f64]| -> Vec<f64> { (0..4).map(|i| v[(i + shift) % 4]).collect() };
        let a = be_dimension(&QsSystem::from_f64(&q).unwrap(), &FrequencyVector::from_f64(&tau).unwrap()).unwrap();
        let b = be_dimension(&QsSystem::from_f64(&rot(&q)).unwrap(), &FrequencyVector::from_f64(&rot(&tau)).unwrap()).unwrap();
        prop_assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn moran_dimension_is_monotone_in_subset(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_simplex(&mut rng, 5);
        let sys = QsSystem::from_f64(&q).unwrap();
        let mut prev = 0.0;
        for k in 1..=5 {
            let subset: Vec<usize> = (0..k).collect();
            let d = moran_dimension(&sys, &subset).unwrap();
            let sum: f64 = subset.iter().map(|&i| q[i].powf(d.value)).sum();
            prop_assert!((sum - 1.0).abs() < 1e-9 || k == 1 || k == 5);
            prop_assert!(d.value >= prev - 1e-12);
            prev = d.value;
        }
        prop_assert_eq!(prev, 1.0);
    }
}

#[test]
fn moran_uniform_cantor_value() {
    let sys = QsSystem::uniform(3).unwrap();
    let d = moran_dimension(&sys, &[0, 2]).unwrap();
    assert!((d.value - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
}

#[test]
fn ak_dimension_values() {
    for k in 1..50u64 {
        assert_eq!(
            ak_dimension(k).unwrap(),
            Rational::new(k.into(), (k + 1).into())
        );
    }
}

#[test]
fn cubic_roots_match_discriminant_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let coef: Vec<f64> = (0..4).map(|_| rng.random_range(-10.0..10.0)).collect();
        let cubic = Cubic::new(coef[0], coef[1], coef[2], coef[3]).unwrap();
        let roots = solve_cubic_real(&cubic).unwrap();
        let disc = cubic.discriminant();
        if disc.abs() > 1e-6 {
            assert_eq!(roots.len(), if disc > 0.0 { 3 } else { 1 }, "{coef:?}");
        }
        for r in roots {
            let scale: f64 = coef
                .iter()
                .enumerate()
                .map(|(i, c)| c.abs() * r.abs().powi(3 - i as i32))
                .sum();
            assert!(cubic.eval(r).abs() <= 1e-12 * scale.max(10.0));
        }
    }
    let mut r = solve_cubic_real(&Cubic::new(1.0, -6.0, 11.0, -6.0).unwrap()).unwrap();
    r.sort_by(f64::total_cmp);
    for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn m0_matches_reference_values() {
    let m = m0_optimum().unwrap();
    let tau = m.tau.tau_f64();
    for (got, want) in tau.iter().zip([0.5828, 0.2517, 0.1655]) {
        assert!((got - want).abs() < 5e-4);
    }
    assert!((m.dim - 0.8733).abs() < 5e-4);
    assert!((2.0 * 0.2517 + 3.0 * 0.1655 - 1.0f64).abs() < 2e-4);
    assert!((2.0 * tau[1] + 3.0 * tau[2] - 1.0).abs() < 1e-12);
    // independent closed form of the real root
    let cbrt = |v: f64| v.cbrt();
    let root =
        (23.0 + cbrt(-3736.0 + 43175808f64.sqrt()) + cbrt(-3736.0 - 43175808f64.sqrt())) / 93.0;
    assert!((m.stationarity_root - root).abs() < 1e-12);
}

#[test]
fn m1_and_m2_values() {
    let m = m1_optimum().unwrap();
    assert_eq!(m.tau.tau_f64(), vec![0.5, 0.5, 0.0]);
    assert!((m.dim - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    assert_eq!(m2_dimension().unwrap(), Rational::from_integer(0.into()));
}

#[test]
fn constrained_optimum_beats_random_feasible_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let q = [0.2, 0.3, 0.5];
    let sys = QsSystem::from_f64(&q).unwrap();
    let constraint = LinearConstraint::new(vec![0.0, 2.0, 3.0], 1.0).unwrap();
    let best = maximize_be_constrained(&sys, &constraint).unwrap();
    let general = maximize_be_linear(&sys, &constraint).unwrap();
    assert!((best.dim - general.dim).abs() < 1e-8);
    let mut checked = 0;
    while checked < 100 {
        // feasible points: pick τ_2 in [0, 1/3], solve for τ_1, then τ_0
        let t2 = rng.random_range(0.0..1.0 / 3.0);
        let t1 = (1.0 - 3.0 * t2) / 2.0;
        let t0 = 1.0 - t1 - t2;
        if t0 < 0.0 {
            continue;
        }
        assert!(be_oracle(&q, &[t0, t1, t2]) <= best.dim + 1e-9);
        checked += 1;
    }
}

#[test]
fn general_solver_reproduces_closed_cases_on_uniform_weights() {
    let sys = QsSystem::uniform(3).unwrap();
    let m0 = maximize_be_linear(
        &sys,
        &LinearConstraint::new(vec![0.0, 2.0, 3.0], 1.0).unwrap(),
    )
    .unwrap();
    assert!((m0.dim - m0_optimum().unwrap().dim).abs() < 1e-8);
    let m1 = maximize_be_linear(
        &sys,
        &LinearConstraint::new(vec![0.0, 0.0, 1.0], 0.0).unwrap(),
    )
    .unwrap();
    assert!((m1.dim - 2f64.ln() / 3f64.ln()).abs() < 1e-8);
}

#[test]
fn golden_section_finds_known_maxima() {
    let (x, fx) = maximize_1d(|x| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-10).unwrap();
    assert!((x - 0.3).abs() < 1e-7 && (fx - 2.0).abs() < 1e-12);
    assert!(maximize_1d(|x| x, 1.0, 0.0, 1e-10).is_err());
}
