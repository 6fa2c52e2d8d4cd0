use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use qs_fractal::{DigitWord, QsSystem, Rational, Scalar};

fn systems() -> Vec<QsSystem> {
    vec![
        QsSystem::uniform(2).unwrap(),
        QsSystem::uniform(3).unwrap(),
        QsSystem::new(vec![
            Scalar::ratio(1, 5),
            Scalar::ratio(3, 10),
            Scalar::ratio(1, 2),
        ])
        .unwrap(),
        QsSystem::new(vec![
            Scalar::ratio(1, 7),
            Scalar::ratio(4, 7),
            Scalar::ratio(2, 7),
        ])
        .unwrap(),
    ]
}

/// Digit-by-digit oracle: the next digit is the i whose cylinder (computed
/// by decode_word on the extended prefix) contains x.
fn encode_by_interval_search(sys: &QsSystem, x: &Scalar, n: usize) -> Vec<u8> {
    let mut prefix = Vec::new();
    for _ in 0..n {
        let next = (0..sys.s())
            .find(|&i| {
                let mut w = prefix.clone();
                w.push(i as u8);
                let c = sys.cylinder(&DigitWord::new(w, sys.s()).unwrap()).unwrap();
                c.contains(x)
            })
            .expect("cylinders of one level cover the parent");
        prefix.push(next as u8);
    }
    prefix
}

/// Classical base-s digits of a rational a/b by long division.
fn base_s_digits(x: &Rational, s: u32, n: usize) -> Vec<u8> {
    let b = x.denom().clone();
    let mut a = x.numer().clone();
    (0..n)
        .map(|_| {
            a *= s;
            let d = &a / &b;
            a %= &b;
            d.to_u8().unwrap()
        })
        .collect()
}

fn all_words(s: usize, n: usize) -> Vec<DigitWord> {
    let mut words = vec![Vec::new()];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (0..s as u8).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    words
        .into_iter()
        .map(|w| DigitWord::new(w, s).unwrap())
        .collect()
}

#[test]
fn encode_matches_interval_search_on_boundaries_and_interiors() {
    let q = &systems()[2];
    for (num, den) in [(1, 2), (1, 5), (0, 1), (7, 10), (99, 100), (1, 3)] {
        let x = Scalar::ratio(num, den);
        let enc = q.encode(&x, 6).unwrap();
        assert_eq!(
            enc.word.digits(),
            encode_by_interval_search(q, &x, 6).as_slice(),
            "x = {x}"
        );
    }
    assert_eq!(
        q.encode(&Scalar::ratio(1, 2), 3).unwrap().word.digits(),
        &[2, 0, 0]
    );
}

#[test]
fn cylinder_left_endpoints_encode_with_zero_tail() {
    for sys in systems() {
        for w in all_words(sys.s(), 4) {
            let left = sys.decode_word(&w).unwrap();
            let enc = sys.encode(&left, 10).unwrap().word;
            let mut expect = w.digits().to_vec();
            expect.extend([0; 6]);
            assert_eq!(enc.digits(), expect.as_slice());
        }
    }
}

#[test]
fn cylinders_partition_the_unit_interval() {
    for sys in systems() {
        let depth = if sys.s() == 2 { 8 } else { 5 };
        let mut cyl: Vec<_> = all_words(sys.s(), depth)
            .iter()
            .map(|w| sys.cylinder(w).unwrap())
            .collect();
        let total = cyl
            .iter()
            .fold(Scalar::integer(0), |acc, c| &acc + &c.length);
        assert_eq!(total, Scalar::integer(1));
        cyl.sort_by(|a, b| a.left.partial_cmp(&b.left).unwrap());
        assert_eq!(cyl[0].left, Scalar::integer(0));
        for pair in cyl.windows(2) {
            assert_eq!(pair[0].right(), pair[1].left);
        }
        assert_eq!(cyl.last().unwrap().right(), Scalar::integer(1));
    }
}

#[test]
fn float_cylinders_sum_to_one() {
    let sys = QsSystem::from_f64(&[0.2, 0.3, 0.5]).unwrap();
    let total: f64 = all_words(3, 8)
        .iter()
        .map(|w| sys.cylinder(w).unwrap().length.to_f64())
        .sum();
    assert!((total - 1.0).abs() <= 1e-12);
}

#[test]
fn float_and_exact_backends_agree_on_digits() {
    let exact = &systems()[2];
    let float = QsSystem::from_f64(&[0.2, 0.3, 0.5]).unwrap();
    for k in 1..200 {
        let x = k as f64 / 211.0;
        let e = exact
            .encode(&Scalar::exact_from_f64(x).unwrap(), 20)
            .unwrap()
            .word;
        let f = float.encode(&Scalar::Float(x), 20).unwrap().word;
        // float error grows by at most 1/min(q) per step
        let agree = e
            .digits()
            .iter()
            .zip(f.digits())
            .take_while(|(a, b)| a == b)
            .count();
        assert!(agree >= 12, "x = {x}: only {agree} digits agree");
    }
}

proptest! {
    #[test]
    fn exact_round_trip_bound(num in 0u64..(1 << 53), which in 0usize..4, n in 0usize..40) {
        let sys = &systems()[which];
        let x = Scalar::Exact(Rational::new(BigInt::from(num), BigInt::from(1u64 << 53)));
        let enc = sys.encode(&x, n).unwrap();
        let cyl = sys.cylinder(&enc.word).unwrap();
        prop_assert!(cyl.contains(&x));
        let err = (&x - &cyl.left).to_f64();
        prop_assert!(err >= 0.0);
        prop_assert!(err <= sys.max_weight().powi(n as i32) * (1.0 + 1e-12));
    }

    #[test]
    fn uniform_weights_match_base_s_long_division(num in 0u64..1_000_000, den in 1_000_001u64..2_000_000, s in 2u32..11) {
        let sys = QsSystem::uniform(s as usize).unwrap();
        let x = Rational::new(BigInt::from(num), BigInt::from(den));
        let enc = sys.encode(&Scalar::Exact(x.clone()), 30).unwrap();
        let expect = base_s_digits(&x, s, 30);
        prop_assert_eq!(enc.word.digits(), expect.as_slice());
    }

    #[test]
    fn float_round_trip_is_close(x in 0.0f64..1.0, n in 1usize..30) {
        let sys = QsSystem::from_f64(&[0.25, 0.35, 0.4]).unwrap();
        let enc = sys.encode(&Scalar::Float(x), n).unwrap();
        let left = sys.decode_word(&enc.word).unwrap().to_f64();
        let bound = sys.max_weight().powi(n as i32) + 1e-12;
        prop_assert!((x - left).abs() <= bound);
    }

    #[test]
    fn periodic_value_matches_long_prefix(pre in proptest::collection::vec(0u8..3, 0..4),
                                          per in proptest::collection::vec(0u8..3, 1..4)) {
        let sys = &systems()[2];
        let p = qs_fractal::PeriodicDigits::new(
            DigitWord::new(pre.clone(), 3).unwrap(),
            DigitWord::new(per.clone(), 3).unwrap(),
        ).unwrap();
        let exact = sys.decode_periodic(&p).unwrap();
        let mut long = pre.clone();
        while long.len() < 120 {
            long.extend(&per);
        }
        let approx = sys.decode_word(&DigitWord::new(long, 3).unwrap()).unwrap();
        let diff = (&exact - &approx).to_f64();
        prop_assert!((0.0..1e-30).contains(&diff));
        // the zero-tail form is the same number
        let canon = sys.decode_periodic(&p.canonical()).unwrap();
        prop_assert_eq!(canon, exact);
    }
}
