//! Digit counts, running frequencies and running means.
//!
//! Stream statistics are finite-n estimates of limits and are never reported
//! as the limit itself. Exact limits are available only for eventually
//! periodic representations.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{QsError, Result};
use crate::fractal_dim::FrequencyVector;
use crate::qs_system::{DigitStream, PeriodicDigits};
use crate::scalar::{Rational, Scalar};

/// Tallies N_i(x, n) and the digit sum of a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunningStats {
    n: u64,
    counts: Vec<u64>,
    digit_sum: u64,
}

impl RunningStats {
    pub fn new(s: usize) -> RunningStats {
        RunningStats {
            n: 0,
            counts: vec![0; s],
            digit_sum: 0,
        }
    }

    pub fn accumulate(&mut self, digit: usize) -> Result<()> {
        let s = self.counts.len();
        let slot = self
            .counts
            .get_mut(digit)
            .ok_or(QsError::DigitOutOfRange { digit, s })?;
        *slot += 1;
        self.n += 1;
        self.digit_sum += digit as u64;
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = usize>>(&mut self, digits: I) -> Result<()> {
        digits.into_iter().try_for_each(|d| self.accumulate(d))
    }

    pub fn alphabet(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, digit: usize) -> u64 {
        self.counts.get(digit).copied().unwrap_or(0)
    }

    pub fn digit_sum(&self) -> u64 {
        self.digit_sum
    }

    /// ν̂_i = N_i / n; zero when nothing has been seen.
    pub fn freq(&self, digit: usize) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.count(digit) as f64 / self.n as f64
        }
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.alphabet()).map(|i| self.freq(i)).collect()
    }

    /// r̂_n = (α_1 + … + α_n) / n.
    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.digit_sum as f64 / self.n as f64
        }
    }

    pub fn freq_exact(&self, digit: usize) -> Rational {
        ratio_u64(self.count(digit), self.n)
    }

    pub fn mean_exact(&self) -> Rational {
        ratio_u64(self.digit_sum, self.n)
    }

    /// Σ N_i = n and Σ i·N_i = digit sum, in integer arithmetic.
    pub fn is_consistent(&self) -> bool {
        let total: u64 = self.counts.iter().sum();
        let weighted: u64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| i as u64 * c)
            .sum();
        total == self.n && weighted == self.digit_sum
    }
}

fn ratio_u64(num: u64, den: u64) -> Rational {
    if den == 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Serialize for RunningStats {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RunningStats", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("counts", &self.counts)?;
        st.serialize_field("freqs", &self.freqs())?;
        st.serialize_field("mean", &self.mean())?;
        st.end()
    }
}

/// Statistics of the first `position` digits of a stream.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub position: u64,
    pub stats: RunningStats,
}

impl SeriesPoint {
    pub fn mean(&self) -> f64 {
        self.stats.mean()
    }

    pub fn mean_exact(&self) -> Rational {
        self.stats.mean_exact()
    }
}

/// Resets `source` and reports r̂_n at every checkpoint (1-based positions,
/// strictly increasing).
pub fn running_mean_series<S: DigitStream + ?Sized>(
    source: &mut S,
    checkpoints: &[u64],
) -> Result<Vec<SeriesPoint>> {
    if checkpoints.first() == Some(&0) {
        return Err(QsError::DomainError(
            "checkpoint positions start at 1".into(),
        ));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QsError::DomainError(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    source.reset();
    let mut stats = RunningStats::new(source.alphabet());
    let mut out = Vec::with_capacity(checkpoints.len());
    for &target in checkpoints {
        while stats.n() < target {
            let d = source.next_digit().ok_or(QsError::StreamExhausted {
                needed: target,
                available: stats.n(),
            })?;
            stats.accumulate(d as usize)?;
        }
        out.push(SeriesPoint {
            position: target,
            stats: stats.clone(),
        });
    }
    Ok(out)
}

/// Exact frequency of `digit` in the period-(0) form of `p`.
pub fn periodic_frequency(p: &PeriodicDigits, digit: usize) -> Result<Rational> {
    let s = p.alphabet();
    if digit >= s {
        return Err(QsError::DigitOutOfRange { digit, s });
    }
    let c = p.canonical();
    let period = c.period().digits();
    let hits = period.iter().filter(|&&d| d as usize == digit).count();
    Ok(ratio_u64(hits as u64, period.len() as u64))
}

pub fn periodic_frequencies(p: &PeriodicDigits) -> Vec<Rational> {
    (0..p.alphabet())
        .map(|i| periodic_frequency(p, i).expect("digit below alphabet size"))
        .collect()
}

/// Exact asymptotic mean of an eventually periodic representation.
pub fn periodic_mean(p: &PeriodicDigits) -> Rational {
    let c = p.canonical();
    let period = c.period().digits();
    let sum: u64 = period.iter().map(|&d| d as u64).sum();
    ratio_u64(sum, period.len() as u64)
}

/// r = ν_1 + 2ν_2 + … + (s−1)ν_{s−1}; exact when τ is exact.
pub fn mean_from_frequencies(tau: &FrequencyVector) -> Scalar {
    tau.tau()
        .iter()
        .enumerate()
        .fold(Scalar::zero_like(tau.backend()), |acc, (i, t)| {
            &acc + &(t * &Scalar::integer(i as i64))
        })
}

/// Partial means along two checkpoint families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationReport {
    pub position_a: u64,
    pub estimate_a: f64,
    pub position_b: u64,
    pub estimate_b: f64,
    pub gap: f64,
    #[serde(skip)]
    pub exact_a: Rational,
    #[serde(skip)]
    pub exact_b: Rational,
}

/// Compares partial means along two position subsequences. A gap that stays
/// away from zero is evidence, not proof, that r(x) does not exist.
pub fn oscillation_report<S: DigitStream + ?Sized>(
    source: &mut S,
    subsequence_a: &[u64],
    subsequence_b: &[u64],
) -> Result<OscillationReport> {
    for (name, seq) in [("a", subsequence_a), ("b", subsequence_b)] {
        if seq.len() < 3 {
            return Err(QsError::DomainError(format!(
                "subsequence {name} needs at least 3 positions"
            )));
        }
        if seq.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QsError::DomainError(format!(
                "subsequence {name} must be strictly increasing"
            )));
        }
    }
    let pa = *subsequence_a.last().unwrap();
    let pb = *subsequence_b.last().unwrap();
    let mut merged = vec![pa, pb];
    merged.sort_unstable();
    merged.dedup();
    let series = running_mean_series(source, &merged)?;
    let at = |pos: u64| {
        series
            .iter()
            .find(|p| p.position == pos)
            .expect("checkpoint was requested")
    };
    let (a, b) = (at(pa), at(pb));
    Ok(OscillationReport {
        position_a: pa,
        estimate_a: a.mean(),
        position_b: pb,
        estimate_b: b.mean(),
        gap: (a.mean() - b.mean()).abs(),
        exact_a: a.mean_exact(),
        exact_b: b.mean_exact(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qs_system::{DigitWord, PeriodicStream, WordStream};

    #[test]
    fn accumulate_counts() {
        let mut st = RunningStats::new(3);
        st.extend([0, 1, 1, 2, 0]).unwrap();
        assert_eq!(st.counts(), &[2, 2, 1]);
        assert_eq!(st.digit_sum(), 4);
        assert_eq!(st.count(1), 2);
        assert_eq!(st.mean_exact(), Rational::new(4.into(), 5.into()));
        assert!(st.is_consistent());
        assert_eq!(
            st.accumulate(3),
            Err(QsError::DigitOutOfRange { digit: 3, s: 3 })
        );
        assert_eq!(st.n(), 5);
    }

    #[test]
    fn stats_json() {
        let mut st = RunningStats::new(2);
        st.extend([1, 0, 1, 1]).unwrap();
        assert_eq!(
            serde_json::to_string(&st).unwrap(),
            r#"{"n":4,"counts":[1,3],"freqs":[0.25,0.75],"mean":0.75}"#
        );
    }

    #[test]
    fn constant_and_alternating_series() {
        for i in 0..3 {
            let mut st = PeriodicStream::new(PeriodicDigits::constant(i, 3).unwrap());
            for p in running_mean_series(&mut st, &[1, 7, 100]).unwrap() {
                assert_eq!(p.mean_exact(), Rational::from_integer((i as i64).into()));
            }
        }
        let mut st = PeriodicStream::new(PeriodicDigits::from_usizes(&[], &[0, 2], 3).unwrap());
        for p in running_mean_series(&mut st, &[2, 4, 1000]).unwrap() {
            assert_eq!(p.mean_exact(), Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn series_errors() {
        let mut st = WordStream::new(DigitWord::from_usizes(&[1, 1], 2).unwrap());
        assert!(matches!(
            running_mean_series(&mut st, &[1, 3]),
            Err(QsError::StreamExhausted {
                needed: 3,
                available: 2
            })
        ));
        assert!(matches!(
            running_mean_series(&mut st, &[2, 2]),
            Err(QsError::DomainError(_))
        ));
        assert!(matches!(
            running_mean_series(&mut st, &[0]),
            Err(QsError::DomainError(_))
        ));
    }

    #[test]
    fn periodic_frequency_examples() {
        let p = PeriodicDigits::from_usizes(&[], &[0, 1, 2], 3).unwrap();
        assert_eq!(
            periodic_frequency(&p, 1).unwrap(),
            Rational::new(1.into(), 3.into())
        );
        let one = PeriodicDigits::constant(1, 3).unwrap();
        assert_eq!(periodic_frequency(&one, 0).unwrap(), Rational::zero());
        assert!(periodic_frequency(&one, 3).is_err());
        let cyc = PeriodicDigits::from_usizes(&[], &(0..7).collect::<Vec<_>>(), 7).unwrap();
        for i in 0..7 {
            assert_eq!(
                periodic_frequency(&cyc, i).unwrap(),
                Rational::new(1.into(), 7.into())
            );
        }
    }

    #[test]
    fn periodic_mean_examples() {
        assert_eq!(
            periodic_mean(&PeriodicDigits::constant(2, 3).unwrap()),
            Rational::from_integer(2.into())
        );
        let p = PeriodicDigits::from_usizes(&[], &[1, 2], 3).unwrap();
        assert_eq!(periodic_mean(&p), Rational::new(3.into(), 2.into()));
        let p = PeriodicDigits::from_usizes(&[2, 2, 2], &[0], 3).unwrap();
        assert_eq!(periodic_mean(&p), Rational::zero());
    }

    #[test]
    fn top_digit_tail_uses_zero_convention() {
        // 0.1(2)_3 is the same number as 0.2(0)_3.
        let p = PeriodicDigits::from_usizes(&[1], &[2], 3).unwrap();
        assert_eq!(periodic_mean(&p), Rational::zero());
        assert_eq!(
            periodic_frequency(&p, 0).unwrap(),
            Rational::from_integer(1.into())
        );
    }

    #[test]
    fn mean_from_frequency_examples() {
        let e = FrequencyVector::new(vec![
            Scalar::integer(1),
            Scalar::integer(0),
            Scalar::integer(0),
        ])
        .unwrap();
        assert_eq!(mean_from_frequencies(&e), Scalar::integer(0));
        let u = FrequencyVector::new(vec![Scalar::ratio(1, 3); 3]).unwrap();
        assert_eq!(mean_from_frequencies(&u), Scalar::integer(1));
        let m0 = FrequencyVector::from_f64(&[0.5828, 0.2517, 0.1655]).unwrap();
        assert!((mean_from_frequencies(&m0).to_f64() - 0.5827).abs() < 1e-12);
    }

    #[test]
    fn oscillation_on_constant_and_alternating() {
        let mut c = PeriodicStream::new(PeriodicDigits::constant(1, 2).unwrap());
        let r = oscillation_report(&mut c, &[2, 4, 6], &[3, 5, 9]).unwrap();
        assert_eq!(r.gap, 0.0);

        let mut alt = PeriodicStream::new(PeriodicDigits::from_usizes(&[], &[0, 1], 2).unwrap());
        let n = 1000u64;
        let evens: Vec<u64> = (1..=n / 2).map(|k| 2 * k).collect();
        let odds: Vec<u64> = (0..n / 2).map(|k| 2 * k + 1).collect();
        let r = oscillation_report(&mut alt, &evens, &odds).unwrap();
        // mean at 2m is 1/2, at 2m-1 it is (m-1)/(2m-1)
        let m = (n / 2) as f64;
        let expect = 0.5 - (m - 1.0) / (2.0 * m - 1.0);
        assert!((r.gap - expect).abs() < 1e-15);
        assert!(r.gap <= 1.0 / (n as f64 - 1.0));

        assert!(matches!(
            oscillation_report(&mut alt, &[1, 2], &[3, 4, 5]),
            Err(QsError::DomainError(_))
        ));
    }
}
