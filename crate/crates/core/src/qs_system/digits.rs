use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{QsError, Result};

/// A single digit of a Q_s-representation.
pub type Digit = u8;

/// Largest supported alphabet size; digits are stored as `u8`.
pub const MAX_ALPHABET: usize = 256;

pub(crate) fn check_alphabet(s: usize) -> Result<()> {
    if (2..=MAX_ALPHABET).contains(&s) {
        Ok(())
    } else {
        Err(QsError::AlphabetSize(s))
    }
}

/// A finite word α_1…α_k over the alphabet {0,…,s−1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitWord {
    digits: Vec<Digit>,
    s: usize,
}

impl DigitWord {
    pub fn new(digits: Vec<Digit>, s: usize) -> Result<DigitWord> {
        check_alphabet(s)?;
        if let Some(&d) = digits.iter().find(|&&d| d as usize >= s) {
            return Err(QsError::DigitOutOfRange {
                digit: d as usize,
                s,
            });
        }
        Ok(DigitWord { digits, s })
    }

    /// Builds a word from wide integers, rejecting any digit `>= s`.
    pub fn from_usizes(digits: &[usize], s: usize) -> Result<DigitWord> {
        check_alphabet(s)?;
        let digits = digits
            .iter()
            .map(|&d| {
                if d < s {
                    Ok(d as Digit)
                } else {
                    Err(QsError::DigitOutOfRange { digit: d, s })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitWord { digits, s })
    }

    pub fn empty(s: usize) -> Result<DigitWord> {
        DigitWord::new(Vec::new(), s)
    }

    pub(crate) fn new_unchecked(digits: Vec<Digit>, s: usize) -> DigitWord {
        debug_assert!(digits.iter().all(|&d| (d as usize) < s));
        DigitWord { digits, s }
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<Digit> {
        self.digits
    }

    pub fn alphabet(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn concat(&self, other: &DigitWord) -> Result<DigitWord> {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        DigitWord::new(digits, self.s.max(other.s))
    }
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.digits.iter())
    }
}

/// An eventually periodic representation: `preperiod` followed by `period`
/// repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicDigits {
    preperiod: DigitWord,
    period: DigitWord,
}

impl PeriodicDigits {
    pub fn new(preperiod: DigitWord, period: DigitWord) -> Result<PeriodicDigits> {
        if period.is_empty() {
            return Err(QsError::EmptyPeriod);
        }
        let s = preperiod.alphabet().max(period.alphabet());
        Ok(PeriodicDigits {
            preperiod: DigitWord::new_unchecked(preperiod.digits, s),
            period: DigitWord::new_unchecked(period.digits, s),
        })
    }

    pub fn pure(period: DigitWord) -> Result<PeriodicDigits> {
        let s = period.alphabet();
        PeriodicDigits::new(DigitWord::empty(s)?, period)
    }

    pub fn from_usizes(preperiod: &[usize], period: &[usize], s: usize) -> Result<PeriodicDigits> {
        PeriodicDigits::new(
            DigitWord::from_usizes(preperiod, s)?,
            DigitWord::from_usizes(period, s)?,
        )
    }

    /// The constant representation (i)(i)(i)…
    pub fn constant(digit: usize, s: usize) -> Result<PeriodicDigits> {
        PeriodicDigits::from_usizes(&[], &[digit], s)
    }

    pub fn preperiod(&self) -> &DigitWord {
        &self.preperiod
    }

    pub fn period(&self) -> &DigitWord {
        &self.period
    }

    pub fn alphabet(&self) -> usize {
        self.period.alphabet()
    }

    /// Digit at 1-based position `n`.
    pub fn digit_at(&self, n: u64) -> Digit {
        assert!(n >= 1, "positions are 1-based");
        let k = (n - 1) as usize;
        let pre = self.preperiod.len();
        if k < pre {
            self.preperiod.digits[k]
        } else {
            self.period.digits[(k - pre) % self.period.len()]
        }
    }

    fn top(&self) -> Digit {
        (self.alphabet() - 1) as Digit
    }

    /// True unless the tail is the repeated top digit (s−1).
    pub fn is_canonical(&self) -> bool {
        let top = self.top();
        !self.period.digits.iter().all(|&d| d == top)
    }

    /// Rewrites a `…c(s−1)(s−1)…` tail as `…(c+1)(0)`, the period-(0) form of
    /// the same number. The all-(s−1) representation of 1 has no such form
    /// and is returned unchanged.
    pub fn canonical(&self) -> PeriodicDigits {
        if self.is_canonical() {
            return self.clone();
        }
        let top = self.top();
        let s = self.alphabet();
        let pre = &self.preperiod.digits;
        match pre.iter().rposition(|&d| d != top) {
            Some(i) => {
                let mut digits = pre[..=i].to_vec();
                digits[i] += 1;
                PeriodicDigits {
                    preperiod: DigitWord::new_unchecked(digits, s),
                    period: DigitWord::new_unchecked(vec![0], s),
                }
            }
            None => self.clone(),
        }
    }
}

impl Serialize for PeriodicDigits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PeriodicDigits", 2)?;
        st.serialize_field("preperiod", &self.preperiod)?;
        st.serialize_field("period", &self.period)?;
        st.end()
    }
}
