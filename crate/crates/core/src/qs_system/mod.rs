//! Q_s numeral systems.
//!
//! A system is a vector of positive weights q_0…q_{s−1} summing to one, with
//! cumulative offsets β_j = q_0 + … + q_{j−1}. A digit sequence α_1α_2…
//! represents
//!
//! ```text
//! x = β_{α_1} + Σ_{k≥2} β_{α_k} · q_{α_1} ⋯ q_{α_{k−1}}
//! ```
//!
//! Encoding picks digits with half-open intervals [β_j, β_{j+1}), so a number
//! with two representations always gets the one ending in repeated zeros.

mod digits;
mod stream;

pub use digits::{Digit, DigitWord, PeriodicDigits, MAX_ALPHABET};
pub use stream::{DigitStream, PeriodicStream, Prefixed, WordStream, DEFAULT_MAX_DIGITS};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{QsError, Result};
use crate::scalar::{Backend, Scalar};

/// Tolerance on Σ q_i = 1 for floating-point weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QsSystem {
    q: Vec<Scalar>,
    beta: Vec<Scalar>,
    q_f64: Vec<f64>,
    beta_f64: Vec<f64>,
    backend: Backend,
}

impl QsSystem {
    /// Builds a system from weights. Any float weight switches the whole
    /// system to the float backend.
    pub fn new(q: Vec<Scalar>) -> Result<QsSystem> {
        digits::check_alphabet(q.len())?;
        let backend = q.iter().fold(Backend::Exact, |b, w| b.combine(w.backend()));
        let q: Vec<Scalar> = match backend {
            Backend::Exact => q,
            Backend::Float => q.iter().map(Scalar::to_float).collect(),
        };
        for (index, w) in q.iter().enumerate() {
            if !w.is_positive() {
                return Err(QsError::NonPositiveWeight {
                    index,
                    value: w.to_string(),
                });
            }
        }
        let mut beta = Vec::with_capacity(q.len());
        let mut acc = Scalar::zero_like(backend);
        for w in &q {
            beta.push(acc.clone());
            acc = &acc + w;
        }
        let sum_ok = match backend {
            Backend::Exact => acc == Scalar::integer(1),
            Backend::Float => (acc.to_f64() - 1.0).abs() <= WEIGHT_SUM_TOL,
        };
        if !sum_ok {
            return Err(QsError::WeightSumMismatch {
                sum: acc.to_string(),
            });
        }
        let q_f64 = q.iter().map(Scalar::to_f64).collect();
        let beta_f64 = beta.iter().map(Scalar::to_f64).collect();
        Ok(QsSystem {
            q,
            beta,
            q_f64,
            beta_f64,
            backend,
        })
    }

    /// Classical base-s system with exact weights 1/s.
    pub fn uniform(s: usize) -> Result<QsSystem> {
        digits::check_alphabet(s)?;
        QsSystem::new(vec![Scalar::ratio(1, s as i64); s])
    }

    pub fn from_f64(q: &[f64]) -> Result<QsSystem> {
        QsSystem::new(q.iter().map(|&w| Scalar::Float(w)).collect())
    }

    pub fn s(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[Scalar] {
        &self.q
    }

    pub fn beta(&self) -> &[Scalar] {
        &self.beta
    }

    pub fn q_f64(&self) -> &[f64] {
        &self.q_f64
    }

    pub fn beta_f64(&self) -> &[f64] {
        &self.beta_f64
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn max_weight(&self) -> f64 {
        self.q_f64.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_uniform(&self) -> bool {
        self.q.iter().all(|w| *w == self.q[0])
    }

    fn check_word(&self, w: &[Digit]) -> Result<()> {
        match w.iter().find(|&&d| d as usize >= self.s()) {
            Some(&d) => Err(QsError::DigitOutOfRange {
                digit: d as usize,
                s: self.s(),
            }),
            None => Ok(()),
        }
    }

    /// First `n` digits of `x ∈ [0, 1)`.
    ///
    /// Runs exactly when both the system and `x` are exact. The float path
    /// renormalizes the remainder into [0, 1) after every step.
    pub fn encode(&self, x: &Scalar, n: usize) -> Result<Encoded> {
        if x.is_negative() || *x >= Scalar::integer(1) || !x.to_f64().is_finite() {
            return Err(QsError::DomainError(format!(
                "x = {x} is outside [0, 1); 1 is only representable as the period-(s-1) word"
            )));
        }
        let backend = self.backend.combine(x.backend());
        let mut digits = Vec::with_capacity(n);
        match (backend, x) {
            (Backend::Exact, Scalar::Exact(x)) => {
                let mut y = x.clone();
                for _ in 0..n {
                    let j = self.select_exact(&y);
                    let (Scalar::Exact(b), Scalar::Exact(w)) = (&self.beta[j], &self.q[j]) else {
                        unreachable!("exact backend holds exact weights")
                    };
                    y = (y - b) / w;
                    digits.push(j as Digit);
                }
            }
            _ => {
                let mut y = x.to_f64();
                let below_one = 1.0 - f64::EPSILON / 2.0;
                for _ in 0..n {
                    let j = self.select_f64(y);
                    y = (y - self.beta_f64[j]) / self.q_f64[j];
                    if y < 0.0 {
                        y = 0.0;
                    } else if y >= 1.0 {
                        y = below_one;
                    }
                    digits.push(j as Digit);
                }
            }
        }
        Ok(Encoded {
            word: DigitWord::new_unchecked(digits, self.s()),
            backend,
        })
    }

    fn select_exact(&self, y: &num_rational::BigRational) -> usize {
        self.beta
            .iter()
            .rposition(|b| b.as_exact().is_some_and(|b| b <= y))
            .unwrap_or(0)
    }

    fn select_f64(&self, y: f64) -> usize {
        self.beta_f64.iter().rposition(|&b| b <= y).unwrap_or(0)
    }

    /// Partial sum of the series for a finite word (zero tail): the left
    /// endpoint of the word's cylinder.
    pub fn decode_word(&self, w: &DigitWord) -> Result<Scalar> {
        self.check_word(w.digits())?;
        Ok(self.partial_sum(w.digits()).0)
    }

    /// Returns (Σ β_{α_k} Π_{j<k} q_{α_j}, Π q_{α_k}).
    fn partial_sum(&self, w: &[Digit]) -> (Scalar, Scalar) {
        match self.backend {
            Backend::Exact => {
                let mut sum = Scalar::zero_like(Backend::Exact);
                let mut prod = Scalar::one_like(Backend::Exact);
                for &d in w {
                    sum = &sum + &(&self.beta[d as usize] * &prod);
                    prod = &prod * &self.q[d as usize];
                }
                (sum, prod)
            }
            Backend::Float => {
                let (sum, prod) = self.partial_sum_f64(w);
                (Scalar::Float(sum), Scalar::Float(prod))
            }
        }
    }

    fn partial_sum_f64(&self, w: &[Digit]) -> (f64, f64) {
        let mut sum = 0.0;
        let mut prod = 1.0;
        for &d in w {
            if prod == 0.0 {
                break;
            }
            sum += self.beta_f64[d as usize] * prod;
            prod *= self.q_f64[d as usize];
        }
        (sum, prod)
    }

    /// Float evaluation of a word regardless of backend; stops once the
    /// running weight product underflows.
    pub fn decode_f64(&self, w: &DigitWord) -> Result<f64> {
        self.check_word(w.digits())?;
        Ok(self.partial_sum_f64(w.digits()).0)
    }

    /// Value of an eventually periodic representation, via the geometric
    /// series over the period.
    pub fn decode_periodic(&self, p: &PeriodicDigits) -> Result<Scalar> {
        self.check_word(p.preperiod().digits())?;
        self.check_word(p.period().digits())?;
        let (lead, lead_prod) = self.partial_sum(p.preperiod().digits());
        let (per, per_prod) = self.partial_sum(p.period().digits());
        let one = Scalar::one_like(per_prod.backend());
        let v = &per / &(&one - &per_prod);
        Ok(&lead + &(&lead_prod * &v))
    }

    pub fn cylinder(&self, w: &DigitWord) -> Result<Cylinder> {
        self.check_word(w.digits())?;
        let (left, length) = self.partial_sum(w.digits());
        Ok(Cylinder {
            system: self.clone(),
            prefix: w.clone(),
            left,
            length,
        })
    }
}

impl Serialize for QsSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("QsSystem", 1)?;
        st.serialize_field("q", &self.q)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QsSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QsSystem, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            q: Vec<Scalar>,
        }
        let raw = Raw::deserialize(d)?;
        QsSystem::new(raw.q).map_err(serde::de::Error::custom)
    }
}

/// Output of [`QsSystem::encode`] with the backend that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Encoded {
    #[serde(rename = "digits")]
    pub word: DigitWord,
    pub backend: Backend,
}

/// The interval of numbers whose representation starts with `prefix`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cylinder {
    pub system: QsSystem,
    pub prefix: DigitWord,
    pub left: Scalar,
    pub length: Scalar,
}

impl Cylinder {
    pub fn right(&self) -> Scalar {
        &self.left + &self.length
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.left <= *x && *x < self.right()
    }
}

impl Serialize for Cylinder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Cylinder", 3)?;
        st.serialize_field("prefix", &self.prefix)?;
        st.serialize_field("left", &self.left)?;
        st.serialize_field("length", &self.length)?;
        st.end()
    }
}
