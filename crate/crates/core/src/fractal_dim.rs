//! Hausdorff–Besicovitch dimensions of digit-frequency sets and
//! digit-restricted Cantor sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::dim_opt::{self, LinearConstraint};
use crate::error::{QsError, Result};
use crate::qs_system::QsSystem;
use crate::scalar::{Backend, Rational, Scalar};

/// Tolerance on Σ τ_i = 1 for floating-point frequency vectors.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Moran root residual bound.
pub const MORAN_TOL: f64 = 1e-13;

/// A point τ on the probability simplex, the parameter of a
/// Besicovitch–Eggleston set E[τ_0, …, τ_{s−1}].
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    tau: Vec<Scalar>,
    backend: Backend,
}

impl FrequencyVector {
    pub fn new(tau: Vec<Scalar>) -> Result<FrequencyVector> {
        if tau.is_empty() {
            return Err(QsError::SimplexViolation("empty vector".into()));
        }
        let backend = tau
            .iter()
            .fold(Backend::Exact, |b, t| b.combine(t.backend()));
        let tau: Vec<Scalar> = match backend {
            Backend::Exact => tau,
            Backend::Float => tau.iter().map(Scalar::to_float).collect(),
        };
        if let Some((i, t)) = tau
            .iter()
            .enumerate()
            .find(|(_, t)| t.is_negative() || !t.to_f64().is_finite())
        {
            return Err(QsError::SimplexViolation(format!("tau_{i} = {t}")));
        }
        let sum = tau
            .iter()
            .fold(Scalar::zero_like(backend), |acc, t| &acc + t);
        let ok = match backend {
            Backend::Exact => sum == Scalar::integer(1),
            Backend::Float => (sum.to_f64() - 1.0).abs() <= SIMPLEX_TOL,
        };
        if !ok {
            return Err(QsError::SimplexViolation(format!("entries sum to {sum}")));
        }
        Ok(FrequencyVector { tau, backend })
    }

    pub fn from_f64(tau: &[f64]) -> Result<FrequencyVector> {
        FrequencyVector::new(tau.iter().map(|&t| Scalar::Float(t)).collect())
    }

    /// Uniform vector (1/s, …, 1/s), exact.
    pub fn uniform(s: usize) -> Result<FrequencyVector> {
        FrequencyVector::new(vec![Scalar::ratio(1, s as i64); s])
    }

    /// The vertex e_i, exact.
    pub fn vertex(s: usize, i: usize) -> Result<FrequencyVector> {
        if i >= s {
            return Err(QsError::DigitOutOfRange { digit: i, s });
        }
        FrequencyVector::new((0..s).map(|j| Scalar::integer(i64::from(i == j))).collect())
    }

    pub fn tau(&self) -> &[Scalar] {
        &self.tau
    }

    pub fn tau_f64(&self) -> Vec<f64> {
        self.tau.iter().map(Scalar::to_f64).collect()
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }
}

impl Serialize for FrequencyVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.tau.len()))?;
        for t in &self.tau {
            seq.serialize_element(&t.to_f64())?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionMethod {
    BeFormula,
    MoranBisection,
    ClosedForm,
    ConstrainedMax,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionResult {
    pub value: f64,
    pub method: DimensionMethod,
    pub residual: Option<f64>,
}

/// x·ln x with 0·ln 0 = 0.
pub(crate) fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Besicovitch–Eggleston dimension (Σ τ_i ln τ_i) / (Σ τ_i ln q_i).
pub fn be_dimension(system: &QsSystem, tau: &FrequencyVector) -> Result<DimensionResult> {
    if tau.len() != system.s() {
        return Err(QsError::SimplexViolation(format!(
            "vector has {} entries, system has {} digits",
            tau.len(),
            system.s()
        )));
    }
    let t = tau.tau_f64();
    be_value(system.q_f64(), &t).map(|value| DimensionResult {
        value,
        method: DimensionMethod::BeFormula,
        residual: None,
    })
}

pub(crate) fn be_value(q: &[f64], tau: &[f64]) -> Result<f64> {
    let num: f64 = tau.iter().map(|&t| xlogx(t)).sum();
    let den: f64 = tau
        .iter()
        .zip(q)
        .map(|(&t, &w)| if t == 0.0 { 0.0 } else { t * w.ln() })
        .sum();
    if den == 0.0 || !den.is_finite() {
        return Err(QsError::DegenerateDenominator);
    }
    let value = num / den;
    if !(-1e-9..=1.0 + 1e-9).contains(&value) {
        return Err(QsError::DimensionOutOfRange(value));
    }
    // also maps -0.0 to 0.0
    Ok(value.clamp(0.0, 1.0) + 0.0)
}

/// Dimension of C[Q_s, V], the set of numbers using only digits from V: the
/// root α of Σ_{i∈V} q_i^α = 1.
pub fn moran_dimension(system: &QsSystem, subset: &[usize]) -> Result<DimensionResult> {
    let s = system.s();
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if set.is_empty() {
        return Err(QsError::EmptySubset);
    }
    if let Some(&d) = set.iter().find(|&&d| d >= s) {
        return Err(QsError::DigitOutOfRange { digit: d, s });
    }
    let closed = |value| DimensionResult {
        value,
        method: DimensionMethod::ClosedForm,
        residual: Some(0.0),
    };
    if set.len() == s {
        return Ok(closed(1.0));
    }
    if set.len() == 1 {
        return Ok(closed(0.0));
    }
    let weights: Vec<f64> = set.iter().map(|&i| system.q_f64()[i]).collect();
    let g = |a: f64| weights.iter().map(|w| w.powf(a)).sum::<f64>() - 1.0;

    // g(0) = |V| - 1 > 0 and g(1) = Σ q_i - 1 < 0; g is strictly decreasing.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (alpha, residual) = [lo, hi]
        .into_iter()
        .map(|a| (a, g(a).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if residual > MORAN_TOL {
        return Err(QsError::SolverNotConverged(format!(
            "Moran residual {residual:e} above {MORAN_TOL:e}"
        )));
    }
    Ok(DimensionResult {
        value: alpha,
        method: DimensionMethod::MoranBisection,
        residual: Some(residual),
    })
}

/// Dimension k/(k+1) of the A_k family built from blocks of free digits
/// interleaved with forced 0…01…1 runs.
pub fn ak_dimension(k: u64) -> Result<Rational> {
    if k == 0 {
        return Err(QsError::NonPositiveK);
    }
    Ok(Rational::new(BigInt::from(k), BigInt::from(k) + 1))
}

/// Lower bound on the dimension of the level set S_θ = {x : r(x) = θ}: the
/// largest Besicovitch–Eggleston dimension among τ with Σ i·τ_i = θ.
///
/// For s = 3 the feasible segment is searched directly; other alphabets use
/// the exponential-family solver in [`dim_opt::maximize_be_linear`].
pub fn level_set_lower_bound(system: &QsSystem, theta: f64) -> Result<DimensionResult> {
    let s = system.s();
    let top = (s - 1) as f64;
    if !(0.0..=top).contains(&theta) || !theta.is_finite() {
        return Err(QsError::DomainError(format!(
            "theta = {theta} is outside [0, {top}]"
        )));
    }
    let constraint = LinearConstraint::new((0..s).map(|i| i as f64).collect(), theta)?;
    let opt = if s == 3 {
        dim_opt::maximize_be_constrained(system, &constraint)?
    } else {
        dim_opt::maximize_be_linear(system, &constraint)?
    };
    Ok(DimensionResult {
        value: opt.dim,
        method: DimensionMethod::ConstrainedMax,
        residual: Some(opt.constraint_residual),
    })
}
