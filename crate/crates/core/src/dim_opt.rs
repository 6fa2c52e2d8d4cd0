//! Constrained maximization of the Besicovitch–Eggleston dimension.
//!
//! The M₀ problem (r = ν₀ in base 3) reduces, with x = ν₂, ν₁ = 1/2 − 3x/2
//! and ν₀ = 1/2 + x/2, to maximizing
//!
//! ```text
//! y(x) = −(x ln x + ν₁ ln ν₁ + ν₀ ln ν₀) / ln 3,   0 < x < 1/3,
//! ```
//!
//! whose stationarity condition x²(1+x) · 4 = (1 − 3x)³ is the cubic
//! 31x³ − 23x² + 9x − 1 = 0. Its single real root is
//!
//! ```text
//! x = (23 + ∛(−3736 + √43175808) + ∛(−3736 − √43175808)) / 93 ≈ 0.165487
//! ```
//!
//! The optimum is computed both from the cubic and by golden-section search
//! on y, and the two must agree.

use serde::Serialize;

use crate::error::{QsError, Result};
use crate::fractal_dim::{be_dimension, be_value, xlogx, FrequencyVector};
use crate::qs_system::QsSystem;

/// Default abscissa tolerance for golden-section search.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Maximum allowed distance between the Cardano and golden-section optima.
pub const AGREEMENT_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cubic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Cubic {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Cubic> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(QsError::DomainError(
                "cubic coefficients must be finite".into(),
            ));
        }
        if a == 0.0 {
            return Err(QsError::DegenerateLeadingCoefficient);
        }
        Ok(Cubic { a, b, c, d })
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.a * x + self.b) * x + self.c) * x + self.d
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.a * x + 2.0 * self.b) * x + self.c
    }

    /// Δ = 18abcd − 4b³d + b²c² − 4ac³ − 27a²d². Positive: three distinct
    /// real roots; zero: a repeated root; negative: one real root.
    pub fn discriminant(&self) -> f64 {
        let Cubic { a, b, c, d } = *self;
        18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c
            - 4.0 * a * c.powi(3)
            - 27.0 * a * a * d * d
    }

    /// Residual bound used to accept a root: 1e−12 · max(1, max |coeff|).
    pub fn residual_bound(&self) -> f64 {
        1e-12
            * [1.0, self.a.abs(), self.b.abs(), self.c.abs(), self.d.abs()]
                .into_iter()
                .fold(0.0, f64::max)
    }

    /// Acceptance bound at `x`: the coefficient bound, widened to the
    /// evaluation scale Σ|c_i||x|^(3−i) when that is larger.
    pub fn residual_bound_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        let scale =
            self.a.abs() * ax.powi(3) + self.b.abs() * ax * ax + self.c.abs() * ax + self.d.abs();
        self.residual_bound().max(1e-12 * scale)
    }

    fn polish(&self, mut x: f64) -> f64 {
        let mut fx = self.eval(x).abs();
        for _ in 0..16 {
            if fx == 0.0 {
                break;
            }
            let dfx = self.derivative(x);
            if dfx == 0.0 {
                break;
            }
            let next = x - self.eval(x) / dfx;
            let fnext = self.eval(next).abs();
            if fnext.is_nan() || fnext >= fx {
                break;
            }
            x = next;
            fx = fnext;
        }
        x
    }
}

/// All real roots in ascending order, repeated roots reported once.
///
/// Uses the trigonometric form when there are three real roots and the
/// cancellation-free Cardano radical otherwise, then Newton-polishes each
/// root against the original coefficients.
pub fn solve_cubic_real(cubic: &Cubic) -> Result<Vec<f64>> {
    let Cubic { a, b, c, d } = *cubic;
    if a == 0.0 {
        return Err(QsError::DegenerateLeadingCoefficient);
    }
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    // depressed cubic t³ + p t + q = 0 with x = t − b/3
    let p = c - b * b / 3.0;
    let q = 2.0 * b.powi(3) / 27.0 - b * c / 3.0 + d;
    let half_q = q / 2.0;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p.powi(3);
    let scale = half_q * half_q + third_p.abs().powi(3);

    let mut ts = Vec::with_capacity(3);
    if disc.abs() <= 1e-14 * scale || scale == 0.0 {
        if third_p.abs() <= f64::EPSILON * (1.0 + b * b) {
            ts.push(0.0);
        } else {
            ts.push(3.0 * q / p);
            ts.push(-1.5 * q / p);
        }
    } else if disc < 0.0 {
        let r = 2.0 * (-third_p).sqrt();
        let cos_arg = (half_q / third_p * (-1.0 / third_p).sqrt()).clamp(-1.0, 1.0);
        let phi = cos_arg.acos() / 3.0;
        for k in 0..3 {
            ts.push(r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
        }
    } else {
        let u = (-half_q - half_q.signum() * disc.sqrt()).cbrt();
        let u = if half_q == 0.0 { disc.sqrt().cbrt() } else { u };
        let v = if u == 0.0 { 0.0 } else { -third_p / u };
        ts.push(u + v);
    }

    let mut roots: Vec<f64> = ts.into_iter().map(|t| cubic.polish(t - shift)).collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * x.abs().max(1.0));

    if let Some(r) = roots
        .iter()
        .find(|&&r| cubic.eval(r).abs() > cubic.residual_bound_at(r))
    {
        return Err(QsError::SolverNotConverged(format!(
            "root {r} has residual {:e}",
            cubic.eval(*r).abs()
        )));
    }
    Ok(roots)
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns the midpoint of the final bracket (width ≤ `tol`) and `f` there.
pub fn maximize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi || tol.is_nan() || tol <= 0.0 {
        return Err(QsError::InvalidInterval { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
        if x1 <= a || x2 >= b {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    let value = f(mid);
    if !value.is_finite() {
        return Err(QsError::DomainError(format!(
            "objective is not finite at {mid}"
        )));
    }
    Ok((mid, value))
}

/// The M₀ objective y(x) with x = ν₂ ∈ [0, 1/3].
pub fn m0_objective(x: f64) -> f64 {
    let nu1 = 0.5 - 1.5 * x;
    let nu0 = 0.5 + 0.5 * x;
    -(xlogx(x) + xlogx(nu1) + xlogx(nu0)) / 3f64.ln()
}

/// y'(x) = −ln(x²(1/2 + x/2) / (1/2 − 3x/2)³) / (2 ln 3).
pub fn m0_derivative(x: f64) -> f64 {
    let ratio = x * x * (0.5 + 0.5 * x) / (0.5 - 1.5 * x).powi(3);
    -ratio.ln() / (2.0 * 3f64.ln())
}

/// The stationarity cubic of the M₀ objective.
pub fn m0_cubic() -> Cubic {
    Cubic {
        a: 31.0,
        b: -23.0,
        c: 9.0,
        d: -1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M0Optimum {
    pub tau: FrequencyVector,
    pub dim: f64,
    pub method: &'static str,
    pub stationarity_root: f64,
    pub golden_argmax: f64,
    pub agreement: f64,
    pub constraint_residual: f64,
    pub stationarity_residual: f64,
}

/// Maximum dimension over Besicovitch–Eggleston sets with r = ν₀ in base 3.
pub fn m0_optimum() -> Result<M0Optimum> {
    let roots = solve_cubic_real(&m0_cubic())?;
    let root = roots
        .iter()
        .copied()
        .find(|&r| r > 0.0 && r < 1.0 / 3.0)
        .ok_or_else(|| QsError::InternalDisagreement("no stationary point in (0, 1/3)".into()))?;
    let (golden, _) = maximize_1d(m0_objective, 0.0, 1.0 / 3.0, DEFAULT_TOL)?;
    let agreement = (root - golden).abs();
    if agreement > AGREEMENT_TOL {
        return Err(QsError::InternalDisagreement(format!(
            "Cardano root {root} vs golden-section argmax {golden}"
        )));
    }
    let tau = FrequencyVector::from_f64(&[0.5 + 0.5 * root, 0.5 - 1.5 * root, root])?;
    let t = tau.tau_f64();
    let dim = be_dimension(&QsSystem::uniform(3)?, &tau)?.value;
    Ok(M0Optimum {
        tau,
        dim,
        method: "cardano+golden_section",
        stationarity_root: root,
        golden_argmax: golden,
        agreement,
        constraint_residual: (2.0 * t[1] + 3.0 * t[2] - 1.0).abs(),
        stationarity_residual: m0_derivative(root).abs(),
    })
}

/// Note attached to the M₁ report.
pub const M1_ERRATUM: &str = "the M1 lower bound is log_3 2 = ln 2 / ln 3 ~ 0.6309; \
     the value log_2 3 ~ 1.585 exceeds 1 and cannot be the dimension of a subset of [0, 1]";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M1Optimum {
    pub tau: FrequencyVector,
    pub dim: f64,
    pub method: &'static str,
    pub golden_argmax: f64,
    pub stationarity_residual: f64,
    pub erratum: &'static str,
}

/// Binary entropy in nats.
fn binary_entropy(p: f64) -> f64 {
    -(xlogx(p) + xlogx(1.0 - p))
}

/// Maximum dimension over Besicovitch–Eggleston sets with r = ν₁ in base 3,
/// which forces ν₂ = 0 and ν₁ = 1 − ν₀.
pub fn m1_optimum() -> Result<M1Optimum> {
    // d/dp H(p) = ln((1 − p)/p) vanishes iff 2p − 1 = 0.
    let p = 1.0 / 2.0;
    let (golden, _) = maximize_1d(binary_entropy, 0.0, 1.0, DEFAULT_TOL)?;
    if (golden - p).abs() > AGREEMENT_TOL {
        return Err(QsError::InternalDisagreement(format!(
            "stationary point {p} vs golden-section argmax {golden}"
        )));
    }
    let tau = FrequencyVector::from_f64(&[p, 1.0 - p, 0.0])?;
    let dim = be_dimension(&QsSystem::uniform(3)?, &tau)?.value;
    Ok(M1Optimum {
        tau,
        dim,
        method: "stationarity+golden_section",
        golden_argmax: golden,
        stationarity_residual: ((1.0 - p) / p).ln().abs(),
        erratum: M1_ERRATUM,
    })
}

/// Dimension of M₂ = E[1, 0, 0]: r = ν₂ forces ν₁ = ν₂ = 0.
pub fn m2_dimension() -> Result<crate::scalar::Rational> {
    let tau = FrequencyVector::vertex(3, 0)?;
    let value = be_dimension(&QsSystem::uniform(3)?, &tau)?.value;
    crate::scalar::Rational::from_float(value)
        .ok_or_else(|| QsError::InternalDisagreement(format!("dimension {value} is not finite")))
}

/// Σ coeffs_i · τ_i = rhs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Result<LinearConstraint> {
        if coeffs.is_empty() || !coeffs.iter().chain([&rhs]).all(|v| v.is_finite()) {
            return Err(QsError::VacuousConstraint(
                "coefficients must be finite and nonempty".into(),
            ));
        }
        if coeffs.iter().all(|&c| c == coeffs[0]) {
            return Err(QsError::VacuousConstraint(
                "all coefficients are equal".into(),
            ));
        }
        Ok(LinearConstraint { coeffs, rhs })
    }

    /// Parses `"c0,c1,c2=b"`.
    pub fn parse(s: &str) -> Result<LinearConstraint> {
        let bad = || QsError::ParseNumber(s.to_string());
        let (lhs, rhs) = s.split_once('=').ok_or_else(bad)?;
        let coeffs = lhs
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let rhs = rhs.trim().parse::<f64>().map_err(|_| bad())?;
        LinearConstraint::new(coeffs, rhs)
    }

    pub fn residual(&self, tau: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().zip(tau).map(|(c, t)| c * t).sum();
        (lhs - self.rhs).abs()
    }

    fn check_len(&self, s: usize) -> Result<()> {
        if self.coeffs.len() != s {
            return Err(QsError::VacuousConstraint(format!(
                "{} coefficients for an alphabet of size {s}",
                self.coeffs.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedOptimum {
    pub tau: FrequencyVector,
    pub dim: f64,
    pub method: &'static str,
    pub constraint_residual: f64,
    pub stationarity_residual: Option<f64>,
}

fn clean_simplex(mut tau: Vec<f64>) -> Result<FrequencyVector> {
    for t in tau.iter_mut() {
        if *t < 0.0 {
            *t = 0.0;
        }
    }
    let sum: f64 = tau.iter().sum();
    tau.iter_mut().for_each(|t| *t /= sum);
    FrequencyVector::from_f64(&tau)
}

/// Feasible segment {τ ∈ simplex : c·τ = b} of a three-letter alphabet, as
/// its two endpoints (equal when the segment is a single point).
fn feasible_segment(constraint: &LinearConstraint) -> Result<([f64; 3], [f64; 3])> {
    let c = &constraint.coeffs;
    let b = constraint.rhs;
    let tol = 1e-12 * c.iter().fold(b.abs(), |m, v| m.max(v.abs())).max(1.0);
    let mut points: Vec<[f64; 3]> = Vec::new();
    for i in 0..3 {
        if (c[i] - b).abs() <= tol {
            let mut v = [0.0; 3];
            v[i] = 1.0;
            points.push(v);
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (di, dj) = (c[i] - b, c[j] - b);
        if di.abs() > tol && dj.abs() > tol && di * dj < 0.0 {
            let ti = dj / (dj - di);
            let mut v = [0.0; 3];
            v[i] = ti;
            v[j] = 1.0 - ti;
            points.push(v);
        }
    }
    let dist =
        |p: &[f64; 3], q: &[f64; 3]| p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    let mut best: Option<(f64, [f64; 3], [f64; 3])> = None;
    for p in &points {
        for q in &points {
            let d = dist(p, q);
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, *p, *q));
            }
        }
    }
    best.map(|(_, p, q)| (p, q))
        .ok_or(QsError::InfeasibleConstraint)
}

/// Maximizes the dimension over the feasible segment of a three-letter
/// alphabet by golden-section search on the segment parameter.
///
/// The objective is a concave function over a positive affine one, so it is
/// unimodal along the segment and the search finds the global maximum.
pub fn maximize_be_constrained(
    system: &QsSystem,
    constraint: &LinearConstraint,
) -> Result<ConstrainedOptimum> {
    if system.s() != 3 {
        return Err(QsError::DomainError(format!(
            "segment search needs s = 3, got {}; use maximize_be_linear",
            system.s()
        )));
    }
    constraint.check_len(3)?;
    let (p, q) = feasible_segment(constraint)?;
    let weights = system.q_f64();
    let point = |u: f64| -> [f64; 3] {
        let mut v = [0.0; 3];
        for i in 0..3 {
            v[i] = (p[i] + u * (q[i] - p[i])).max(0.0);
        }
        v
    };
    let objective = |u: f64| be_value(weights, &point(u)).unwrap_or(f64::NEG_INFINITY);

    let length: f64 = p
        .iter()
        .zip(&q)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let (u, stationarity) = if length <= 1e-15 {
        (0.0, None)
    } else {
        let (u, _) = maximize_1d(objective, 0.0, 1.0, DEFAULT_TOL)?;
        let h = 1e-6;
        let fd = (u > h && u < 1.0 - h)
            .then(|| ((objective(u + h) - objective(u - h)) / (2.0 * h)).abs());
        (u, fd)
    };
    let tau = clean_simplex(point(u).to_vec())?;
    let dim = be_dimension(system, &tau)?.value;
    Ok(ConstrainedOptimum {
        constraint_residual: constraint.residual(&tau.tau_f64()),
        tau,
        dim,
        method: "segment_golden_section",
        stationarity_residual: stationarity,
    })
}

/// Maximizes the dimension subject to one linear constraint, any alphabet.
///
/// Dinkelbach iteration on the ratio H(τ)/L(τ) with L(τ) = −Σ τ_i ln q_i.
/// Each inner problem max H − αL subject to c·τ = b is solved by the
/// exponential family τ_i ∝ q_i^α e^{λ c_i}, with λ found by bisection.
pub fn maximize_be_linear(
    system: &QsSystem,
    constraint: &LinearConstraint,
) -> Result<ConstrainedOptimum> {
    let s = system.s();
    constraint.check_len(s)?;
    let c = &constraint.coeffs;
    let b = constraint.rhs;
    let log_q: Vec<f64> = system.q_f64().iter().map(|w| w.ln()).collect();
    let (cmin, cmax) = c
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let tol = 1e-12 * cmax.abs().max(cmin.abs()).max(b.abs()).max(1.0);
    if b < cmin - tol || b > cmax + tol {
        return Err(QsError::InfeasibleConstraint);
    }

    // On a boundary value of c·τ only the extremal face is feasible.
    let face: Option<Vec<usize>> = if (b - cmin).abs() <= tol {
        Some((0..s).filter(|&i| (c[i] - cmin).abs() <= tol).collect())
    } else if (b - cmax).abs() <= tol {
        Some((0..s).filter(|&i| (c[i] - cmax).abs() <= tol).collect())
    } else {
        None
    };

    let gibbs = |alpha: f64, lambda: f64, support: &[usize]| -> Vec<f64> {
        let logits: Vec<f64> = support
            .iter()
            .map(|&i| alpha * log_q[i] + lambda * c[i])
            .collect();
        let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
        let z: f64 = w.iter().sum();
        let mut tau = vec![0.0; s];
        for (k, &i) in support.iter().enumerate() {
            tau[i] = w[k] / z;
        }
        tau
    };
    let mean_c = |tau: &[f64]| tau.iter().zip(c).map(|(t, v)| t * v).sum::<f64>();

    let all: Vec<usize> = (0..s).collect();
    let inner = |alpha: f64| -> Vec<f64> {
        if let Some(f) = &face {
            return gibbs(alpha, 0.0, f);
        }
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while mean_c(&gibbs(alpha, lo, &all)) > b && lo > -1e12 {
            lo *= 2.0;
        }
        while mean_c(&gibbs(alpha, hi, &all)) < b && hi < 1e12 {
            hi *= 2.0;
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if mean_c(&gibbs(alpha, mid, &all)) < b {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        gibbs(alpha, 0.5 * (lo + hi), &all)
    };

    let weights = system.q_f64();
    let mut alpha = 0.0;
    let mut tau = inner(alpha);
    for _ in 0..200 {
        let next = be_value(weights, &tau)?;
        let done = (next - alpha).abs() <= 1e-15;
        alpha = next;
        if done {
            break;
        }
        tau = inner(alpha);
    }
    let tau = clean_simplex(tau)?;
    let dim = be_dimension(system, &tau)?.value;
    Ok(ConstrainedOptimum {
        constraint_residual: constraint.residual(&tau.tau_f64()),
        tau,
        dim,
        method: "dinkelbach_exponential_family",
        stationarity_residual: None,
    })
}
