//! Seeded stochastic experiments on digit sequences.
//!
//! Every trial draws from its own ChaCha8 stream selected by `(seed, trial)`,
//! so trials can run in any order (or in parallel) and still reproduce
//! bit-for-bit.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::digit_stats::RunningStats;
use crate::error::{QsError, Result};
use crate::fractal_dim::SIMPLEX_TOL;
use crate::qs_system::{Digit, DigitStream, DigitWord, QsSystem, DEFAULT_MAX_DIGITS};

/// Asymptotic Kolmogorov–Smirnov critical value at significance 0.01.
pub const KS_CRITICAL_001: f64 = 1.628;

/// Half-width, in standard deviations, of the per-digit Borel band.
pub const BOREL_SIGMAS: f64 = 4.0;

/// Generator for trial `trial` of an experiment seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn check_measure(measure: &[f64]) -> Result<()> {
    if measure.iter().any(|&p| !p.is_finite() || p < 0.0) {
        return Err(QsError::SimplexViolation(format!(
            "negative or non-finite entry in {measure:?}"
        )));
    }
    let sum: f64 = measure.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(QsError::SimplexViolation(format!(
            "digit measure sums to {sum}"
        )));
    }
    Ok(())
}

/// I.i.d. digits with a fixed law, reproducible from `(seed, trial)`.
#[derive(Debug, Clone)]
pub struct SeededDigits {
    table: WeightedIndex<f64>,
    s: usize,
    seed: u64,
    trial: u64,
    rng: ChaCha8Rng,
    pos: u64,
}

impl SeededDigits {
    pub fn new(measure: &[f64], seed: u64, trial: u64) -> Result<SeededDigits> {
        check_measure(measure)?;
        let s = measure.len();
        if !(2..=crate::qs_system::MAX_ALPHABET).contains(&s) {
            return Err(QsError::AlphabetSize(s));
        }
        let table = WeightedIndex::new(measure.iter().copied())
            .map_err(|e| QsError::SimplexViolation(e.to_string()))?;
        Ok(SeededDigits {
            table,
            s,
            seed,
            trial,
            rng: trial_rng(seed, trial),
            pos: 0,
        })
    }

    pub fn uniform(s: usize, seed: u64, trial: u64) -> Result<SeededDigits> {
        SeededDigits::new(&vec![1.0 / s as f64; s], seed, trial)
    }
}

impl DigitStream for SeededDigits {
    fn alphabet(&self) -> usize {
        self.s
    }

    fn next_digit(&mut self) -> Option<Digit> {
        self.pos += 1;
        Some(self.table.sample(&mut self.rng) as Digit)
    }

    fn position(&self) -> u64 {
        self.pos
    }

    fn reset(&mut self) {
        self.rng = trial_rng(self.seed, self.trial);
        self.pos = 0;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub system: QsSystem,
    pub digit_measure: Vec<f64>,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Digits drawn with P(i) = q_i, which makes the decoded number
    /// Lebesgue-uniform on [0, 1].
    pub fn lebesgue(system: QsSystem, n: u64, trials: u64, seed: u64) -> ExperimentConfig {
        let digit_measure = system.q_f64().to_vec();
        ExperimentConfig {
            system,
            digit_measure,
            n,
            trials,
            seed,
        }
    }

    pub fn with_measure(mut self, measure: Vec<f64>) -> ExperimentConfig {
        self.digit_measure = measure;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.digit_measure.len() != self.system.s() {
            return Err(QsError::SimplexViolation(format!(
                "digit measure has {} entries, system has {} digits",
                self.digit_measure.len(),
                self.system.s()
            )));
        }
        check_measure(&self.digit_measure)?;
        if self.n == 0 || self.trials == 0 {
            return Err(QsError::InvalidConfig(
                "n and trials must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_lebesgue(&self) -> bool {
        self.digit_measure
            .iter()
            .zip(self.system.q_f64())
            .all(|(p, q)| (p - q).abs() <= SIMPLEX_TOL)
    }

    pub fn digits(&self, trial: u64) -> Result<SeededDigits> {
        SeededDigits::new(&self.digit_measure, self.seed, trial)
    }
}

/// The first `n` digits of trial `trial`.
pub fn sample_digit_prefix(cfg: &ExperimentConfig, trial: u64) -> Result<DigitWord> {
    cfg.validate()?;
    cfg.digits(trial)?.take_word(cfg.n, DEFAULT_MAX_DIGITS)
}

/// Float value of trial `trial`'s prefix. Equal to decoding the full word,
/// but stops drawing once the remaining weight underflows.
pub fn sample_value(cfg: &ExperimentConfig, trial: u64) -> Result<f64> {
    cfg.validate()?;
    let mut digits = cfg.digits(trial)?;
    let q = cfg.system.q_f64();
    let beta = cfg.system.beta_f64();
    let (mut sum, mut prod) = (0.0, 1.0);
    for _ in 0..cfg.n {
        if prod == 0.0 {
            break;
        }
        let d = digits.next_digit().expect("seeded stream is infinite") as usize;
        sum += beta[d] * prod;
        prod *= q[d];
    }
    Ok(sum)
}

/// Decoded values of every trial, in trial order.
pub fn decoded_samples(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| sample_value(cfg, t))
        .collect()
}

fn trial_stats(cfg: &ExperimentConfig, trial: u64) -> Result<RunningStats> {
    let mut digits = cfg.digits(trial)?;
    let mut stats = RunningStats::new(cfg.system.s());
    for _ in 0..cfg.n {
        let d = digits.next_digit().expect("seeded stream is infinite");
        stats.accumulate(d as usize)?;
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorelReport {
    pub config: ExperimentConfig,
    pub per_trial_max_dev: Vec<f64>,
    pub per_trial_pass: Vec<bool>,
    pub per_trial_mean: Vec<f64>,
    pub per_digit_tolerance: Vec<f64>,
    pub pass_fraction: f64,
    pub mean_of_means: f64,
    pub expected_mean: f64,
    pub identity_holds: bool,
}

/// Empirical check that digit frequencies of Lebesgue-random numbers sit
/// near q_i: trial passes when every |ν̂_i − q_i| ≤ 4·sqrt(q_i(1 − q_i)/n).
pub fn borel_experiment(cfg: &ExperimentConfig) -> Result<BorelReport> {
    cfg.validate()?;
    if !cfg.is_lebesgue() {
        return Err(QsError::NotLebesgueMode);
    }
    let q = cfg.system.q_f64();
    let n = cfg.n as f64;
    let tolerance: Vec<f64> = q
        .iter()
        .map(|&p| BOREL_SIGMAS * (p * (1.0 - p) / n).sqrt())
        .collect();
    let stats: Vec<RunningStats> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial_stats(cfg, t))
        .collect::<Result<_>>()?;

    let mut per_trial_max_dev = Vec::with_capacity(stats.len());
    let mut per_trial_pass = Vec::with_capacity(stats.len());
    for st in &stats {
        let devs: Vec<f64> = q
            .iter()
            .enumerate()
            .map(|(i, p)| (st.freq(i) - p).abs())
            .collect();
        per_trial_max_dev.push(devs.iter().cloned().fold(0.0, f64::max));
        per_trial_pass.push(devs.iter().zip(&tolerance).all(|(d, t)| d <= t));
    }
    let per_trial_mean: Vec<f64> = stats.iter().map(RunningStats::mean).collect();
    let passed = per_trial_pass.iter().filter(|&&p| p).count();
    Ok(BorelReport {
        config: cfg.clone(),
        per_trial_max_dev,
        per_digit_tolerance: tolerance,
        pass_fraction: passed as f64 / cfg.trials as f64,
        mean_of_means: per_trial_mean.iter().sum::<f64>() / cfg.trials as f64,
        per_trial_pass,
        per_trial_mean,
        expected_mean: q.iter().enumerate().map(|(i, p)| i as f64 * p).sum(),
        identity_holds: stats.iter().all(RunningStats::is_consistent),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanHistogram {
    pub config: ExperimentConfig,
    pub bins: Vec<HistogramBin>,
    pub bin_width: f64,
    pub mean: f64,
    pub variance: f64,
    pub expected_mean: f64,
    pub expected_variance: f64,
    pub means: Vec<f64>,
}

/// Histogram over [0, s−1] of the running mean r̂_n across trials, under any
/// digit law.
pub fn mean_distribution_experiment(cfg: &ExperimentConfig, bins: usize) -> Result<MeanHistogram> {
    cfg.validate()?;
    if bins == 0 {
        return Err(QsError::InvalidConfig(
            "histogram needs at least one bin".into(),
        ));
    }
    let top = (cfg.system.s() - 1) as f64;
    let means: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial_stats(cfg, t).map(|st| st.mean()))
        .collect::<Result<_>>()?;

    let width = top / bins as f64;
    let mut counts = vec![0u64; bins];
    for &m in &means {
        let idx = ((m / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let trials = means.len() as f64;
    let mean = means.iter().sum::<f64>() / trials;
    let variance = if means.len() > 1 {
        means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (trials - 1.0)
    } else {
        0.0
    };
    let p = &cfg.digit_measure;
    let mu: f64 = p.iter().enumerate().map(|(i, w)| i as f64 * w).sum();
    let digit_var: f64 = p
        .iter()
        .enumerate()
        .map(|(i, w)| w * (i as f64 - mu).powi(2))
        .sum();
    Ok(MeanHistogram {
        config: cfg.clone(),
        bins: counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| HistogramBin {
                bin_left: i as f64 * width,
                count,
            })
            .collect(),
        bin_width: width,
        mean,
        variance,
        expected_mean: mu,
        expected_variance: digit_var / cfg.n as f64,
        means,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical_value: f64,
    pub n: usize,
    pub passes: bool,
}

/// One-sample Kolmogorov–Smirnov test against Uniform[0, 1] at significance
/// 0.01, with Stephens' finite-n scaling of the critical value.
pub fn ks_uniform(samples: &[f64]) -> KsReport {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let nf = n as f64;
    let statistic = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            ((i as f64 + 1.0) / nf - x).max(x - i as f64 / nf)
        })
        .fold(0.0, f64::max);
    let root = nf.sqrt();
    let critical_value = KS_CRITICAL_001 / (root + 0.12 + 0.11 / root);
    KsReport {
        statistic,
        critical_value,
        n,
        passes: statistic <= critical_value,
    }
}
