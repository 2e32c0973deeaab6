//! Replicated experiments: type I error calibration of the two-sample test
//! under the null, and rejection rates when the scaling parameters differ.
//!
//! Replicate `k` draws its first sample from stream `2k` and its second from
//! stream `2k + 1` of the master seed, so replicates are independent of each
//! other and of execution order. They run in parallel on the rayon pool and
//! are aggregated in replicate order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::Estimator;
use crate::lrt::{two_sample_test, TestResult};
use crate::model::PowerLawModel;
use crate::sampling::{stream_rng, InverseCdf, SamplingMethod};
use crate::special::chi2_quantile_1df;

/// Probabilities at which empirical Λ quantiles are reported.
pub const REPORT_QUANTILES: [f64; 4] = [0.5, 0.9, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationConfig {
    pub alpha: f64,
    pub x_min: u64,
    pub n_per_sample: usize,
    pub replicates: usize,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub estimator: Estimator,
    pub method: SamplingMethod,
}

impl CalibrationConfig {
    pub fn new(alpha: f64, x_min: u64, n_per_sample: usize, replicates: usize, seed: u64) -> Self {
        Self {
            alpha,
            x_min,
            n_per_sample,
            replicates,
            levels: vec![0.05],
            seed,
            estimator: Estimator::Exact,
            method: SamplingMethod::ExactInverseCdf,
        }
    }

    fn validate(&self) -> Result<()> {
        validate_common(self.n_per_sample, self.replicates)?;
        if self.levels.is_empty() {
            return Err(Error::Config("at least one level is required".into()));
        }
        for &level in &self.levels {
            validate_level(level)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerConfig {
    pub alpha: f64,
    pub delta: f64,
    pub x_min: u64,
    pub n_per_sample: usize,
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
    pub estimator: Estimator,
    pub method: SamplingMethod,
}

impl PowerConfig {
    pub fn new(
        alpha: f64,
        delta: f64,
        x_min: u64,
        n_per_sample: usize,
        replicates: usize,
        seed: u64,
    ) -> Self {
        Self {
            alpha,
            delta,
            x_min,
            n_per_sample,
            replicates,
            level: 0.05,
            seed,
            estimator: Estimator::Exact,
            method: SamplingMethod::ExactInverseCdf,
        }
    }

    fn validate(&self) -> Result<()> {
        validate_common(self.n_per_sample, self.replicates)?;
        validate_level(self.level)?;
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!(
                "delta must be finite and nonnegative, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

fn validate_common(n_per_sample: usize, replicates: usize) -> Result<()> {
    if n_per_sample == 0 {
        return Err(Error::Config("n_per_sample must be at least 1".into()));
    }
    if replicates == 0 {
        return Err(Error::Config("replicates must be at least 1".into()));
    }
    Ok(())
}

fn validate_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Config(format!("level must lie in (0, 1), got {level}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedReplicate {
    pub replicate: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRate {
    pub level: f64,
    pub rejection_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileRow {
    pub probability: f64,
    pub empirical: f64,
    pub chi2_reference: f64,
}

/// Outcome of one completed replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub lambda: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub config: CalibrationConfig,
    pub replicates_run: usize,
    pub skipped: Vec<SkippedReplicate>,
    pub rejection_rate_per_level: Vec<LevelRate>,
    pub lambda_quantiles: Vec<QuantileRow>,
    pub records: Vec<ReplicateRecord>,
}

impl CalibrationReport {
    pub fn rejection_rate(&self, level: f64) -> Option<f64> {
        self.rejection_rate_per_level
            .iter()
            .find(|r| r.level == level)
            .map(|r| r.rejection_rate)
    }

    pub fn quantile(&self, probability: f64) -> Option<&QuantileRow> {
        self.lambda_quantiles.iter().find(|q| q.probability == probability)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerReport {
    pub config: PowerConfig,
    pub rejection_rate: f64,
    pub lambda_median: f64,
    pub replicates_run: usize,
    pub skipped: Vec<SkippedReplicate>,
    pub records: Vec<ReplicateRecord>,
}

/// Shared, read-only state for a batch of replicates.
struct Experiment {
    first: InverseCdf,
    second: InverseCdf,
    x_min: u64,
    n_per_sample: usize,
    seed: u64,
    estimator: Estimator,
    method: SamplingMethod,
}

impl Experiment {
    fn new(
        alpha_1: f64,
        alpha_2: f64,
        x_min: u64,
        n_per_sample: usize,
        seed: u64,
        estimator: Estimator,
        method: SamplingMethod,
    ) -> Result<Self> {
        let first = InverseCdf::new(PowerLawModel::new(alpha_1, x_min)?);
        let second = if alpha_2 == alpha_1 {
            first.clone()
        } else {
            InverseCdf::new(PowerLawModel::new(alpha_2, x_min)?)
        };
        Ok(Self {
            first,
            second,
            x_min,
            n_per_sample,
            seed,
            estimator,
            method,
        })
    }

    fn replicate(&self, k: usize) -> Result<TestResult> {
        let stream = 2 * k as u64;
        let mut rng1 = stream_rng(self.seed, stream);
        let mut rng2 = stream_rng(self.seed, stream + 1);
        let s1 = self.first.draw(&mut rng1, self.method, self.n_per_sample)?;
        let s2 = self.second.draw(&mut rng2, self.method, self.n_per_sample)?;
        two_sample_test(&s1, &s2, self.x_min, self.estimator)
    }

    fn run(&self, replicates: usize) -> Result<(Vec<ReplicateRecord>, Vec<SkippedReplicate>)> {
        let outcomes: Vec<Result<TestResult>> =
            (0..replicates).into_par_iter().map(|k| self.replicate(k)).collect();
        let mut records = Vec::with_capacity(replicates);
        let mut skipped = Vec::new();
        for (k, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Ok(r) => records.push(ReplicateRecord {
                    replicate: k,
                    lambda: r.lambda,
                    p_value: r.p_value,
                }),
                Err(e) => skipped.push(SkippedReplicate {
                    replicate: k,
                    reason: e.to_string(),
                }),
            }
        }
        if records.is_empty() {
            return Err(Error::NoReplicates {
                skipped: skipped.len(),
            });
        }
        Ok((records, skipped))
    }
}

fn rejection_rate(records: &[ReplicateRecord], level: f64) -> f64 {
    records.iter().filter(|r| r.p_value < level).count() as f64 / records.len() as f64
}

/// Linear-interpolation sample quantile of sorted data.
pub fn empirical_quantile(sorted: &[f64], probability: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * probability;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted_lambdas(records: &[ReplicateRecord]) -> Vec<f64> {
    let mut lambdas: Vec<f64> = records.iter().map(|r| r.lambda).collect();
    lambdas.sort_by(f64::total_cmp);
    lambdas
}

pub fn calibrate_null(config: &CalibrationConfig) -> Result<CalibrationReport> {
    config.validate()?;
    let experiment = Experiment::new(
        config.alpha,
        config.alpha,
        config.x_min,
        config.n_per_sample,
        config.seed,
        config.estimator,
        config.method,
    )?;
    let (records, skipped) = experiment.run(config.replicates)?;

    let rejection_rate_per_level = config
        .levels
        .iter()
        .map(|&level| LevelRate {
            level,
            rejection_rate: rejection_rate(&records, level),
        })
        .collect();

    let lambdas = sorted_lambdas(&records);
    let lambda_quantiles = REPORT_QUANTILES
        .iter()
        .map(|&p| {
            Ok(QuantileRow {
                probability: p,
                empirical: empirical_quantile(&lambdas, p),
                chi2_reference: chi2_quantile_1df(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CalibrationReport {
        config: config.clone(),
        replicates_run: records.len(),
        skipped,
        rejection_rate_per_level,
        lambda_quantiles,
        records,
    })
}

pub fn power_sweep(config: &PowerConfig) -> Result<PowerReport> {
    config.validate()?;
    let experiment = Experiment::new(
        config.alpha,
        config.alpha + config.delta,
        config.x_min,
        config.n_per_sample,
        config.seed,
        config.estimator,
        config.method,
    )?;
    let (records, skipped) = experiment.run(config.replicates)?;
    let lambdas = sorted_lambdas(&records);
    Ok(PowerReport {
        config: config.clone(),
        rejection_rate: rejection_rate(&records, config.level),
        lambda_median: empirical_quantile(&lambdas, 0.5),
        replicates_run: records.len(),
        skipped,
        records,
    })
}

/// Re-runs replicate `k` of a null calibration in isolation.
pub fn calibration_replicate(config: &CalibrationConfig, k: usize) -> Result<TestResult> {
    config.validate()?;
    Experiment::new(
        config.alpha,
        config.alpha,
        config.x_min,
        config.n_per_sample,
        config.seed,
        config.estimator,
        config.method,
    )?
    .replicate(k)
}

/// Re-runs replicate `k` of a power experiment in isolation.
pub fn power_replicate(config: &PowerConfig, k: usize) -> Result<TestResult> {
    config.validate()?;
    Experiment::new(
        config.alpha,
        config.alpha + config.delta,
        config.x_min,
        config.n_per_sample,
        config.seed,
        config.estimator,
        config.method,
    )?
    .replicate(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_replicate_rate_is_binary() {
        let cfg = CalibrationConfig::new(2.0, 1, 200, 1, 5);
        let report = calibrate_null(&cfg).unwrap();
        let rate = report.rejection_rate(0.05).unwrap();
        assert!(rate == 0.0 || rate == 1.0);
        assert_eq!(report.replicates_run, 1);
    }

    #[test]
    fn config_validation() {
        let mut cfg = CalibrationConfig::new(2.0, 1, 100, 10, 0);
        cfg.levels.clear();
        assert!(matches!(calibrate_null(&cfg), Err(Error::Config(_))));
        cfg.levels = vec![1.0];
        assert!(calibrate_null(&cfg).is_err());
        cfg.levels = vec![0.05];
        cfg.replicates = 0;
        assert!(calibrate_null(&cfg).is_err());

        let mut p = PowerConfig::new(2.0, -0.1, 1, 100, 10, 0);
        assert!(power_sweep(&p).is_err());
        p.delta = 0.1;
        p.n_per_sample = 0;
        assert!(power_sweep(&p).is_err());
    }

    #[test]
    fn skipped_replicates_are_reported() {
        // n = 2 at α = 3: both values equal 1 with probability ≈ 0.69
        let cfg = CalibrationConfig::new(3.0, 1, 2, 40, 9);
        let report = calibrate_null(&cfg).unwrap();
        assert!(!report.skipped.is_empty());
        assert_eq!(report.replicates_run + report.skipped.len(), 40);
        assert!(report.skipped[0].reason.contains("unbounded"));
    }

    #[test]
    fn empirical_quantile_interpolates() {
        let data = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(empirical_quantile(&data, 0.5), 2.0);
        assert_eq!(empirical_quantile(&data, 0.9), 3.6);
        assert_eq!(empirical_quantile(&[7.0], 0.99), 7.0);
    }

    #[test]
    fn delta_zero_reproduces_calibration() {
        let cal = CalibrationConfig::new(2.0, 1, 300, 30, 77);
        let pow = PowerConfig::new(2.0, 0.0, 1, 300, 30, 77);
        let a = calibrate_null(&cal).unwrap();
        let b = power_sweep(&pow).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.rejection_rate(0.05).unwrap(), b.rejection_rate);
    }
}
