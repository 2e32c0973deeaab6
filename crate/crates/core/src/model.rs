//! The discrete power-law distribution on `{x_min, x_min + 1, ...}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{hurwitz_zeta, MAX_EXPONENT};

/// Discrete power law p(x) = x^{-α} / ζ(α, x_min) for x ≥ x_min.
///
/// The normalizing constant ζ(α, x_min) is computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawModel {
    alpha: f64,
    x_min: u64,
    #[serde(skip)]
    normalizer: f64,
}

impl PowerLawModel {
    pub fn new(alpha: f64, x_min: u64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= MAX_EXPONENT) {
            return Err(Error::Domain(format!(
                "alpha must lie in (1, {MAX_EXPONENT}], got {alpha}"
            )));
        }
        if x_min == 0 {
            return Err(Error::Domain("x_min must be at least 1".into()));
        }
        let normalizer = hurwitz_zeta(alpha, x_min as f64)?;
        Ok(Self {
            alpha,
            x_min,
            normalizer,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x_min(&self) -> u64 {
        self.x_min
    }

    /// ζ(α, x_min).
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    fn check_support(&self, x: u64) -> Result<()> {
        if x < self.x_min {
            return Err(Error::BelowSupport {
                value: x,
                x_min: self.x_min,
            });
        }
        Ok(())
    }

    pub fn pmf(&self, x: u64) -> Result<f64> {
        self.check_support(x)?;
        Ok((x as f64).powf(-self.alpha) / self.normalizer)
    }

    /// Inclusive tail Pr(X ≥ x) = ζ(α, x) / ζ(α, x_min); equals 1 at x_min.
    pub fn ccdf(&self, x: u64) -> Result<f64> {
        self.check_support(x)?;
        Ok(hurwitz_zeta(self.alpha, x as f64)? / self.normalizer)
    }

    /// Pr(X ≤ x) = 1 − ζ(α, x + 1) / ζ(α, x_min).
    pub fn cdf(&self, x: u64) -> Result<f64> {
        self.check_support(x)?;
        Ok(1.0 - hurwitz_zeta(self.alpha, x as f64 + 1.0)? / self.normalizer)
    }

    /// Discrete log-likelihood l(α) = −n ln ζ(α, x_min) − α Σ ln xᵢ.
    pub fn log_likelihood(&self, sample: &Sample) -> Result<f64> {
        self.check_support(sample.min())?;
        Ok(log_likelihood_from_stats(
            self.alpha,
            self.normalizer,
            sample.len(),
            sample.sum_log(),
        ))
    }
}

pub(crate) fn log_likelihood_from_stats(alpha: f64, normalizer: f64, n: usize, sum_log: f64) -> f64 {
    -(n as f64) * normalizer.ln() - alpha * sum_log
}

/// A non-empty multiset of positive integers.
///
/// Values are kept sorted; `n` and Σ ln xᵢ are computed once, over the
/// sorted values, so any permutation of the input yields an identical sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Sample {
    values: Vec<u64>,
    sum_log: f64,
}

impl Sample {
    pub fn new(mut values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.contains(&0) {
            return Err(Error::ZeroValue);
        }
        values.sort_unstable();
        let sum_log = values.iter().map(|&v| (v as f64).ln()).sum();
        Ok(Self { values, sum_log })
    }

    /// Multiset union, duplicates kept.
    pub fn pooled(a: &Sample, b: &Sample) -> Sample {
        let mut values = Vec::with_capacity(a.len() + b.len());
        values.extend_from_slice(&a.values);
        values.extend_from_slice(&b.values);
        Sample::new(values).expect("union of valid samples is valid")
    }

    /// Drops values below `x_min`; returns the remaining sample (if any) and
    /// the number of dropped values.
    pub fn truncated(&self, x_min: u64) -> (Option<Sample>, usize) {
        let start = self.values.partition_point(|&v| v < x_min);
        let kept = self.values[start..].to_vec();
        let sample = if kept.is_empty() {
            None
        } else {
            Some(Sample::new(kept).expect("subset of a valid sample is valid"))
        };
        (sample, start)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sorted values.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn sum_log(&self) -> f64 {
        self.sum_log
    }

    pub fn min(&self) -> u64 {
        self.values[0]
    }

    pub fn max(&self) -> u64 {
        self.values[self.values.len() - 1]
    }

    /// Fails with [`Error::BelowSupport`] if any value is below `x_min`.
    pub fn check_support(&self, x_min: u64) -> Result<()> {
        if self.min() < x_min {
            return Err(Error::BelowSupport {
                value: self.min(),
                x_min,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<u64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<u64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl From<Sample> for Vec<u64> {
    fn from(sample: Sample) -> Self {
        sample.values
    }
}

/// One point of a CCDF series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcdfPoint {
    pub x: u64,
    pub proportion: f64,
}

/// Empirical inclusive tail: for each distinct value x, the fraction of
/// values ≥ x.
pub fn empirical_ccdf(sample: &Sample) -> Vec<CcdfPoint> {
    let values = sample.values();
    let n = values.len() as f64;
    let mut points = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let x = values[i];
        points.push(CcdfPoint {
            x,
            proportion: (values.len() - i) as f64 / n,
        });
        i += values[i..].partition_point(|&v| v == x);
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn model(alpha: f64, x_min: u64) -> PowerLawModel {
        PowerLawModel::new(alpha, x_min).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(PowerLawModel::new(1.0, 1).is_err());
        assert!(PowerLawModel::new(0.5, 1).is_err());
        assert!(PowerLawModel::new(f64::NAN, 1).is_err());
        assert!(PowerLawModel::new(2.0, 0).is_err());
        assert!(PowerLawModel::new(60.0, 1).is_err());
        assert!(PowerLawModel::new(1.0001, 1).is_ok());
    }

    #[test]
    fn pmf_values() {
        let m = model(2.0, 1);
        assert!((m.pmf(1).unwrap() - 6.0 / (PI * PI)).abs() < 1e-15);
        assert!((m.pmf(1).unwrap() - 0.6079271019).abs() < 1e-10);
        assert!(matches!(m.pmf(0), Err(Error::BelowSupport { .. })));

        // 4^{-2.5} / ζ(2.5, 3), ζ from the brute-force oracle
        let m = model(2.5, 3);
        assert!((m.pmf(4).unwrap() - 0.18972675236621590).abs() < 1e-14);
        assert!(m.pmf(2).is_err());
    }

    #[test]
    fn ccdf_values() {
        let m = model(2.0, 1);
        assert_eq!(m.ccdf(1).unwrap(), 1.0);
        assert!((m.ccdf(2).unwrap() - (1.0 - 6.0 / (PI * PI))).abs() < 1e-14);
        assert!((m.ccdf(2).unwrap() - 0.3920728981).abs() < 1e-10);
        let m = model(3.0, 2);
        assert!((m.ccdf(5).unwrap() - 0.12073265372818768).abs() < 1e-14);
        assert!(m.ccdf(1).is_err());
    }

    #[test]
    fn cdf_complements_next_ccdf() {
        let m = model(2.0, 1);
        assert!((m.cdf(1).unwrap() - m.pmf(1).unwrap()).abs() < 1e-15);
        assert!((m.cdf(2).unwrap() - 0.7599088773175333).abs() < 1e-14);
    }

    #[test]
    fn log_likelihood_hand_values() {
        let m = model(2.0, 1);
        let ones = Sample::new(vec![1, 1, 1]).unwrap();
        let ll = m.log_likelihood(&ones).unwrap();
        assert!((ll - (-3.0 * (PI * PI / 6.0).ln())).abs() < 1e-13);
        assert!((ll - (-1.4931009074122360)).abs() < 1e-13);

        let s = Sample::new(vec![1, 2]).unwrap();
        let ll = m.log_likelihood(&s).unwrap();
        let expected = -2.0 * (PI * PI / 6.0).ln() - 2.0 * 2f64.ln();
        assert!((ll - expected).abs() < 1e-13);

        let m = model(2.0, 3);
        let s = Sample::new(vec![2, 3, 4]).unwrap();
        assert!(matches!(m.log_likelihood(&s), Err(Error::BelowSupport { value: 2, x_min: 3 })));
    }

    #[test]
    fn sample_validation() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert_eq!(Sample::new(vec![3, 0, 1]), Err(Error::ZeroValue));
        let s = Sample::new(vec![5, 1, 3]).unwrap();
        assert_eq!(s.values(), &[1, 3, 5]);
        assert_eq!((s.min(), s.max(), s.len()), (1, 5, 3));
        assert!((s.sum_log() - 15f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn truncation_counts_drops() {
        let s = Sample::new(vec![1, 2, 2, 3, 7]).unwrap();
        let (kept, dropped) = s.truncated(3);
        assert_eq!(dropped, 3);
        assert_eq!(kept.unwrap().values(), &[3, 7]);
        let (kept, dropped) = s.truncated(8);
        assert!(kept.is_none());
        assert_eq!(dropped, 5);
    }

    #[test]
    fn empirical_ccdf_examples() {
        let pts = empirical_ccdf(&Sample::new(vec![1, 1, 2, 4]).unwrap());
        let expected = [(1, 1.0), (2, 0.5), (4, 0.25)];
        assert_eq!(pts.len(), 3);
        for (p, (x, prop)) in pts.iter().zip(expected) {
            assert_eq!((p.x, p.proportion), (x, prop));
        }
        let pts = empirical_ccdf(&Sample::new(vec![7]).unwrap());
        assert_eq!(pts, vec![CcdfPoint { x: 7, proportion: 1.0 }]);
        let pts = empirical_ccdf(&Sample::new(vec![3, 3, 3]).unwrap());
        assert_eq!(pts, vec![CcdfPoint { x: 3, proportion: 1.0 }]);
    }
}
