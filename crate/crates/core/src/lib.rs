//! Discrete power-law distributions: maximum-likelihood fitting at a known
//! lower cutoff, a two-sample log-likelihood-ratio test for a common scaling
//! parameter, and Monte Carlo tools to check the test's χ²₁ calibration and
//! measure its power.
//!
//! ```
//! use powerlaw_lrt::{two_sample_test, Estimator, Sample};
//!
//! let a = Sample::new(vec![1, 1, 2, 3, 1, 7, 2, 1, 4]).unwrap();
//! let b = Sample::new(vec![1, 2, 1, 1, 5, 1, 2, 13]).unwrap();
//! let result = two_sample_test(&a, &b, 1, Estimator::Exact).unwrap();
//! assert_eq!(result.df, 1);
//! assert!(result.p_value > 0.0 && result.p_value <= 1.0);
//! ```

pub mod cli;
pub mod error;
pub mod estimate;
pub mod lrt;
pub mod model;
pub mod montecarlo;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
pub use estimate::{fit, mle_approx, mle_exact, Estimator, FitResult};
pub use lrt::{lambda_statistic, two_sample_test, TestResult};
pub use model::{empirical_ccdf, CcdfPoint, PowerLawModel, Sample};
pub use montecarlo::{
    calibrate_null, power_sweep, CalibrationConfig, CalibrationReport, PowerConfig, PowerReport,
};
pub use sampling::{draw_sample, quantile, InverseCdf, SamplerConfig, SamplingMethod};
pub use special::{chi2_quantile_1df, chi2_sf_1df, erfc, hurwitz_zeta, ZetaAccuracy};
