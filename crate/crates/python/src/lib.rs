//! Python bindings for `powerlaw-lrt`.
//!
//! Samples cross the boundary as lists of positive integers. Estimator and
//! sampler names are the CLI spellings: `"exact"` / `"approx"`.
//!
//! ```python
//! import powerlaw_lrt as pl
//! s1 = pl.draw_sample(2.0, 1, 10_000, seed=1)
//! s2 = pl.draw_sample(2.0, 1, 10_000, seed=2)
//! r = pl.two_sample_test(s1, s2)
//! print(r.lambda_, r.p_value)
//! ```

use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use powerlaw_lrt as core;
use powerlaw_lrt::{Error, Estimator, Sample, SamplingMethod};

create_exception!(powerlaw_lrt, EstimationError, PyRuntimeError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::UnboundedLikelihood { .. }
        | Error::Boundary { .. }
        | Error::NegativeStatistic { .. }
        | Error::NoReplicates { .. } => EstimationError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_estimator(name: &str) -> PyResult<Estimator> {
    match name {
        "exact" => Ok(Estimator::Exact),
        "approx" => Ok(Estimator::Approx),
        _ => Err(PyValueError::new_err(format!(
            "unknown estimator {name:?}; expected \"exact\" or \"approx\""
        ))),
    }
}

fn parse_method(name: &str) -> PyResult<SamplingMethod> {
    match name {
        "exact" => Ok(SamplingMethod::ExactInverseCdf),
        "approx" => Ok(SamplingMethod::ContinuousApproximation),
        _ => Err(PyValueError::new_err(format!(
            "unknown sampling method {name:?}; expected \"exact\" or \"approx\""
        ))),
    }
}

fn sample(values: Vec<u64>) -> PyResult<Sample> {
    Sample::new(values).map_err(to_py_err)
}

// =============================================================================
// Special functions
// =============================================================================

/// Hurwitz zeta ζ(s, q) for s in (1, 50] and q ≥ 0.5.
#[pyfunction]
fn hurwitz_zeta(s: f64, q: f64) -> PyResult<f64> {
    core::hurwitz_zeta(s, q).map_err(to_py_err)
}

#[pyfunction]
fn erfc(x: f64) -> f64 {
    core::erfc(x)
}

/// Pr(χ²₁ > lam).
#[pyfunction]
fn chi2_sf_1df(lam: f64) -> PyResult<f64> {
    core::chi2_sf_1df(lam).map_err(to_py_err)
}

#[pyfunction]
fn chi2_quantile_1df(p: f64) -> PyResult<f64> {
    core::chi2_quantile_1df(p).map_err(to_py_err)
}

// =============================================================================
// Model
// =============================================================================

/// Discrete power law p(x) = x^-alpha / ζ(alpha, x_min).
#[pyclass(frozen)]
struct PowerLawModel {
    inner: core::PowerLawModel,
}

#[pymethods]
impl PowerLawModel {
    #[new]
    #[pyo3(signature = (alpha, x_min=1))]
    fn new(alpha: f64, x_min: u64) -> PyResult<Self> {
        Ok(Self {
            inner: core::PowerLawModel::new(alpha, x_min).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn x_min(&self) -> u64 {
        self.inner.x_min()
    }

    fn pmf(&self, x: u64) -> PyResult<f64> {
        self.inner.pmf(x).map_err(to_py_err)
    }

    /// Inclusive tail Pr(X >= x).
    fn ccdf(&self, x: u64) -> PyResult<f64> {
        self.inner.ccdf(x).map_err(to_py_err)
    }

    fn cdf(&self, x: u64) -> PyResult<f64> {
        self.inner.cdf(x).map_err(to_py_err)
    }

    fn log_likelihood(&self, values: Vec<u64>) -> PyResult<f64> {
        self.inner.log_likelihood(&sample(values)?).map_err(to_py_err)
    }

    /// Smallest x with cdf(x) >= u.
    fn quantile(&self, u: f64) -> PyResult<u64> {
        core::quantile(&self.inner, u).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerLawModel(alpha={}, x_min={})",
            self.inner.alpha(),
            self.inner.x_min()
        )
    }
}

/// (x, proportion of values >= x) for each distinct value.
#[pyfunction]
fn empirical_ccdf(values: Vec<u64>) -> PyResult<Vec<(u64, f64)>> {
    Ok(core::empirical_ccdf(&sample(values)?)
        .into_iter()
        .map(|p| (p.x, p.proportion))
        .collect())
}

// =============================================================================
// Estimation and test
// =============================================================================

#[pyclass(frozen, get_all)]
struct FitResult {
    alpha_hat: f64,
    method: String,
    n: usize,
    x_min: u64,
    log_likelihood_at_fit: f64,
}

#[pymethods]
impl FitResult {
    fn __repr__(&self) -> String {
        format!(
            "FitResult(alpha_hat={}, method={:?}, n={}, x_min={})",
            self.alpha_hat, self.method, self.n, self.x_min
        )
    }
}

impl From<core::FitResult> for FitResult {
    fn from(f: core::FitResult) -> Self {
        Self {
            alpha_hat: f.alpha_hat,
            method: f.method.to_string(),
            n: f.n,
            x_min: f.x_min,
            log_likelihood_at_fit: f.log_likelihood_at_fit,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (values, x_min=1, estimator="exact"))]
fn fit(values: Vec<u64>, x_min: u64, estimator: &str) -> PyResult<FitResult> {
    let estimator = parse_estimator(estimator)?;
    core::fit(&sample(values)?, x_min, estimator)
        .map(FitResult::from)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (values, x_min=1))]
fn mle_approx(values: Vec<u64>, x_min: u64) -> PyResult<FitResult> {
    core::mle_approx(&sample(values)?, x_min)
        .map(FitResult::from)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (values, x_min=1))]
fn mle_exact(values: Vec<u64>, x_min: u64) -> PyResult<FitResult> {
    core::mle_exact(&sample(values)?, x_min)
        .map(FitResult::from)
        .map_err(to_py_err)
}

/// Result of the two-sample test. `lambda_` is the statistic Λ.
#[pyclass(frozen, get_all)]
struct TestResult {
    lambda_: f64,
    df: u32,
    p_value: f64,
    alpha_hat_1: f64,
    alpha_hat_2: f64,
    alpha_hat_pooled: f64,
    n1: usize,
    n2: usize,
    x_min: u64,
    estimator: String,
    warning: Option<String>,
}

#[pymethods]
impl TestResult {
    fn rejects_at(&self, level: f64) -> bool {
        self.p_value < level
    }

    fn __repr__(&self) -> String {
        format!(
            "TestResult(lambda_={}, p_value={}, alpha_hat_1={}, alpha_hat_2={}, alpha_hat_pooled={})",
            self.lambda_, self.p_value, self.alpha_hat_1, self.alpha_hat_2, self.alpha_hat_pooled
        )
    }
}

impl From<core::TestResult> for TestResult {
    fn from(r: core::TestResult) -> Self {
        Self {
            lambda_: r.lambda,
            df: r.df,
            p_value: r.p_value,
            alpha_hat_1: r.alpha_hat_1,
            alpha_hat_2: r.alpha_hat_2,
            alpha_hat_pooled: r.alpha_hat_pooled,
            n1: r.n1,
            n2: r.n2,
            x_min: r.x_min,
            estimator: r.estimator.to_string(),
            warning: r.warning,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (values1, values2, x_min=1, estimator="exact"))]
fn two_sample_test(
    py: Python<'_>,
    values1: Vec<u64>,
    values2: Vec<u64>,
    x_min: u64,
    estimator: &str,
) -> PyResult<TestResult> {
    let estimator = parse_estimator(estimator)?;
    let s1 = sample(values1)?;
    let s2 = sample(values2)?;
    py.detach(|| core::two_sample_test(&s1, &s2, x_min, estimator))
        .map(TestResult::from)
        .map_err(to_py_err)
}

#[pyfunction]
fn lambda_statistic(l_null: f64, l_alt_1: f64, l_alt_2: f64) -> f64 {
    core::lambda_statistic(l_null, l_alt_1, l_alt_2)
}

// =============================================================================
// Sampling and Monte Carlo
// =============================================================================

/// Draws `n` values in generation order from stream 0 of `seed`.
#[pyfunction]
#[pyo3(signature = (alpha, x_min, n, seed=0, method="exact"))]
fn draw_sample(
    py: Python<'_>,
    alpha: f64,
    x_min: u64,
    n: usize,
    seed: u64,
    method: &str,
) -> PyResult<Vec<u64>> {
    let method = parse_method(method)?;
    if n == 0 {
        return Err(to_py_err(Error::EmptySample));
    }
    let model = core::PowerLawModel::new(alpha, x_min).map_err(to_py_err)?;
    Ok(py.detach(|| {
        let mut rng = core::sampling::stream_rng(seed, 0);
        core::InverseCdf::new(model).draw_values(&mut rng, method, n)
    }))
}

#[pyclass(frozen, get_all)]
struct CalibrationReport {
    replicates_run: usize,
    skipped: Vec<(usize, String)>,
    rejection_rates: HashMap<String, f64>,
    /// (probability, empirical quantile, χ²₁ quantile)
    lambda_quantiles: Vec<(f64, f64, f64)>,
    lambdas: Vec<f64>,
    p_values: Vec<f64>,
}

#[pymethods]
impl CalibrationReport {
    fn rejection_rate(&self, level: f64) -> Option<f64> {
        self.rejection_rates.get(&level.to_string()).copied()
    }
}

#[pyclass(frozen, get_all)]
struct PowerReport {
    replicates_run: usize,
    skipped: Vec<(usize, String)>,
    rejection_rate: f64,
    lambda_median: f64,
    lambdas: Vec<f64>,
    p_values: Vec<f64>,
}

#[pyfunction]
#[pyo3(signature = (alpha, x_min=1, n_per_sample=1000, replicates=1000, levels=vec![0.05], seed=0, estimator="exact", method="exact"))]
#[allow(clippy::too_many_arguments)]
fn calibrate_null(
    py: Python<'_>,
    alpha: f64,
    x_min: u64,
    n_per_sample: usize,
    replicates: usize,
    levels: Vec<f64>,
    seed: u64,
    estimator: &str,
    method: &str,
) -> PyResult<CalibrationReport> {
    let config = core::CalibrationConfig {
        alpha,
        x_min,
        n_per_sample,
        replicates,
        levels,
        seed,
        estimator: parse_estimator(estimator)?,
        method: parse_method(method)?,
    };
    let report = py.detach(|| core::calibrate_null(&config)).map_err(to_py_err)?;
    Ok(CalibrationReport {
        replicates_run: report.replicates_run,
        skipped: report
            .skipped
            .into_iter()
            .map(|s| (s.replicate, s.reason))
            .collect(),
        rejection_rates: report
            .rejection_rate_per_level
            .iter()
            .map(|r| (r.level.to_string(), r.rejection_rate))
            .collect(),
        lambda_quantiles: report
            .lambda_quantiles
            .iter()
            .map(|q| (q.probability, q.empirical, q.chi2_reference))
            .collect(),
        lambdas: report.records.iter().map(|r| r.lambda).collect(),
        p_values: report.records.iter().map(|r| r.p_value).collect(),
    })
}

#[pyfunction]
#[pyo3(signature = (alpha, delta, x_min=1, n_per_sample=1000, replicates=1000, level=0.05, seed=0, estimator="exact", method="exact"))]
#[allow(clippy::too_many_arguments)]
fn power_sweep(
    py: Python<'_>,
    alpha: f64,
    delta: f64,
    x_min: u64,
    n_per_sample: usize,
    replicates: usize,
    level: f64,
    seed: u64,
    estimator: &str,
    method: &str,
) -> PyResult<PowerReport> {
    let config = core::PowerConfig {
        alpha,
        delta,
        x_min,
        n_per_sample,
        replicates,
        level,
        seed,
        estimator: parse_estimator(estimator)?,
        method: parse_method(method)?,
    };
    let report = py.detach(|| core::power_sweep(&config)).map_err(to_py_err)?;
    Ok(PowerReport {
        replicates_run: report.replicates_run,
        skipped: report
            .skipped
            .into_iter()
            .map(|s| (s.replicate, s.reason))
            .collect(),
        rejection_rate: report.rejection_rate,
        lambda_median: report.lambda_median,
        lambdas: report.records.iter().map(|r| r.lambda).collect(),
        p_values: report.records.iter().map(|r| r.p_value).collect(),
    })
}

#[pymodule(name = "powerlaw_lrt")]
fn powerlaw_lrt_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("EstimationError", m.py().get_type::<EstimationError>())?;

    m.add_class::<PowerLawModel>()?;
    m.add_class::<FitResult>()?;
    m.add_class::<TestResult>()?;
    m.add_class::<CalibrationReport>()?;
    m.add_class::<PowerReport>()?;

    m.add_function(wrap_pyfunction!(hurwitz_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(chi2_sf_1df, m)?)?;
    m.add_function(wrap_pyfunction!(chi2_quantile_1df, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_ccdf, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(mle_approx, m)?)?;
    m.add_function(wrap_pyfunction!(mle_exact, m)?)?;
    m.add_function(wrap_pyfunction!(two_sample_test, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(draw_sample, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_null, m)?)?;
    m.add_function(wrap_pyfunction!(power_sweep, m)?)?;
    Ok(())
}
