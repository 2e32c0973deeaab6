//! Maximum-likelihood estimation of the scaling parameter at a known x_min.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PowerLawModel, Sample};
use crate::special::{hurwitz_zeta_and_ds, MAX_EXPONENT};

/// Lower end of the search interval for the exact estimator.
pub const ALPHA_LOWER: f64 = 1.0 + 1e-6;
/// Upper end of the search interval for the exact estimator.
pub const ALPHA_UPPER: f64 = MAX_EXPONENT;

const ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Closed-form continuous approximation.
    Approx,
    /// Numerical maximization of the discrete likelihood.
    Exact,
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Estimator::Approx => "approx",
            Estimator::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub alpha_hat: f64,
    pub method: Estimator,
    pub n: usize,
    pub x_min: u64,
    pub log_likelihood_at_fit: f64,
}

impl FitResult {
    pub fn model(&self) -> PowerLawModel {
        PowerLawModel::new(self.alpha_hat, self.x_min).expect("fitted alpha is in range")
    }
}

pub fn fit(sample: &Sample, x_min: u64, estimator: Estimator) -> Result<FitResult> {
    match estimator {
        Estimator::Approx => mle_approx(sample, x_min),
        Estimator::Exact => mle_exact(sample, x_min),
    }
}

fn check_inputs(sample: &Sample, x_min: u64) -> Result<()> {
    if x_min == 0 {
        return Err(Error::Domain("x_min must be at least 1".into()));
    }
    sample.check_support(x_min)
}

fn finish(sample: &Sample, x_min: u64, alpha_hat: f64, method: Estimator) -> Result<FitResult> {
    let model = PowerLawModel::new(alpha_hat, x_min)?;
    Ok(FitResult {
        alpha_hat,
        method,
        n: sample.len(),
        x_min,
        log_likelihood_at_fit: model.log_likelihood(sample)?,
    })
}

/// α̂ ≃ 1 + n [Σ ln(xᵢ / (x_min − ½))]⁻¹.
pub fn mle_approx(sample: &Sample, x_min: u64) -> Result<FitResult> {
    check_inputs(sample, x_min)?;
    let n = sample.len() as f64;
    let denominator = sample.sum_log() - n * (x_min as f64 - 0.5).ln();
    let alpha_hat = 1.0 + n / denominator;
    if !(alpha_hat > 1.0 && alpha_hat <= MAX_EXPONENT) {
        return Err(Error::Boundary {
            alpha: alpha_hat,
            lower: 1.0,
            upper: MAX_EXPONENT,
        });
    }
    finish(sample, x_min, alpha_hat, Estimator::Approx)
}

/// Per-observation score l'(α)/n = E_α[ln X] − mean(ln xᵢ), with
/// E_α[ln X] = −∂ₛζ(α, x_min) / ζ(α, x_min). Strictly decreasing in α.
fn score(alpha: f64, x_min: u64, mean_log: f64) -> Result<f64> {
    let (zeta, dzeta) = hurwitz_zeta_and_ds(alpha, x_min as f64)?;
    Ok(-dzeta / zeta - mean_log)
}

/// Exact discrete MLE: the unique stationary point of the concave
/// log-likelihood on [`ALPHA_LOWER`, `ALPHA_UPPER`].
pub fn mle_exact(sample: &Sample, x_min: u64) -> Result<FitResult> {
    check_inputs(sample, x_min)?;
    if sample.max() == x_min {
        return Err(Error::UnboundedLikelihood { x_min });
    }
    let mean_log = sample.sum_log() / sample.len() as f64;
    let f = |alpha: f64| score(alpha, x_min, mean_log);

    let f_lo = f(ALPHA_LOWER)?;
    if f_lo <= 0.0 {
        return Err(Error::Boundary {
            alpha: ALPHA_LOWER,
            lower: ALPHA_LOWER,
            upper: ALPHA_UPPER,
        });
    }
    let f_hi = f(ALPHA_UPPER)?;
    if f_hi >= 0.0 {
        return Err(Error::Boundary {
            alpha: ALPHA_UPPER,
            lower: ALPHA_LOWER,
            upper: ALPHA_UPPER,
        });
    }
    let alpha_hat = brent_root(f, ALPHA_LOWER, ALPHA_UPPER, f_lo, f_hi, ROOT_TOLERANCE)?;
    finish(sample, x_min, alpha_hat, Estimator::Exact)
}

/// Brent's method for a root of `f` bracketed by `[a, b]`.
fn brent_root<F>(f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic or secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}
