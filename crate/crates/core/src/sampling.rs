//! Reproducible discrete power-law variates.
//!
//! # Generator contract
//!
//! Every stream is a ChaCha8 generator (`rand_chacha` 0.9) created with
//! `ChaCha8Rng::seed_from_u64(seed)` and positioned with `set_stream(stream)`.
//! A uniform variate is the top 53 bits of `next_u64()` scaled by 2⁻⁵³,
//! giving values in [0, 1). Stream 0 is used by [`draw_sample`]; Monte Carlo
//! replicate `k` uses streams `2k` and `2k + 1`. This mapping is fixed.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PowerLawModel, Sample};
use crate::special::hurwitz_zeta;

/// Values returned by the samplers saturate here.
pub const MAX_VARIATE: u64 = 1 << 62;

const TABLE_LEN: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    /// Inverse CDF of the discrete model.
    #[value(name = "exact")]
    ExactInverseCdf,
    /// Rounded continuous power law.
    #[value(name = "approx")]
    ContinuousApproximation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub model: PowerLawModel,
    pub method: SamplingMethod,
    pub seed: u64,
}

/// Generator for stream `stream` under master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform variate in [0, 1).
#[inline]
pub fn next_uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_uniform(u: f64) -> Result<()> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain(format!("u must lie in [0, 1), got {u}")));
    }
    Ok(())
}

/// F(x) = 1 − ζ(α, x + 1) / ζ(α, x_min).
#[inline]
fn cdf_at(model: &PowerLawModel, x: u64) -> f64 {
    1.0 - hurwitz_zeta(model.alpha(), x as f64 + 1.0).expect("model parameters are in range")
        / model.normalizer()
}

/// Smallest x in `(below, ∞)` with F(x) ≥ u, given F(below) < u.
fn search_above(model: &PowerLawModel, mut below: u64, u: f64) -> u64 {
    let mut hi = below;
    loop {
        hi = hi.saturating_mul(2).min(MAX_VARIATE);
        if cdf_at(model, hi) >= u {
            break;
        }
        if hi == MAX_VARIATE {
            return MAX_VARIATE;
        }
        below = hi;
    }
    while hi - below > 1 {
        let mid = below + (hi - below) / 2;
        if cdf_at(model, mid) >= u {
            hi = mid;
        } else {
            below = mid;
        }
    }
    hi
}

/// Smallest x ≥ x_min with F(x) ≥ u, by doubling then bisection.
pub fn quantile(model: &PowerLawModel, u: f64) -> Result<u64> {
    check_uniform(u)?;
    let x_min = model.x_min();
    if cdf_at(model, x_min) >= u {
        return Ok(x_min);
    }
    Ok(search_above(model, x_min, u))
}

/// Inverse CDF with a cached table of F on the first values of the support.
///
/// Agrees exactly with [`quantile`]: table entries are computed with the same
/// expression, and lookups past the table fall back to the same search.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    model: PowerLawModel,
    table: Vec<f64>,
}

impl InverseCdf {
    pub fn new(model: PowerLawModel) -> Self {
        let x_min = model.x_min();
        let mut table = Vec::with_capacity(TABLE_LEN);
        for i in 0..TABLE_LEN as u64 {
            let f = cdf_at(&model, x_min + i);
            table.push(f);
            if 1.0 - f < 1e-12 {
                break;
            }
        }
        Self { model, table }
    }

    pub fn model(&self) -> &PowerLawModel {
        &self.model
    }

    pub fn quantile(&self, u: f64) -> Result<u64> {
        check_uniform(u)?;
        Ok(self.lookup(u))
    }

    #[inline]
    fn lookup(&self, u: f64) -> u64 {
        let x_min = self.model.x_min();
        let last = self.table.len() - 1;
        if u <= self.table[last] {
            x_min + self.table.partition_point(|&f| f < u) as u64
        } else {
            search_above(&self.model, x_min + last as u64, u)
        }
    }

    fn continuous(&self, u: f64) -> u64 {
        let alpha = self.model.alpha();
        let x_min = self.model.x_min();
        let y = (x_min as f64 - 0.5) * (1.0 - u).powf(-1.0 / (alpha - 1.0));
        // float-to-int casts saturate
        let x = (y + 0.5).floor() as u64;
        x.clamp(x_min, MAX_VARIATE)
    }

    pub fn draw_values<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        method: SamplingMethod,
        n: usize,
    ) -> Vec<u64> {
        (0..n)
            .map(|_| {
                let u = next_uniform(rng);
                match method {
                    SamplingMethod::ExactInverseCdf => self.lookup(u),
                    SamplingMethod::ContinuousApproximation => self.continuous(u),
                }
            })
            .collect()
    }

    pub fn draw<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        method: SamplingMethod,
        n: usize,
    ) -> Result<Sample> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Sample::new(self.draw_values(rng, method, n))
    }
}

/// Draws `n` values from stream 0 of `config.seed`.
pub fn draw_sample(config: &SamplerConfig, n: usize) -> Result<Sample> {
    let inverse = InverseCdf::new(config.model);
    let mut rng = stream_rng(config.seed, 0);
    inverse.draw(&mut rng, config.method, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(alpha: f64, x_min: u64) -> PowerLawModel {
        PowerLawModel::new(alpha, x_min).unwrap()
    }

    #[test]
    fn quantile_examples() {
        let m = model(2.0, 1);
        assert_eq!(quantile(&m, 0.0).unwrap(), 1);
        assert_eq!(quantile(&m, 0.60).unwrap(), 1);
        assert_eq!(quantile(&m, 0.61).unwrap(), 2);
        // F(2) ≈ 0.75991
        assert_eq!(quantile(&m, 0.7599).unwrap(), 2);
        assert_eq!(quantile(&m, 0.76).unwrap(), 3);
        assert!(quantile(&m, 1.0).is_err());
        assert!(quantile(&m, -0.1).is_err());
        assert!(quantile(&m, f64::NAN).is_err());
    }

    #[test]
    fn quantile_is_smallest_with_cdf_at_least_u() {
        let m = model(2.3, 4);
        for &u in &[0.1, 0.5, 0.9, 0.99, 0.999_9, 0.999_999_9] {
            let x = quantile(&m, u).unwrap();
            assert!(m.cdf(x).unwrap() >= u);
            if x > m.x_min() {
                assert!(m.cdf(x - 1).unwrap() < u);
            }
        }
    }

    #[test]
    fn table_agrees_with_pure_quantile_past_the_table() {
        // α = 1.2 leaves most tail mass beyond the cached table
        let m = model(1.2, 1);
        let inv = InverseCdf::new(m);
        for i in 0..2000 {
            let u = i as f64 / 2000.0;
            assert_eq!(inv.quantile(u).unwrap(), quantile(&m, u).unwrap(), "u = {u}");
        }
        let u = 1.0 - f64::EPSILON;
        assert_eq!(inv.quantile(u).unwrap(), quantile(&m, u).unwrap());
    }

    #[test]
    fn support_is_respected() {
        let m = model(2.0, 3);
        for method in [SamplingMethod::ExactInverseCdf, SamplingMethod::ContinuousApproximation] {
            let cfg = SamplerConfig { model: m, method, seed: 11 };
            let s = draw_sample(&cfg, 10_000).unwrap();
            assert!(s.min() >= 3);
        }
    }

    #[test]
    fn determinism_and_stream_separation() {
        let cfg = SamplerConfig {
            model: model(2.0, 1),
            method: SamplingMethod::ExactInverseCdf,
            seed: 42,
        };
        assert_eq!(draw_sample(&cfg, 5).unwrap(), draw_sample(&cfg, 5).unwrap());
        let a: Vec<u64> = (0..8).map(|_| stream_rng(7, 0).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(stream_rng(7, 0).next_u64(), stream_rng(7, 1).next_u64());
        assert_ne!(stream_rng(7, 0).next_u64(), stream_rng(8, 0).next_u64());
    }

    #[test]
    fn uniform_range() {
        let mut rng = stream_rng(0, 0);
        for _ in 0..10_000 {
            let u = next_uniform(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn continuous_approximation_formula() {
        let inv = InverseCdf::new(model(2.0, 1));
        assert_eq!(inv.continuous(0.0), 1);
        // floor(0.5 (1-u)^{-1} + 0.5)
        assert_eq!(inv.continuous(0.5), 1);
        assert_eq!(inv.continuous(0.75), 2);
        assert_eq!(inv.continuous(0.9), 5);
    }

    #[test]
    fn empty_draw_is_an_error() {
        let cfg = SamplerConfig {
            model: model(2.0, 1),
            method: SamplingMethod::ExactInverseCdf,
            seed: 1,
        };
        assert_eq!(draw_sample(&cfg, 0), Err(Error::EmptySample));
    }
}
