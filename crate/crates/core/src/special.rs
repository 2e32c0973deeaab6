//! Scalar special functions: Hurwitz zeta, the complementary error function
//! and the chi-square survival function with one degree of freedom.

use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Largest exponent accepted by [`hurwitz_zeta`].
pub const MAX_EXPONENT: f64 = 50.0;

/// Smallest offset accepted by [`hurwitz_zeta`].
pub const MIN_OFFSET: f64 = 0.5;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

// B_2, B_4, ..., B_32 as exact rationals (numerator, denominator).
const BERNOULLI_EVEN: [(f64, f64); 16] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
];

// B_{2k} / (2k)! for k = 1..=16.
static BERNOULLI_COEFFICIENTS: LazyLock<[f64; 16]> = LazyLock::new(|| {
    let mut out = [0.0; 16];
    for (k, (num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let factorial: f64 = (1..=2 * (k + 1)).map(|i| i as f64).product();
        out[k] = num / den / factorial;
    }
    out
});

#[inline]
fn bernoulli_coefficient(k: usize) -> f64 {
    BERNOULLI_COEFFICIENTS[k - 1]
}

/// Numerical policy for the Euler–Maclaurin evaluation of ζ(s, q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaAccuracy {
    pub target_relative_error: f64,
    pub direct_sum_terms: usize,
    pub correction_terms: usize,
}

impl Default for ZetaAccuracy {
    fn default() -> Self {
        Self {
            target_relative_error: 1e-12,
            direct_sum_terms: 64,
            correction_terms: 8,
        }
    }
}

impl ZetaAccuracy {
    pub fn new(
        target_relative_error: f64,
        direct_sum_terms: usize,
        correction_terms: usize,
    ) -> Result<Self> {
        let accuracy = Self {
            target_relative_error,
            direct_sum_terms,
            correction_terms,
        };
        accuracy.validate()?;
        Ok(accuracy)
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_relative_error > 0.0) {
            return Err(Error::Config(format!(
                "target_relative_error must be positive, got {}",
                self.target_relative_error
            )));
        }
        if self.direct_sum_terms < 10 {
            return Err(Error::Config(format!(
                "direct_sum_terms must be at least 10, got {}",
                self.direct_sum_terms
            )));
        }
        if !(2..=15).contains(&self.correction_terms) {
            return Err(Error::Config(format!(
                "correction_terms must lie in 2..=15, got {}",
                self.correction_terms
            )));
        }
        Ok(())
    }

    /// Evaluates ζ(s, q) = Σ_{n≥0} (n + q)^{-s}.
    ///
    /// The first `direct_sum_terms` terms are summed directly; the remainder
    /// is the Euler–Maclaurin tail with `correction_terms` Bernoulli terms.
    /// If the first omitted Bernoulli term exceeds the relative target, the
    /// direct part is doubled and the evaluation repeated.
    pub fn zeta(&self, s: f64, q: f64) -> Result<f64> {
        check_zeta_domain(s, q)?;
        let mut terms = self.direct_sum_terms;
        loop {
            let (value, err) = self.zeta_with_terms(s, q, terms);
            if err <= self.target_relative_error * value.abs() || terms >= 1 << 20 {
                return Ok(value);
            }
            terms *= 2;
        }
    }

    fn zeta_with_terms(&self, s: f64, q: f64, terms: usize) -> (f64, f64) {
        let a = q + terms as f64;
        let a_pow = a.powf(-s);
        let inv_a2 = 1.0 / (a * a);

        // Bernoulli corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * a^{-s-2k+1}
        let mut rising = s;
        let mut power = a_pow / a;
        let mut correction = 0.0;
        let mut next_term = 0.0;
        for k in 1..=self.correction_terms + 1 {
            let term = bernoulli_coefficient(k) * rising * power;
            if k > self.correction_terms {
                next_term = term;
                break;
            }
            correction += term;
            rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
            power *= inv_a2;
        }

        let tail = a * a_pow / (s - 1.0) + 0.5 * a_pow + correction;
        let mut sum = tail;
        for n in (0..terms).rev() {
            sum += (q + n as f64).powf(-s);
        }
        (sum, next_term.abs())
    }

    /// Evaluates ζ(s, q) together with its derivative in `s`.
    pub fn zeta_and_ds(&self, s: f64, q: f64) -> Result<(f64, f64)> {
        check_zeta_domain(s, q)?;
        let mut terms = self.direct_sum_terms;
        loop {
            let (value, derivative, err) = self.zeta_and_ds_with_terms(s, q, terms);
            if err <= self.target_relative_error * value.abs() || terms >= 1 << 20 {
                return Ok((value, derivative));
            }
            terms *= 2;
        }
    }

    fn zeta_and_ds_with_terms(&self, s: f64, q: f64, terms: usize) -> (f64, f64, f64) {
        let a = q + terms as f64;
        let ln_a = a.ln();
        let a_pow = a.powf(-s);
        let inv_a2 = 1.0 / (a * a);

        let mut rising = s;
        // Σ_j 1/(s+j) over the factors in `rising`
        let mut rising_log_ds = 1.0 / s;
        let mut power = a_pow / a;
        let mut correction = 0.0;
        let mut correction_ds = 0.0;
        let mut next_term = 0.0;
        for k in 1..=self.correction_terms + 1 {
            let term = bernoulli_coefficient(k) * rising * power;
            if k > self.correction_terms {
                next_term = term;
                break;
            }
            correction += term;
            correction_ds += term * (rising_log_ds - ln_a);
            let f1 = s + (2 * k - 1) as f64;
            let f2 = s + (2 * k) as f64;
            rising *= f1 * f2;
            rising_log_ds += 1.0 / f1 + 1.0 / f2;
            power *= inv_a2;
        }

        let integral = a * a_pow / (s - 1.0);
        let mut sum = integral + 0.5 * a_pow + correction;
        let mut sum_ds = -ln_a * integral - integral / (s - 1.0) - 0.5 * ln_a * a_pow + correction_ds;
        for n in (0..terms).rev() {
            let x = q + n as f64;
            let t = x.powf(-s);
            sum += t;
            sum_ds -= x.ln() * t;
        }
        (sum, sum_ds, next_term.abs())
    }
}

fn check_zeta_domain(s: f64, q: f64) -> Result<()> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!(
            "Hurwitz zeta requires s > 1 (series diverges), got s = {s}"
        )));
    }
    if s > MAX_EXPONENT {
        return Err(Error::Domain(format!(
            "Hurwitz zeta supports s <= {MAX_EXPONENT}, got s = {s}"
        )));
    }
    if !(q >= MIN_OFFSET) || !q.is_finite() {
        return Err(Error::Domain(format!(
            "Hurwitz zeta requires finite q >= {MIN_OFFSET}, got q = {q}"
        )));
    }
    Ok(())
}

/// Hurwitz zeta ζ(s, q) with the default accuracy policy.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    ZetaAccuracy::default().zeta(s, q)
}

/// ζ(s, q) and ∂ζ/∂s with the default accuracy policy.
pub fn hurwitz_zeta_and_ds(s: f64, q: f64) -> Result<(f64, f64)> {
    ZetaAccuracy::default().zeta_and_ds(s, q)
}

/// Complementary error function.
///
/// A positive-term Taylor series of erf covers `|x| < 2.5`; beyond that a
/// Lentz-evaluated continued fraction gives erfc with full relative accuracy,
/// so tiny tail probabilities remain meaningful.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.5 {
        1.0 - erf_series(x)
    } else if x > 28.0 {
        // below the smallest subnormal
        0.0
    } else {
        erfc_continued_fraction(x)
    }
}

// erf(x) = 2/√π e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = n as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    0.5 * FRAC_2_SQRT_PI * (-x * x).exp() / f
}

/// Pr(χ²₁ > λ) = erfc(√(λ/2)).
pub fn chi2_sf_1df(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!(
            "chi-square statistic must be nonnegative, got {lambda}"
        )));
    }
    Ok(erfc((0.5 * lambda).sqrt()))
}

/// Inverse of the χ²₁ lower-tail CDF by bisection on [`chi2_sf_1df`].
pub fn chi2_quantile_1df(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "quantile probability must lie in (0, 1), got {p}"
        )));
    }
    let target = 1.0 - p;
    let sf = |x: f64| erfc((0.5 * x).sqrt());
    let mut lo = 0.0;
    let mut hi = 1.0;
    while sf(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sf(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Partial sum of (n+q)^{-s} up to `terms`, bracketed by the integral bounds
    // of the remainder; returns the bracket midpoint and half-width.
    fn brute_force_zeta(s: f64, q: f64, terms: usize) -> (f64, f64) {
        let mut sum = 0.0;
        for n in (0..terms).rev() {
            sum += (n as f64 + q).powf(-s);
        }
        let end = terms as f64 + q;
        let lo = sum + end.powf(1.0 - s) / (s - 1.0);
        let hi = lo + end.powf(-s);
        (0.5 * (lo + hi), 0.5 * (hi - lo))
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = hurwitz_zeta(2.0, 1.0).unwrap();
        assert!((z - PI * PI / 6.0).abs() < 1e-14, "{z}");
        let z2 = hurwitz_zeta(2.0, 2.0).unwrap();
        assert!((z2 - (PI * PI / 6.0 - 1.0)).abs() < 1e-14, "{z2}");
    }

    #[test]
    fn zeta_matches_brute_force_oracle() {
        // Frozen from the direct-summation oracle at 10^7 terms.
        let (mid3, half3) = brute_force_zeta(3.0, 1.0, 10_000_000);
        assert!(half3 < 1e-14);
        assert!((mid3 - 1.2020569031595943).abs() < 1e-13);
        let z3 = hurwitz_zeta(3.0, 1.0).unwrap();
        assert!((z3 - 1.2020569031595943).abs() < 1e-14, "{z3}");

        let (mid, half) = brute_force_zeta(2.5, 1.5, 10_000_000);
        assert!(half < 1e-10);
        let z = hurwitz_zeta(2.5, 1.5).unwrap();
        assert!((z - mid).abs() <= half + 1e-12);
        assert!((z - 0.5902563850764313).abs() < 1e-14, "{z}");
    }

    #[test]
    fn zeta_domain_errors() {
        assert!(matches!(hurwitz_zeta(1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(0.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(2.0, 0.4), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(51.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(f64::NAN, 1.0), Err(Error::Domain(_))));
        assert!(hurwitz_zeta(50.0, 0.5).is_ok());
    }

    #[test]
    fn zeta_derivative_matches_finite_difference() {
        for &(s, q) in &[(1.1, 1.0), (2.0, 1.0), (3.5, 2.0), (10.0, 7.0)] {
            let (z, dz) = hurwitz_zeta_and_ds(s, q).unwrap();
            assert!((z - hurwitz_zeta(s, q).unwrap()).abs() <= 1e-15 * z);
            let h = 1e-5;
            let fd = (hurwitz_zeta(s + h, q).unwrap() - hurwitz_zeta(s - h, q).unwrap()) / (2.0 * h);
            assert!((dz - fd).abs() <= 1e-6 * dz.abs(), "s={s} q={q} {dz} {fd}");
        }
        // -ζ'(2)/ζ(2) = E[ln X] for the α = 2 discrete power law
        let (z, dz) = hurwitz_zeta_and_ds(2.0, 1.0).unwrap();
        assert!((-dz / z - 0.5699609930945328).abs() < 1e-12);
    }

    #[test]
    fn accuracy_policy_validation() {
        assert!(ZetaAccuracy::new(0.0, 64, 8).is_err());
        assert!(ZetaAccuracy::new(1e-12, 9, 8).is_err());
        assert!(ZetaAccuracy::new(1e-12, 64, 1).is_err());
        assert!(ZetaAccuracy::new(1e-12, 64, 16).is_err());
        let coarse = ZetaAccuracy::new(1e-12, 10, 2).unwrap();
        let z = coarse.zeta(2.0, 1.0).unwrap();
        assert!((z - PI * PI / 6.0).abs() < 1e-11 * z);
    }

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0), 1.0);
        // erfc(1), 40-digit reference
        assert!((erfc(1.0) - 0.15729920705028513066).abs() < 1e-15);
        assert!(erfc(30.0).abs() < 1e-12);
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert!((erfc(-1.0) - 1.84270079294971486934).abs() < 1e-15);
        // deep tail keeps relative accuracy: erfc(sqrt(149.4912/2))
        let tail = erfc((149.4912f64 / 2.0).sqrt());
        assert!((tail / 2.239610645059183e-34 - 1.0).abs() < 1e-12, "{tail}");
    }

    #[test]
    fn erfc_is_continuous_at_kernel_switch() {
        let below = erfc(2.5 - 1e-12);
        let above = erfc(2.5);
        assert!((below - above).abs() < 1e-14);
    }

    #[test]
    fn chi2_reference_values() {
        assert_eq!(chi2_sf_1df(0.0).unwrap(), 1.0);
        assert!((chi2_sf_1df(0.006508615).unwrap() - 0.9356996).abs() < 5e-6);
        assert!(chi2_sf_1df(149.4912).unwrap() < 1e-3);
        assert!((chi2_sf_1df(3.8414588).unwrap() - 0.05).abs() < 1e-6);
        assert!(matches!(chi2_sf_1df(-1e-3), Err(Error::Domain(_))));
        assert!(chi2_sf_1df(f64::NAN).is_err());
    }

    #[test]
    fn chi2_quantiles() {
        let cases = [
            (0.5, 0.45493642311957275),
            (0.9, 2.705543454095415),
            (0.95, 3.841458820694124),
            (0.99, 6.634896601021214),
        ];
        for (p, expected) in cases {
            let q = chi2_quantile_1df(p).unwrap();
            assert!((q - expected).abs() < 1e-9 * expected, "{p}: {q}");
        }
        assert!(chi2_quantile_1df(0.0).is_err());
        assert!(chi2_quantile_1df(1.0).is_err());
    }
}
