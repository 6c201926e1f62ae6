//! The three distribution families involved in the construction:
//! Arcsine(a), PowerSemicircle(λ, a) and the uniform-spacings weight vector.
//!
//! The power semicircle law on `(-a, a)` has density
//!
//! ```text
//! f(x; λ, a) = Γ(λ + 1) / (√π Γ(λ + 1/2) a^{2λ}) · (a² - x²)^{λ - 1/2}
//! ```
//!
//! and `(X + a) / (2a)` is Beta(λ + 1/2, λ + 1/2). The CDF and the
//! reference sampler are both built on that affine relation. λ = 0 is the
//! arcsine law, λ = 1/2 the uniform law and λ = 1 the Wigner semicircle.

use std::f64::consts::PI;

use num_bigint::BigInt;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::exact::{factorial, rising_gamma_ratio, HalfInteger, Rational};
use crate::special::beta_reg;

/// Weight vectors must sum to one within this tolerance.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

fn check_half_width(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "half-width a must be positive and finite, got {a}"
        )))
    }
}

/// Arcsine law on `(-a, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcsineParams {
    a: f64,
}

impl ArcsineParams {
    pub fn new(a: f64) -> Result<Self> {
        check_half_width(a)?;
        Ok(ArcsineParams { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `1 / (π √(a² - x²))` for `|x| < a`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let a = self.a;
        if x.is_nan() || x.abs() >= a {
            return Err(Error::Domain(format!(
                "arcsine density needs |x| < {a}, got {x}"
            )));
        }
        Ok(1.0 / (PI * ((a - x) * (a + x)).sqrt()))
    }

    /// `E(X^i)` at this scale.
    pub fn moment(&self, i: u32) -> f64 {
        crate::exact::rational_to_f64(&arcsine_moment(i)) * self.a.powi(i as i32)
    }

    /// `a · cos(π U)` with `U` uniform on `[0, 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.a * unit_arcsine(rng)
    }
}

/// One Arcsine(1) draw, consuming exactly one uniform.
pub(crate) fn unit_arcsine<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    (PI * u).cos()
}

/// Exact `E(X^i)` for X ~ Arcsine(1); multiply by `a^i` for other scales.
///
/// Odd orders vanish. For `i = 2m` the value is `(1/2)_m / m!`, the
/// rising-factorial form of `Γ(1/2 + m) / (√π Γ(1 + m))`.
pub fn arcsine_moment(i: u32) -> Rational {
    if i % 2 == 1 {
        return Rational::from_integer(BigInt::from(0));
    }
    let m = (i / 2) as u64;
    rising_gamma_ratio(HalfInteger::HALF, m) / Rational::from_integer(BigInt::from(factorial(m)))
}

/// Power semicircle law with exponent parameter `λ ≥ 0` on `(-a, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSemicircleParams {
    lambda: f64,
    a: f64,
    ln_norm: f64,
}

impl PowerSemicircleParams {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Parameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        check_half_width(a)?;
        let ln_norm =
            ln_gamma(lambda + 1.0) - ln_gamma(lambda + 0.5) - 0.5 * PI.ln() - 2.0 * lambda * a.ln();
        Ok(PowerSemicircleParams { lambda, a, ln_norm })
    }

    /// The law that the weighted average of `n` arcsine variables follows:
    /// λ = (n - 1) / 2.
    pub fn for_rwa(n: u32, a: f64) -> Result<Self> {
        Self::new((n as f64 - 1.0) / 2.0, a)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Shape parameter of the symmetric Beta law of `(X + a) / (2a)`.
    pub fn beta_shape(&self) -> f64 {
        self.lambda + 0.5
    }

    /// Density value. For λ ≥ 1/2 the endpoints `|x| = a` return the
    /// continuous limit; for λ < 1/2, where the density diverges there, they
    /// are a domain error.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let a = self.a;
        let exponent = self.lambda - 0.5;
        if x.is_nan() || x.abs() > a || (x.abs() == a && exponent < 0.0) {
            return Err(Error::Domain(format!(
                "power semicircle density (lambda = {}) undefined at x = {x} for a = {a}",
                self.lambda
            )));
        }
        let base = (a - x) * (a + x);
        if exponent == 0.0 {
            return Ok(self.ln_norm.exp());
        }
        if base == 0.0 {
            return Ok(0.0);
        }
        Ok((self.ln_norm + exponent * base.ln()).exp())
    }

    /// `I_t(λ + 1/2, λ + 1/2)` with `t = (x + a) / (2a)` clamped to `[0, 1]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let a = self.a;
        if x <= -a {
            return 0.0;
        }
        if x >= a {
            return 1.0;
        }
        let t = ((x + a) / (2.0 * a)).clamp(0.0, 1.0);
        let s = self.beta_shape();
        beta_reg(s, s, t)
    }

    /// `2a·B - a` with `B = G₁ / (G₁ + G₂)`, `G₁, G₂ ~ Gamma(λ + 1/2, 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let gamma = Gamma::new(self.beta_shape(), 1.0).expect("shape >= 1/2");
        let g1 = gamma.sample(rng);
        let g2 = gamma.sample(rng);
        let b = g1 / (g1 + g2);
        (2.0 * self.a * b - self.a).clamp(-self.a, self.a)
    }

    /// `E(X^i)` at this scale, in floating point.
    pub fn moment(&self, i: u32) -> f64 {
        if i % 2 == 1 {
            return 0.0;
        }
        // Γ(k + 1/2) Γ(λ + 1) / (√π Γ(k + λ + 1))
        let k = (i / 2) as f64;
        let ln = ln_gamma(k + 0.5) + ln_gamma(self.lambda + 1.0)
            - 0.5 * PI.ln()
            - ln_gamma(k + self.lambda + 1.0);
        ln.exp() * self.a.powi(i as i32)
    }
}

/// Random proportions `(R_1, …, R_n)` on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Validates non-negativity and unit sum (within [`SIMPLEX_TOLERANCE`]).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::Parameter("weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::Parameter(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightVector { weights })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.weights
    }
}

/// How a uniform-spacings vector is drawn. Both give Dirichlet(1, …, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpacingsMethod {
    /// Sort `n - 1` uniforms on `[0, 1)`, adjoin 0 and 1, take differences.
    #[default]
    OrderStatistics,
    /// Normalize `n` i.i.d. standard exponentials.
    Exponentials,
}

/// The `n` spacings of `n - 1` i.i.d. uniform order statistics.
pub fn spacings_sample<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<WeightVector> {
    spacings_sample_with(n, SpacingsMethod::default(), rng)
}

pub fn spacings_sample_with<R: Rng + ?Sized>(
    n: u32,
    method: SpacingsMethod,
    rng: &mut R,
) -> Result<WeightVector> {
    check_spacings_n(n)?;
    let mut w = vec![0.0; n as usize];
    fill_spacings(method, rng, &mut w);
    Ok(WeightVector { weights: w })
}

pub(crate) fn check_spacings_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 spacings, got n = {n}"
        )));
    }
    Ok(())
}

/// Writes one spacings vector into `out` (length `n ≥ 2`).
pub(crate) fn fill_spacings<R: Rng + ?Sized>(method: SpacingsMethod, rng: &mut R, out: &mut [f64]) {
    let n = out.len();
    match method {
        SpacingsMethod::OrderStatistics => {
            // out[0..n-1] holds the sorted cut points, then differenced in place
            for u in &mut out[..n - 1] {
                *u = rng.random();
            }
            out[..n - 1].sort_by(f64::total_cmp);
            out[n - 1] = 1.0 - out[n - 2];
            for i in (1..n - 1).rev() {
                out[i] -= out[i - 1];
            }
        }
        SpacingsMethod::Exponentials => {
            let mut total = 0.0;
            for e in out.iter_mut() {
                *e = Exp1.sample(rng);
                total += *e;
            }
            for e in out.iter_mut() {
                *e /= total;
            }
        }
    }
}
