//! Exact arithmetic: rationals, half-integer rising factorials, multinomial
//! coefficients and streaming enumeration of integer compositions.
//!
//! Nothing in this module touches floating point. Every gamma ratio that the
//! moment computations need has a half-integer base and an integer increment,
//! so `Γ(q + m) / Γ(q)` is always the finite product `q (q + 1) ⋯ (q + m - 1)`
//! and no transcendental constant ever has to be represented.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// A positive number of the form `m / 2`.
///
/// Integers and half-integers share one representation so that Dirichlet
/// parameters such as `1`, `3/2` or `n/2` go through the same code path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: u64,
}

impl HalfInteger {
    /// `1/2`.
    pub const HALF: HalfInteger = HalfInteger { twice: 1 };
    /// `1`.
    pub const ONE: HalfInteger = HalfInteger { twice: 2 };

    /// The number `twice_value / 2`; `twice_value` must be at least 1.
    pub fn from_twice(twice_value: u64) -> Result<Self> {
        if twice_value == 0 {
            return Err(Error::Parameter(
                "half-integer must be at least 1/2".to_string(),
            ));
        }
        Ok(HalfInteger { twice: twice_value })
    }

    /// The positive integer `value`.
    pub fn from_integer(value: u64) -> Result<Self> {
        Self::from_twice(
            value
                .checked_mul(2)
                .ok_or_else(|| Error::Parameter(format!("half-integer {value} overflows")))?,
        )
    }

    pub fn twice_value(self) -> u64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    /// `self + m` for a non-negative integer `m`.
    pub fn add_integer(self, m: u64) -> Self {
        HalfInteger {
            twice: self.twice + 2 * m,
        }
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.twice), BigInt::from(2u32))
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;

    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger {
            twice: self.twice + rhs.twice,
        }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Accepts `3`, `3/2`, `6/4`-style fractions that reduce to a half-integer,
/// and decimals such as `2.5`.
impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::ParseHalfInteger(s.to_string());
        let t = s.trim();
        let twice = if let Some((num, den)) = t.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| err())?;
            let den: u64 = den.trim().parse().map_err(|_| err())?;
            if den == 0 || !(2 * num).is_multiple_of(den) {
                return Err(err());
            }
            2 * num / den
        } else if let Some((int, frac)) = t.split_once('.') {
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| err())?
            };
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(err()),
            };
            2 * int + half
        } else {
            2 * t.parse::<u64>().map_err(|_| err())?
        };
        HalfInteger::from_twice(twice).map_err(|_| err())
    }
}

/// `Γ(q + m) / Γ(q)` as the exact rising factorial `q (q + 1) ⋯ (q + m - 1)`.
///
/// ```
/// use rwa_core::exact::{rising_gamma_ratio, HalfInteger, Rational};
/// // (1/2)(3/2) = 3/4
/// assert_eq!(
///     rising_gamma_ratio(HalfInteger::HALF, 2),
///     Rational::new(3.into(), 4.into())
/// );
/// ```
pub fn rising_gamma_ratio(q: HalfInteger, m: u64) -> Rational {
    // ∏ (twice + 2j) / 2
    let mut num = BigInt::one();
    for j in 0..m {
        num *= q.twice + 2 * j;
    }
    let den = BigInt::one() << (m as usize);
    Rational::new(num, den)
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, j| acc * j)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// An ordered tuple of non-negative integers with a fixed sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    /// Builds a composition and checks that it sums to `order`.
    pub fn new(parts: Vec<u32>, order: u32) -> Result<Self> {
        let actual: u64 = parts.iter().map(|&p| p as u64).sum();
        if actual != order as u64 {
            return Err(Error::CompositionSum {
                parts,
                expected: order,
                actual,
            });
        }
        Ok(Composition { parts })
    }

    /// Builds a composition whose order is whatever its parts sum to.
    pub fn from_parts(parts: Vec<u32>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn order(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// `r! / (i_1! ⋯ i_n!)`.
///
/// Fails when the parts do not sum to `r`.
pub fn multinomial(r: u32, parts: &Composition) -> Result<BigUint> {
    let actual = parts.order();
    if actual != r as u64 {
        return Err(Error::CompositionSum {
            parts: parts.parts.clone(),
            expected: r,
            actual,
        });
    }
    Ok(multinomial_unchecked(r, parts.parts()))
}

pub(crate) fn multinomial_unchecked(r: u32, parts: &[u32]) -> BigUint {
    // Product of binomials: C(i1, i1) C(i1+i2, i2) ⋯
    let mut acc = BigUint::one();
    let mut running = 0u64;
    for &p in parts {
        running += p as u64;
        acc *= binomial(running, p as u64);
    }
    debug_assert_eq!(running, r as u64);
    acc
}

/// Streaming enumeration of the compositions of `order` into `len`
/// non-negative parts, in lexicographically descending order.
///
/// `(r=2, n=2)` yields `(2,0), (1,1), (0,2)`. Exactly
/// `binomial(order + len - 1, len - 1)` items are produced, and only one
/// buffer of `len` integers is live at any time; [`Compositions::advance`]
/// exposes that buffer without allocating.
#[derive(Debug, Clone)]
pub struct Compositions {
    parts: Vec<u32>,
    started: bool,
    done: bool,
}

/// All compositions of `r` into `n` ordered non-negative parts.
///
/// For `n == 0` the stream is empty (no tuple of length zero sums to a
/// positive `r`), except for `r == 0` where the single empty tuple is produced.
pub fn compositions(r: u32, n: usize) -> Compositions {
    let mut parts = vec![0u32; n];
    let done = if n == 0 {
        r != 0
    } else {
        parts[0] = r;
        false
    };
    Compositions {
        parts,
        started: false,
        done,
    }
}

impl Compositions {
    /// Moves to the next composition and returns it, or `None` when the
    /// stream is exhausted.
    pub fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.parts);
        }
        let n = self.parts.len();
        if n < 2 {
            self.done = true;
            return None;
        }
        // Rightmost position (excluding the last) that can give one unit to
        // its right-hand neighbour.
        let Some(j) = (0..n - 1).rev().find(|&j| self.parts[j] > 0) else {
            self.done = true;
            return None;
        };
        let tail: u32 = self.parts[j + 1..].iter().sum();
        self.parts[j] -= 1;
        self.parts[j + 1] = tail + 1;
        for p in &mut self.parts[j + 2..] {
            *p = 0;
        }
        Some(&self.parts)
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        self.advance().map(|p| Composition::from_parts(p.to_vec()))
    }
}

/// Decimal rendering of `x` rounded (half away from zero) to `sig`
/// significant digits, in positional notation.
pub fn to_decimal_string(x: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let abs = x.abs();
    let ten = BigInt::from(10u32);

    // Find e with 10^e <= abs < 10^(e+1).
    let mut e: i64 = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }

    let shift = sig as i64 - 1 - e;
    let scaled = &abs * pow10(shift);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if rem * 2 >= *scaled.denom() { q + 1 } else { q };
    let mut shift = shift;
    if digits.to_string().len() > sig {
        digits /= 10;
        shift -= 1;
    }

    let s = digits.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if shift <= 0 {
        out.push_str(&s);
        out.push_str(&"0".repeat((-shift) as usize));
    } else {
        let shift = shift as usize;
        if s.len() > shift {
            let (int, frac) = s.split_at(s.len() - shift);
            out.push_str(int);
            out.push('.');
            out.push_str(frac);
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat(shift - s.len()));
            out.push_str(&s);
        }
    }
    out
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => to_decimal_string(x, 20).parse().unwrap_or(f64::NAN),
    }
}

/// Serialized form of an exact value: numerator and denominator as decimal
/// strings plus a 30-significant-digit rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

pub const DECIMAL_DIGITS: usize = 30;

impl From<&Rational> for ExactValue {
    fn from(x: &Rational) -> Self {
        ExactValue {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            decimal: to_decimal_string(x, DECIMAL_DIGITS),
        }
    }
}

impl ExactValue {
    pub fn to_rational(&self) -> Option<Rational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rising_ratio_examples() {
        assert_eq!(rising_gamma_ratio(HalfInteger::HALF, 0), q(1, 1));
        assert_eq!(rising_gamma_ratio(HalfInteger::HALF, 2), q(3, 4));
        let three_halves = HalfInteger::from_twice(3).unwrap();
        assert_eq!(rising_gamma_ratio(three_halves, 1), q(3, 2));
        // integer base gives shifted factorials
        assert_eq!(rising_gamma_ratio(HalfInteger::ONE, 5), q(120, 1));
    }

    #[test]
    fn multinomial_examples() {
        let c = |v: Vec<u32>, r| Composition::new(v, r).unwrap();
        assert_eq!(
            multinomial(1, &c(vec![1, 0], 1)).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            multinomial(4, &c(vec![2, 2], 4)).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            multinomial(3, &c(vec![1, 1, 1], 3)).unwrap(),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn multinomial_rejects_wrong_sum() {
        let c = Composition::from_parts(vec![1, 1]);
        assert!(matches!(
            multinomial(3, &c),
            Err(Error::CompositionSum {
                expected: 3,
                actual: 2,
                ..
            })
        ));
        assert!(Composition::new(vec![2, 2], 3).is_err());
    }

    #[test]
    fn composition_examples() {
        let all: Vec<Vec<u32>> = compositions(0, 3).map(|c| c.parts().to_vec()).collect();
        assert_eq!(all, vec![vec![0, 0, 0]]);

        let all: Vec<Vec<u32>> = compositions(2, 2).map(|c| c.parts().to_vec()).collect();
        assert_eq!(all, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);

        assert_eq!(compositions(3, 2).count(), 4);
    }

    #[test]
    fn composition_order_is_lex_descending() {
        let all: Vec<Vec<u32>> = compositions(2, 3).map(|c| c.parts().to_vec()).collect();
        assert_eq!(
            all,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
    }

    #[test]
    fn composition_degenerate_lengths() {
        assert_eq!(compositions(5, 1).count(), 1);
        assert_eq!(compositions(0, 0).count(), 1);
        assert_eq!(compositions(3, 0).count(), 0);
    }

    #[test]
    fn half_integer_parsing() {
        assert_eq!("1/2".parse::<HalfInteger>().unwrap(), HalfInteger::HALF);
        assert_eq!("2".parse::<HalfInteger>().unwrap().twice_value(), 4);
        assert_eq!("2.5".parse::<HalfInteger>().unwrap().twice_value(), 5);
        assert_eq!("6/4".parse::<HalfInteger>().unwrap().twice_value(), 3);
        assert_eq!("3.50".parse::<HalfInteger>().unwrap().twice_value(), 7);
        for bad in ["0", "1/3", "-1", "x", "0.25", "", "1/0", "0/2"] {
            assert!(bad.parse::<HalfInteger>().is_err(), "{bad}");
        }
        assert_eq!(HalfInteger::from_twice(7).unwrap().to_string(), "7/2");
        assert_eq!(HalfInteger::from_twice(8).unwrap().to_string(), "4");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&q(1, 3), 5), "0.33333");
        assert_eq!(to_decimal_string(&q(2, 3), 5), "0.66667");
        assert_eq!(to_decimal_string(&q(1, 1), 3), "1.00");
        assert_eq!(to_decimal_string(&q(5, 64), 4), "0.07813");
        assert_eq!(to_decimal_string(&q(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal_string(&q(12345, 1), 2), "12000");
        assert_eq!(to_decimal_string(&q(999, 1000), 2), "1.0");
        assert_eq!(to_decimal_string(&q(1, 1000), 1), "0.001");
        assert_eq!(to_decimal_string(&q(0, 1), 30), "0");
        assert_eq!(
            to_decimal_string(&q(1, 3), DECIMAL_DIGITS),
            format!("0.{}", "3".repeat(30))
        );
    }

    #[test]
    fn exact_value_roundtrip() {
        let x = q(-22, 7);
        let v = ExactValue::from(&x);
        assert_eq!(v.num, "-22");
        assert_eq!(v.den, "7");
        assert_eq!(v.to_rational().unwrap(), x);
    }

    #[test]
    fn rational_is_reduced() {
        let x = q(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(q(1, 6) + q(1, 3), q(1, 2));
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(binomial(27, 7), BigUint::from(888_030u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(factorial(10), BigUint::from(3_628_800u32));
        assert_eq!(factorial(0), BigUint::one());
    }
}
