//! Scalar fields shared by the exact (rational) and floating code paths.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact rational number used for every symbolic computation.
pub type Rational = BigRational;

/// A field element usable by the algebra, charts and linear solvers.
///
/// Implemented for [`Rational`] (exact) and `f64` (numeric).
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + PartialEq + Send + Sync + 'static {
    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test: exact for rationals, `|x| <= tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool;

    fn is_exact() -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Integer power, negative exponents allowed for nonzero bases.
    fn powi(&self, exp: i32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc * self.clone();
        }
        if exp < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn is_exact() -> bool {
        false
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Some(Rational::from_integer(n));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = Rational::from_integer(n);
    if scale >= 0 {
        q *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -q } else { q })
}

/// Exact rational equal to the shortest decimal rendering of `x`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_decimal(&format!("{x:e}"))
}

/// Canonical text form: `"3"`, `"-1/2"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn abs_rational(q: &Rational) -> Rational {
    q.abs()
}

pub fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn convert_vec<S: Scalar>(v: &[Rational]) -> Vec<S> {
    v.iter().map(S::from_rational).collect()
}

pub fn norm_f64(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("0.125"), Some(rat(1, 8)));
        assert_eq!(parse_rational("-2.5e-1"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn float_conversion_uses_shortest_decimal() {
        assert_eq!(rational_from_f64(0.1), Some(rat(1, 10)));
        assert_eq!(rational_from_f64(-2.0), Some(int(-2)));
        assert_eq!(rational_from_f64(f64::NAN), None);
    }

    #[test]
    fn negative_powers() {
        assert_eq!(rat(2, 3).powi(-2), rat(9, 4));
        assert_eq!(2.0f64.powi(-1), 0.5);
        assert_eq!(Scalar::powi(&int(5), 0), int(1));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
    }
}
