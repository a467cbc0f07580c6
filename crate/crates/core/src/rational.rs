//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. This module adds the constructors,
//! parsing and canonical `"p/q"` formatting used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Builds `num/den` in canonical form. Fails on a zero denominator.
pub fn make_rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(Rational::new(num.into(), den))
}

/// Shorthand for small literal fractions. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &Rational) -> BigInt {
    let (d, m) = q.numer().div_mod_floor(q.denom());
    if m.is_zero() {
        d
    } else {
        d + 1
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Canonical string form: always `"num/den"`, e.g. `"3/1"`, `"-1/2"`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, plain integers, and finite decimals such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let owned = s.trim().replace('\u{2212}', "-");
    let s = owned.as_str();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        return make_rational(n, d);
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            n = -n;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return make_rational(n, den);
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Integer-valued rational to `i64`, if it fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
