//! Exact rational scalars.
//!
//! Every entry of every matrix and sequence in this crate is a [`Rational`],
//! an arbitrary-precision fraction kept in lowest terms with a positive
//! denominator (the normalization `num-rational` performs on construction).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `num / den`, reduced. Panics on a zero denominator; use [`checked_div`]
/// for runtime values.
pub fn frac(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn checked_div(num: &Rational, den: &Rational) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

pub fn checked_recip(value: &Rational) -> Result<Rational> {
    checked_div(&Rational::one(), value)
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`. The Unicode minus sign is accepted as
/// well as ASCII `-`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let normalized = trimmed.replace('\u{2212}', "-");
    let bad = |msg: &str| Error::Parse {
        position: 0,
        message: format!("{msg}: {trimmed:?}"),
    };
    let (num, den) = match normalized.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (normalized.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("invalid denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise, sign on the
/// numerator.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

pub(crate) fn ser<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

pub(crate) fn ser_opt<S: Serializer>(
    value: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_some(&format_rational(v)),
        None => s.serialize_none(),
    }
}
