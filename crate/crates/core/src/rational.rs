//! The exact scalar type and its text forms.
//!
//! Rationals are written `num/den` with an optional leading minus. A bare
//! integer `n` is accepted as shorthand for `n/1`. Decimal notation is
//! output-only.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}` (expected num/den)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

fn parse_integer(text: &str, whole: &str, allow_sign: bool) -> Result<BigInt, ParseRationalError> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        _ => text,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    text.parse::<BigInt>()
        .map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(text, text, true)?)),
        Some((num, den)) => {
            let num = parse_integer(num, text, true)?;
            let den = parse_integer(den, text, false)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// `num/den`, always with an explicit denominator.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Fixed-point decimal with exactly `digits` fractional digits, rounded half
/// away from zero.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let rounded = if scaled - Rational::from_integer(floor.clone()) >= Rational::new(1.into(), 2.into()) {
        floor + 1
    } else {
        floor
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded_is_zero(&int_part, &frac_part) { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_str_radix(10);
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

fn rounded_is_zero(int_part: &BigInt, frac_part: &BigInt) -> bool {
    int_part.sign() == Sign::NoSign && frac_part.is_zero()
}

/// Like [`to_decimal`] but with trailing fractional zeros removed.
pub fn to_decimal_trimmed(value: &Rational, max_digits: usize) -> String {
    let fixed = to_decimal(value, max_digits);
    if !fixed.contains('.') {
        return fixed;
    }
    let trimmed = fixed.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" { "0".to_string() } else { trimmed.to_string() }
}

/// Least common multiple of the denominators of `values` (1 for an empty
/// iterator).
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(value.into())
}
