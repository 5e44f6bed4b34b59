use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

use super::LabError;

/// Digits that must survive the accumulated error of a Weyl sequence.
pub(crate) const RELIABLE_DIGITS: u32 = 10;

/// The multiplier of a Weyl sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alpha {
    /// A rational value, used exactly.
    Exact(Rational),
    /// A decimal approximation with `|α − value| ≤ 10^−precision`.
    Decimal { value: Rational, precision: u32 },
}

impl Alpha {
    /// Parses `[-]digits[.digits]` as an approximation good to
    /// `10^−precision`, which may not exceed the number of fractional digits.
    pub fn decimal(text: &str, precision: u32) -> Result<Self, LabError> {
        let malformed = || LabError::MalformedDecimal(text.to_string());
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if int_part.is_empty() || !digits_ok(int_part) || !digits_ok(frac_part) || (body.contains('.') && frac_part.is_empty()) {
            return Err(malformed());
        }
        let available = frac_part.len() as u32;
        if precision > available {
            return Err(LabError::PrecisionExceedsDigits { claimed: precision, available });
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| malformed())?;
        let mut value = Rational::new(mantissa, BigInt::from(10u32).pow(available));
        if negative {
            value = -value;
        }
        Ok(Alpha::Decimal { value, precision })
    }

    pub fn value(&self) -> &Rational {
        match self {
            Alpha::Exact(v) | Alpha::Decimal { value: v, .. } => v,
        }
    }

    /// Upper bound on `|α − value|`.
    pub fn error(&self) -> Rational {
        match self {
            Alpha::Exact(_) => Rational::zero(),
            Alpha::Decimal { precision, .. } => {
                Rational::new(BigInt::one(), BigInt::from(10u32).pow(*precision))
            }
        }
    }
}

/// The sequence `((r + mN)·α) mod 1` for `m = 1..=count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    pub offset: u64,
    pub step: u64,
    pub alpha: Alpha,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylTerm {
    pub index: u64,
    pub fraction: Rational,
    /// Bound on the distance between `fraction` and the true fractional part
    /// (modulo wrap-around at 0/1).
    pub error: Rational,
}

fn fractional_part(x: &Rational) -> Rational {
    x - x.floor()
}

fn check_spec(spec: &SequenceSpec) -> Result<(), LabError> {
    if spec.step == 0 {
        return Err(LabError::ZeroStep);
    }
    if spec.count == 0 {
        return Err(LabError::ZeroCount);
    }
    if let Alpha::Decimal { precision, .. } = spec.alpha {
        // need (r + count·N)·10^RELIABLE_DIGITS ≤ 10^precision
        let largest = BigInt::from(spec.offset) + BigInt::from(spec.count) * BigInt::from(spec.step);
        let scale = BigInt::from(10u32).pow(RELIABLE_DIGITS);
        if largest * scale > BigInt::from(10u32).pow(precision) {
            return Err(LabError::InsufficientPrecision { precision, terms: spec.count });
        }
    }
    Ok(())
}

pub fn weyl_sequence(spec: &SequenceSpec) -> Result<Vec<WeylTerm>, LabError> {
    check_spec(spec)?;
    let alpha = spec.alpha.value();
    let alpha_err = spec.alpha.error();
    Ok((1..=spec.count)
        .map(|m| {
            let multiplier = Rational::from_integer(BigInt::from(spec.offset) + BigInt::from(m) * spec.step);
            WeylTerm {
                index: m,
                fraction: fractional_part(&(&multiplier * alpha)),
                error: multiplier * &alpha_err,
            }
        })
        .collect())
}

/// A product of half-open intervals `[a_j, b_j) ⊆ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalBox {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalBox {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self, LabError> {
        if intervals.is_empty() {
            return Err(LabError::EmptyBox);
        }
        for (lo, hi) in &intervals {
            if lo.is_negative() || hi > &Rational::one() || lo >= hi {
                return Err(LabError::BadInterval { lo: lo.to_string(), hi: hi.to_string() });
            }
        }
        Ok(Self { intervals })
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, LabError> {
        Self::new(vec![(lo, hi)])
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    /// Product of the interval lengths.
    pub fn volume(&self) -> Rational {
        self.intervals.iter().map(|(a, b)| b - a).product()
    }

    /// Whether `x mod 1` lies in the box, coordinate by coordinate.
    pub fn contains(&self, point: &[Rational]) -> bool {
        point.iter().zip(&self.intervals).all(|(x, (lo, hi))| {
            let f = fractional_part(x);
            lo <= &f && &f < hi
        })
    }
}

/// `C(I, n) / n` over the given points.
pub fn box_ratio<P: AsRef<[Rational]>>(points: &[P], bx: &IntervalBox) -> Result<Rational, LabError> {
    if points.is_empty() {
        return Err(LabError::EmptySequence);
    }
    let mut inside = 0u64;
    for p in points {
        let p = p.as_ref();
        if p.len() != bx.dim() {
            return Err(LabError::DimensionMismatch { expected: bx.dim(), found: p.len() });
        }
        if bx.contains(p) {
            inside += 1;
        }
    }
    Ok(Rational::new(inside.into(), (points.len() as u64).into()))
}

/// [`box_ratio`] over a one-dimensional Weyl sequence.
pub fn weyl_box_ratio(terms: &[WeylTerm], bx: &IntervalBox) -> Result<Rational, LabError> {
    if terms.is_empty() {
        return Err(LabError::EmptySequence);
    }
    if bx.dim() != 1 {
        return Err(LabError::DimensionMismatch { expected: bx.dim(), found: 1 });
    }
    let inside = terms.iter().filter(|t| bx.contains(std::slice::from_ref(&t.fraction))).count();
    Ok(Rational::new((inside as u64).into(), (terms.len() as u64).into()))
}
