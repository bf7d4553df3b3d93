//! Small exact-rational helpers shared by the threshold-based checks.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for expansion factors, set-size fractions and
/// similar thresholds.
pub type Rational = Ratio<i64>;

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.75"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = Rational::from_integer(int.abs()) + Rational::new(frac, den);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    text.parse::<i64>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// `floor(x)` for a nonnegative rational, saturating at zero.
pub fn floor_nonneg(x: Rational) -> usize {
    if x.is_negative() || x.is_zero() {
        return 0;
    }
    x.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// `floor(k / alpha)` computed exactly.
pub fn floor_div(k: usize, alpha: Rational) -> Result<usize> {
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "divisor must be positive, got {alpha}"
        )));
    }
    Ok(floor_nonneg(Rational::from_integer(k as i64) / alpha))
}

/// `true` iff `count >= factor * size`, evaluated without rounding.
pub fn at_least(count: usize, factor: Rational, size: usize) -> bool {
    Rational::from_integer(count as i64) >= factor * Rational::from_integer(size as i64)
}

/// Decimal rendering used in reports.
pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
