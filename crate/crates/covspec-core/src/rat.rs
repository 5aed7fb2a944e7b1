//! Exact rational scalars used for every length and radius in the crate.

use num::rational::Ratio;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number.  `i128` components keep products of hundreds of
/// small edge lengths far away from overflow.
pub type Rat = Ratio<i128>;

/// Shorthand constructor, reducing the fraction.
pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"5"`, `"-5"`, `"3/2"`, `"-3/2"`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(RatParseError::Empty);
    }
    let (num_s, den_s) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: i128 = num_s
        .parse()
        .map_err(|_| RatParseError::Malformed(s.to_string()))?;
    let den: i128 = den_s
        .parse()
        .map_err(|_| RatParseError::Malformed(s.to_string()))?;
    if den == 0 {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Ratio::new(num, den))
}

/// Renders without a denominator when the value is integral: `"6"`, `"-3/2"`.
pub fn fmt_rat(r: Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_abs(r: Rat) -> Rat {
    r.abs()
}
