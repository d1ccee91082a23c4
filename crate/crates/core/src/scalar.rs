//! Scalar abstraction shared by the threshold arithmetic.
//!
//! Clause checks and regime classification are written once over [`Scalar`]
//! so they can be evaluated either in floating point or exactly over the
//! rationals. Exact evaluation matters at desk scale where margins such as
//! `|A| - (alpha - beta) n` are often zero.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Num, NumCast, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A signed ordered field-like number usable for clause arithmetic.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + Debug + Display + ToPrimitive + Send + Sync + 'static
{
    fn from_usize(v: usize) -> Self;
    fn floor(self) -> Self;
    fn ceil(self) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn from_usize(v: usize) -> Self {
        v as f64
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn ceil(self) -> Self {
        f64::ceil(self)
    }
}

impl Scalar for f32 {
    fn from_usize(v: usize) -> Self {
        v as f32
    }
    fn floor(self) -> Self {
        f32::floor(self)
    }
    fn ceil(self) -> Self {
        f32::ceil(self)
    }
}

impl Scalar for Ratio<i64> {
    fn from_usize(v: usize) -> Self {
        Ratio::from_integer(v as i64)
    }
    fn floor(self) -> Self {
        Ratio::floor(&self)
    }
    fn ceil(self) -> Self {
        Ratio::ceil(&self)
    }
}

/// Converts a scalar that is known to hold a non-negative integer into `usize`.
pub fn to_count<T: Scalar>(value: T) -> Option<usize> {
    if value < T::zero() || value.floor() != value {
        return None;
    }
    NumCast::from(value)
}

/// Parses a decimal or fraction literal (`"0.05"`, `"1/20"`, `"3"`) into an exact ratio.
pub fn parse_rational(text: &str) -> Option<Ratio<i64>> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = i64::from_str(num.trim()).ok()?;
        let den = i64::from_str(den.trim()).ok()?;
        if den == 0 {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    if frac_part.len() > 15 {
        return None;
    }
    let scale = 10i64.checked_pow(frac_part.len() as u32)?;
    let int_value = if int_part.is_empty() { 0 } else { i64::from_str(int_part).ok()? };
    let frac_value = if frac_part.is_empty() { 0 } else { i64::from_str(frac_part).ok()? };
    let value = Ratio::new(int_value.checked_mul(scale)?.checked_add(frac_value)?, scale);
    Some(if negative { -value } else { value })
}

/// Best rational approximation of a float with a bounded denominator.
pub fn rational_from_f64(value: f64) -> Option<Ratio<i64>> {
    if !value.is_finite() {
        return None;
    }
    // Shortest round-trip decimal representation keeps "0.05" exact.
    parse_rational(&format!("{value}"))
        .or_else(|| Ratio::approximate_float(value))
        .map(|r: Ratio<i64>| if r.is_zero() { Ratio::zero() } else { r })
}

/// Exact fraction that reads from config files as `"1/3"`, `"0.05"` or a number
/// and writes back as `"a/b"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(pub Ratio<i64>);

impl Fraction {
    pub fn new(num: i64, den: i64) -> Self {
        Self(Ratio::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Fraction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Fraction).ok_or_else(|| format!("not a fraction: {s:?}"))
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
            Float(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(de::Error::custom),
            Raw::Int(i) => Ok(Fraction(Ratio::from_integer(i))),
            Raw::Float(x) => rational_from_f64(x)
                .map(Fraction)
                .ok_or_else(|| de::Error::custom(format!("not representable as a fraction: {x}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.05"), Some(Ratio::new(1, 20)));
        assert_eq!(parse_rational("1/3"), Some(Ratio::new(1, 3)));
        assert_eq!(parse_rational("-2.5"), Some(Ratio::new(-5, 2)));
        assert_eq!(parse_rational("7"), Some(Ratio::from_integer(7)));
        assert_eq!(parse_rational(".5"), Some(Ratio::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn float_conversion_keeps_short_decimals_exact() {
        assert_eq!(rational_from_f64(0.05), Some(Ratio::new(1, 20)));
        assert_eq!(rational_from_f64(0.25), Some(Ratio::new(1, 4)));
    }

    #[test]
    fn fraction_serde_accepts_strings_and_numbers() {
        let f: Fraction = serde_json::from_str("\"1/3\"").unwrap();
        assert_eq!(f, Fraction::new(1, 3));
        let f: Fraction = serde_json::from_str("0.25").unwrap();
        assert_eq!(f, Fraction::new(1, 4));
        let f: Fraction = serde_json::from_str("2").unwrap();
        assert_eq!(f.to_string(), "2");
        assert_eq!(serde_json::to_string(&Fraction::new(7, 12)).unwrap(), "\"7/12\"");
    }

    #[test]
    fn floor_and_count_agree_across_scalars() {
        assert_eq!(to_count(Ratio::new(8, 2)), Some(4));
        assert_eq!(to_count(Ratio::new(9, 2)), None);
        assert_eq!(to_count(4.0f64), Some(4));
        assert_eq!(to_count(-1.0f64), None);
        assert_eq!(Scalar::floor(Ratio::new(7, 2)), Ratio::from_integer(3));
        assert_eq!(Scalar::ceil(3.2f32), 4.0);
    }
}
