//! Exact fixed-point function values.
//!
//! Every function value handled by the combinatorial parts of the crate
//! (graphs, complexes, smoothing, cosheaves, interleavings) is an integer
//! number of nano-units (1e-9). Decimal input is parsed exactly; sums and
//! differences never round, so ties such as `f(u) + ε == f(v) - ε` are
//! detected exactly.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseValueError;

/// Number of fractional decimal digits carried by a [`Value`].
pub const DECIMALS: u32 = 9;
/// Nano-units per unit.
pub const SCALE: i64 = 1_000_000_000;

/// A real value stored exactly as a multiple of 1e-9.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(i64);

impl Value {
    pub const ZERO: Value = Value(0);
    /// Smallest positive representable value.
    pub const QUANTUM: Value = Value(1);

    pub const fn from_units(units: i64) -> Self {
        Value(units)
    }

    pub const fn units(self) -> i64 {
        self.0
    }

    pub fn from_int(n: i64) -> Self {
        Value(n * SCALE)
    }

    /// Nearest representable value; used only where inputs are genuinely
    /// floating point (CLI tolerances, random grids already exact).
    pub fn from_f64_round(x: f64) -> Self {
        Value((x * SCALE as f64).round() as i64)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn abs(self) -> Self {
        Value(self.0.abs())
    }

    /// Exact halving; `None` when the unit count is odd.
    pub fn half_exact(self) -> Option<Self> {
        (self.0 % 2 == 0).then_some(Value(self.0 / 2))
    }

    /// Halving rounded toward negative infinity.
    pub fn half_floor(self) -> Self {
        Value(self.0.div_euclid(2))
    }

    pub fn double(self) -> Self {
        Value(self.0 * 2)
    }

    pub fn scale(self, k: i64) -> Self {
        Value(self.0 * k)
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        Value(self.0 - rhs.0)
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let int = abs / SCALE as u64;
        let frac = abs % SCALE as u64;
        if frac == 0 {
            return write!(f, "{sign}{int}");
        }
        let digits = format!("{frac:09}");
        write!(f, "{sign}{int}.{}", digits.trim_end_matches('0'))
    }
}

impl FromStr for Value {
    type Err = ParseValueError;

    /// Parses `[+-]digits[.digits]` exactly. More than nine significant
    /// fractional digits is an error rather than a silent rounding.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &'static str| ParseValueError {
            text: s.to_string(),
            reason,
        };
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err("not a decimal number"));
        }
        let frac_trimmed = frac_part.trim_end_matches('0');
        if frac_trimmed.len() > DECIMALS as usize {
            return Err(err("more than 9 fractional digits"));
        }
        let int: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| err("integer part out of range"))?
        };
        let mut frac: i64 = 0;
        for (k, b) in frac_trimmed.bytes().enumerate() {
            frac += i64::from(b - b'0') * 10_i64.pow(DECIMALS - 1 - k as u32);
        }
        let units = int
            .checked_mul(SCALE)
            .and_then(|u| u.checked_add(frac))
            .ok_or_else(|| err("value out of range"))?;
        Ok(Value(if neg { -units } else { units }))
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(v("0.25").units(), 250_000_000);
        assert_eq!(v("-1.5").units(), -1_500_000_000);
        assert_eq!(v("3").units(), 3 * SCALE);
        assert_eq!(v(".5").units(), 500_000_000);
        assert_eq!(v("0.1") + v("0.2"), v("0.3"));
        assert_eq!(v("1.000000000000"), v("1"));
    }

    #[test]
    fn rejects_garbage_and_excess_precision() {
        assert!("abc".parse::<Value>().is_err());
        assert!("1e5".parse::<Value>().is_err());
        assert!("".parse::<Value>().is_err());
        assert!("0.0000000001".parse::<Value>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "1", "-0.25", "12.000000001", "0.1"] {
            assert_eq!(v(s).to_string(), s);
        }
    }
}
