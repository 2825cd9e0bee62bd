//! Exact non-negative fractions for density thresholds.
//!
//! Threshold tests such as "at least `mu * n^k` edges" are evaluated by
//! cross-multiplication, never in floating point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(Ratio<BigUint>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("'{0}' is not a non-negative decimal or p/q fraction")]
pub struct FractionParseError(pub String);

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Fraction(Ratio::new(BigUint::from(num), BigUint::from(den)))
    }

    pub fn zero() -> Self {
        Fraction(Ratio::zero())
    }

    pub fn one() -> Self {
        Fraction(Ratio::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self / divisor`.
    pub fn div_int(&self, divisor: u64) -> Self {
        assert!(divisor != 0, "division by zero");
        Fraction(&self.0 / Ratio::from_integer(BigUint::from(divisor)))
    }

    pub fn mul(&self, other: &Fraction) -> Self {
        Fraction(&self.0 * &other.0)
    }

    pub fn mul_int(&self, factor: u64) -> Self {
        Fraction(&self.0 * Ratio::from_integer(BigUint::from(factor)))
    }

    /// `self - other`, clamped at zero.
    pub fn saturating_sub(&self, other: &Fraction) -> Self {
        if other.0 >= self.0 {
            Fraction::zero()
        } else {
            Fraction(&self.0 - &other.0)
        }
    }

    /// Whether `count >= self * scale`.
    pub fn is_met_by(&self, count: u128, scale: &BigUint) -> bool {
        BigUint::from(count) * self.0.denom() >= self.0.numer() * scale
    }

    /// Whether the integer `value` is at least this fraction.
    pub fn le_int(&self, value: u128) -> bool {
        self.is_met_by(value, &BigUint::one())
    }

    pub fn in_open_unit_interval(&self) -> bool {
        !self.0.is_zero() && self.0 < Ratio::one()
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = self.0.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    }
}

/// `n^e` as a big integer.
pub fn power(n: usize, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(n), e)
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Fraction {
    type Err = FractionParseError;

    /// Accepts `p/q`, integers and finite decimals such as `0.05`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FractionParseError(s.to_string());
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: BigUint = p.trim().parse().map_err(|_| err())?;
            let q: BigUint = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Fraction(Ratio::new(p, q)));
        }
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let num: BigUint = if digits.is_empty() {
            BigUint::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let den = num_traits::pow(BigUint::from(10u32), frac.len());
        Ok(Fraction(Ratio::new(num, den)))
    }
}

/// Serialized as a `[numerator, denominator]` pair; components that do not
/// fit in 64 bits are written as decimal strings.
impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(2))?;
        for part in [self.0.numer(), self.0.denom()] {
            match part.to_u64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&part.to_string())?,
            }
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_ratios() {
        assert_eq!("0.05".parse::<Fraction>().unwrap(), Fraction::new(1, 20));
        assert_eq!("3/12".parse::<Fraction>().unwrap(), Fraction::new(1, 4));
        assert_eq!("2".parse::<Fraction>().unwrap(), Fraction::new(2, 1));
        assert_eq!(".5".parse::<Fraction>().unwrap(), Fraction::new(1, 2));
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("-0.1".parse::<Fraction>().is_err());
        assert!("abc".parse::<Fraction>().is_err());
    }

    #[test]
    fn threshold_comparison_is_exact() {
        let mu = Fraction::new(1, 100);
        // 0.01 * 12^3 = 17.28
        assert!(!mu.is_met_by(17, &power(12, 3)));
        assert!(mu.is_met_by(18, &power(12, 3)));
        let tiny = mu.div_int(125).div_int(125).div_int(125);
        assert!(tiny.is_met_by(1, &power(12, 4)));
    }

    #[test]
    fn serializes_as_pair() {
        let json = serde_json::to_string(&Fraction::new(1, 20)).unwrap();
        assert_eq!(json, "[1,20]");
        let huge = Fraction::new(1, 1).div_int(u64::MAX).div_int(3);
        let json = serde_json::to_string(&huge).unwrap();
        assert!(json.starts_with("[1,\""));
    }
}
