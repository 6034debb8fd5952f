//! Exact rationals, their extension by `±∞`, parsing and formatting.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, integers, decimals (`"0.25"`) and scientific notation
/// (`"1e-6"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// `"7/3"` for proper fractions, `"5"` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Bit length of the larger of numerator and denominator.
pub fn bit_length(value: &Rational) -> u64 {
    value.numer().bits().max(value.denom().bits())
}

/// Decimal rendering with 15 significant digits, as used by the CSV exports.
pub fn format_decimal(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exponent = value.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        let decimals = (14 - exponent).max(0) as usize;
        let text = format!("{value:.decimals$}");
        if text.contains('.') {
            text.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            text
        }
    } else {
        format!("{value:.14e}")
    }
}

/// A rational number or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

pub use ExtendedRational::{NegInf, PosInf};

impl ExtendedRational {
    pub fn zero() -> Self {
        ExtendedRational::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedRational::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Panics on an infinite value; callers check finiteness first.
    pub fn expect_finite(&self) -> &Rational {
        self.finite().expect("finite value expected")
    }

    /// Sum with `−∞ + ∞` rejected.
    pub fn add(&self, other: &Self) -> Option<Self> {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (NegInf, PosInf) | (PosInf, NegInf) => None,
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (PosInf, _) | (_, PosInf) => Some(PosInf),
        }
    }

    pub fn add_finite(&self, r: &Rational) -> Self {
        match self {
            ExtendedRational::Finite(a) => ExtendedRational::Finite(a + r),
            other => other.clone(),
        }
    }

    pub fn sub_finite(&self, r: &Rational) -> Self {
        match self {
            ExtendedRational::Finite(a) => ExtendedRational::Finite(a - r),
            other => other.clone(),
        }
    }

    /// Division by a nonzero rational; the sign of the divisor flips infinities.
    pub fn div_finite(&self, r: &Rational) -> Self {
        assert!(!r.is_zero(), "division by zero");
        match self {
            ExtendedRational::Finite(a) => ExtendedRational::Finite(a / r),
            ExtendedRational::PosInf if r.is_negative() => ExtendedRational::NegInf,
            ExtendedRational::NegInf if r.is_negative() => ExtendedRational::PosInf,
            other => other.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtendedRational::Finite(a) => ExtendedRational::Finite(-a),
            ExtendedRational::PosInf => ExtendedRational::NegInf,
            ExtendedRational::NegInf => ExtendedRational::PosInf,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedRational::Finite(a) => to_f64(a),
            ExtendedRational::PosInf => f64::INFINITY,
            ExtendedRational::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "+inf" | "infinity" | "+infinity" | "∞" => Ok(ExtendedRational::PosInf),
            "-inf" | "-infinity" | "-∞" => Ok(ExtendedRational::NegInf),
            other => parse_rational(other).map(ExtendedRational::Finite),
        }
    }
}

impl From<Rational> for ExtendedRational {
    fn from(r: Rational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl From<&Rational> for ExtendedRational {
    fn from(r: &Rational) -> Self {
        ExtendedRational::Finite(r.clone())
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedRational::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::NegInf => f.write_str("-inf"),
            ExtendedRational::PosInf => f.write_str("inf"),
            ExtendedRational::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_exponents() {
        assert_eq!(parse_rational("7/3").unwrap(), rat(7, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for r in [rat(7, 3), int(-5), rat(-1, 1_000_000), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&rat(11, 3)), "11/3");
    }

    #[test]
    fn extended_order() {
        let xs = [NegInf, ExtendedRational::from(int(-3)), ExtendedRational::zero(), PosInf];
        for w in xs.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(ExtendedRational::parse("-inf").unwrap(), NegInf);
        assert_eq!(PosInf.div_finite(&int(-2)), NegInf);
        assert!(NegInf.add(&PosInf).is_none());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(11.0 / 3.0), "3.66666666666667");
        assert_eq!(format_decimal(2.0), "2");
        assert_eq!(format_decimal(0.0), "0");
        assert_eq!(format_decimal(-0.5), "-0.5");
        assert_eq!(format_decimal(1.0e20), "1.00000000000000e20");
    }
}
