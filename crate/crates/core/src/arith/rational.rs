use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// Exact fraction in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ArithError> {
        let d = denom.into();
        if d.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), d)))
    }

    /// Literal constant `n/d`. Panics when `d == 0`; intended for compile-time known values.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::new(n, d).expect("literal fraction with zero denominator")
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(Rational(&self.0 / &rhs.0))
        }
    }

    /// Exact midpoint `(a + b) / 2`.
    pub fn midpoint(a: &Rational, b: &Rational) -> Self {
        Rational((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn min_of<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max_of<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Decimal rendering rounded half away from zero to `places` digits. Exact, no floats.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), places);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let neg = scaled.is_negative();
        let mag = scaled.abs();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let rounded = (mag + half).floor().to_integer();
        let (int_part, frac_part) = rounded.div_rem(&scale);
        let mut out = String::new();
        if neg && !(int_part.is_zero() && frac_part.is_zero()) {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if places > 0 {
            let digits = frac_part.to_string();
            out.push('.');
            out.extend(std::iter::repeat_n('0', places - digits.len()));
            out.push_str(&digits);
        }
        out
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

impl FromStr for Rational {
    type Err = ArithError;

    /// Accepts `p/q`, integers, and finite decimals such as `-0.125`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let bad = || ArithError::Parse(text.to_string());
        if let Some((p, q)) = t.split_once('/') {
            let p = parse_int(p.trim()).ok_or_else(bad)?;
            let q = q.trim();
            if q.starts_with(['+', '-']) {
                return Err(bad());
            }
            let q = parse_int(q).ok_or_else(bad)?;
            return Rational::new(p, q);
        }
        if let Some((ip, fp)) = t.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = ip.starts_with('-');
            let ip_digits = ip.strip_prefix(['+', '-']).unwrap_or(ip);
            if !ip_digits.bytes().all(|b| b.is_ascii_digit()) || (ip_digits.is_empty() && fp.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{ip_digits}{fp}");
            let mag = BigInt::from_str(&digits).map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let numer = if neg { -mag } else { mag };
            return Rational::new(numer, scale);
        }
        parse_int(t).map(Rational::from).ok_or_else(bad)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational($tr::$m(self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(&self.0, rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        *self == Rational::int(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::int(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let r = Rational::new(6, -4).unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(4, 2).unwrap().to_string(), "2");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn zero_denominator_is_error() {
        assert_eq!(Rational::new(1, 0), Err(ArithError::DivisionByZero));
        assert!(q("1").checked_div(&Rational::zero()).is_err());
        assert!(Rational::zero().recip().is_err());
        assert!("3/0".parse::<Rational>().is_err());
    }

    #[test]
    fn parses_supported_forms() {
        assert_eq!(q("-1/2"), Rational::frac(-1, 2));
        assert_eq!(q("+3"), Rational::int(3));
        assert_eq!(q("0.125"), Rational::frac(1, 8));
        assert_eq!(q("-2.50"), Rational::frac(-5, 2));
        assert_eq!(q(".5"), Rational::frac(1, 2));
        assert_eq!(q(" 10/4 "), Rational::frac(5, 2));
        for bad in ["", "1/", "/2", "1.", "1e3", "nan", "0.1.2", "1/-2", "--1", "½"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn decimal_rendering_rounds_exactly() {
        assert_eq!(Rational::frac(1, 3).to_decimal(3), "0.333");
        assert_eq!(Rational::frac(2, 3).to_decimal(3), "0.667");
        assert_eq!(Rational::frac(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(Rational::int(7).to_decimal(0), "7");
        assert_eq!(Rational::frac(-1, 1000).to_decimal(2), "0.00");
        assert_eq!(Rational::frac(201, 100).to_decimal(3), "2.010");
    }

    #[test]
    fn midpoint_and_order() {
        assert_eq!(Rational::midpoint(&q("0"), &q("1")), q("1/2"));
        assert!(q("-1/3") < q("-1/4"));
        assert!(q("5/2") > 2);
    }
}
