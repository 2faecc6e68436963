//! Exact rational arithmetic and the real-argument binomial coefficient.
//!
//! Every quantity the bounds and certificates consume is a [`Rational`]. There
//! is no floating point in this module; comparisons are exact, which is what
//! lets the stability checker tell a strict inequality from an equality.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// The value as an `i64`, if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Decimal rendering truncated toward zero after `digits` fractional digits.
    /// Only used for the opt-in approximate display; never fed back into math.
    pub fn to_decimal(&self, digits: usize) -> String {
        let negative = self.is_negative();
        let numer = self.numer().abs();
        let denom = self.denom().clone();
        let (int_part, mut rem) = numer.div_rem(&denom);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            let ten = BigInt::from(10);
            for _ in 0..digits {
                rem *= &ten;
                let (q, r) = rem.div_rem(&denom);
                out.push_str(&q.to_string());
                rem = r;
            }
        }
        out
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }
}

impl From<u32> for Rational {
    fn from(v: u32) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q`, with an optional leading `-` or `−` (U+2212).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (negative, body) = if let Some(rest) = t.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = t.strip_prefix('\u{2212}') {
            (true, rest)
        } else {
            (false, t)
        };
        let parse_nat = |part: &str| -> Result<BigInt> {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("not a rational number: {s:?}")));
            }
            part.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
        };
        let (numer, denom) = match body.split_once('/') {
            Some((p, q)) => (parse_nat(p)?, parse_nat(q)?),
            None => (parse_nat(body)?, BigInt::one()),
        };
        let numer = if negative { -numer } else { numer };
        Rational::from_bigints(numer, denom)
            .map_err(|_| Error::Parse(format!("zero denominator in {s:?}")))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // Integers are accepted as bare JSON numbers too.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Rational::from(i)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<i64> for Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                self.$method(Rational::from(rhs))
            }
        }
        impl<'a> $tr<i64> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                self.$method(Rational::from(rhs))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

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

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `binom(y + k, k)` for a rational `y`, with the piecewise convention used by
/// all the section bounds:
///
/// * `k = 0` gives 1 for every `y`;
/// * `y < 0`, `k >= 1` gives 0;
/// * `y >= 0`, `k >= 1` gives `(y+1)(y+2)...(y+k) / k!`.
///
/// For integer `y >= 0` this is the ordinary `C(y + k, k)`.
pub fn genbinom(y: &Rational, k: u32) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    if y.is_negative() {
        return Rational::zero();
    }
    let numer: Rational = (1..=k).map(|i| y + i64::from(i)).product();
    numer / Rational::from(factorial(k))
}

/// Checks the falling-sum identity
///
/// `sum_{i=a..m} binom(x-i, k) = binom(x-a+1, k+1) - binom(x-m, k+1)`
///
/// with both sides evaluated through [`genbinom`] (`binom(t, j)` is
/// `genbinom(t - j, j)`). Requires `1 <= a <= m`, `k >= 1` and `x - m - k >= 0`.
pub fn falling_sum_check(x: &Rational, a: u32, m: u32, k: u32) -> Result<bool> {
    if a == 0 || k == 0 {
        return Err(Error::InvalidInput(
            "a, m and k must be positive integers".into(),
        ));
    }
    if a > m {
        return Err(Error::InvalidInput(format!(
            "need a <= m, got a={a}, m={m}"
        )));
    }
    if (x - i64::from(m) - i64::from(k)).is_negative() {
        return Err(Error::InvalidInput(format!(
            "need x - m - k >= 0, got x={x}, m={m}, k={k}"
        )));
    }
    let k_i = i64::from(k);
    let lhs: Rational = (a..=m)
        .map(|i| genbinom(&(x - i64::from(i) - k_i), k))
        .sum();
    let upper = genbinom(&(x - i64::from(a) + 1 - (k_i + 1)), k + 1);
    let lower = genbinom(&(x - i64::from(m) - (k_i + 1)), k + 1);
    Ok(lhs == upper - lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(8, 4).to_string(), "2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("7"), Rational::from(7));
        assert_eq!(q("-7/14"), Rational::new(-1, 2));
        assert_eq!(q("\u{2212}3/9"), Rational::new(-1, 3));
        assert_eq!(q(" 4/2 "), Rational::from(2));
        for bad in ["", "1/0", "a", "1/2/3", "--1", "1.5", "/3", "+2"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn serde_as_string() {
        let r = Rational::new(-5, 3);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-5/3\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let from_int: Rational = serde_json::from_str("12").unwrap();
        assert_eq!(from_int, Rational::from(12));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rational::new(1, 3).to_decimal(4), "0.3333");
        assert_eq!(Rational::new(-7, 4).to_decimal(3), "-1.750");
        assert_eq!(Rational::from(21).to_decimal(0), "21");
    }

    #[test]
    fn genbinom_examples() {
        assert_eq!(genbinom(&Rational::from(3), 2), Rational::from(10));
        assert_eq!(genbinom(&Rational::new(-1, 2), 3), Rational::zero());
        assert_eq!(genbinom(&Rational::new(5, 2), 0), Rational::one());
        assert_eq!(genbinom(&Rational::new(1, 2), 2), Rational::new(15, 8));
    }

    #[test]
    fn genbinom_edge_cases() {
        // k = 0 wins over a negative argument.
        assert_eq!(genbinom(&Rational::from(-9), 0), Rational::one());
        // y = 0 sits in the nonnegative branch.
        assert_eq!(genbinom(&Rational::zero(), 5), Rational::one());
        assert_eq!(genbinom(&Rational::new(-1, 1000), 1), Rational::zero());
    }

    #[test]
    fn genbinom_matches_integer_binomial() {
        for y in 0..20i64 {
            for k in 0..8u32 {
                let n = y as u64 + k as u64;
                let mut c = 1u64;
                for i in 0..k as u64 {
                    c = c * (n - i) / (i + 1);
                }
                assert_eq!(genbinom(&Rational::from(y), k), Rational::from(c as i64));
            }
        }
    }

    #[test]
    fn falling_sum_examples() {
        assert!(falling_sum_check(&Rational::from(10), 1, 4, 2).unwrap());
        assert!(falling_sum_check(&Rational::new(17, 2), 2, 3, 1).unwrap());
        assert!(falling_sum_check(&Rational::from(5), 3, 3, 1).unwrap());
    }

    #[test]
    fn falling_sum_rejects_bad_input() {
        assert!(falling_sum_check(&Rational::from(10), 3, 2, 1).is_err());
        assert!(falling_sum_check(&Rational::from(10), 0, 2, 1).is_err());
        assert!(falling_sum_check(&Rational::from(3), 1, 3, 1).is_err());
    }

    #[test]
    fn falling_sum_breaks_when_lower_argument_is_fractional_below_one() {
        // x - m - k = 1/2: binom(x-m, k+1) has genbinom argument -1/2 and is
        // clamped to 0, while the left side keeps its nonzero contribution.
        assert!(!falling_sum_check(&Rational::new(9, 2), 3, 3, 1).unwrap());
    }
}
