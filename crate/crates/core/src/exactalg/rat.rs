//! Exact rational coefficients.
//!
//! Values that are integers fitting in an `i64` are kept inline; everything
//! else lives in a boxed `Ratio<BigInt>`. The representation is canonical, so
//! derived equality and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BigRat {
    Small(i64),
    Big(Box<BigRational>),
}

impl BigRat {
    pub const ZERO: BigRat = BigRat::Small(0);
    pub const ONE: BigRat = BigRat::Small(1);

    pub fn from_ratio(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return BigRat::Small(v);
            }
        }
        BigRat::Big(Box::new(r))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        match n.to_i64() {
            Some(v) => BigRat::Small(v),
            None => BigRat::Big(Box::new(BigRational::from_integer(n))),
        }
    }

    /// `num/den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        if den == 1 {
            return BigRat::Small(num);
        }
        Self::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_ratio(&self) -> BigRational {
        match self {
            BigRat::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            BigRat::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BigRat::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, BigRat::Small(1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            BigRat::Small(_) => true,
            BigRat::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            BigRat::Small(v) => *v < 0,
            BigRat::Big(r) => r.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            BigRat::Small(v) => BigInt::from(*v),
            BigRat::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            BigRat::Small(_) => BigInt::one(),
            BigRat::Big(r) => r.denom().clone(),
        }
    }

    /// The value as an integer, if it is one.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            BigRat::Small(v) => Some(BigInt::from(*v)),
            BigRat::Big(r) if r.is_integer() => Some(r.numer().clone()),
            BigRat::Big(_) => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            BigRat::Small(v) => Some(*v),
            BigRat::Big(_) => None,
        }
    }

    pub fn abs(&self) -> BigRat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> BigRat {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            BigRat::Small(1) => BigRat::ONE,
            BigRat::Small(-1) => BigRat::Small(-1),
            _ => Self::from_ratio(self.to_ratio().recip()),
        }
    }

    pub fn pow(&self, e: i32) -> BigRat {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = BigRat::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self += a * b`, the hot path of polynomial multiplication.
    pub fn add_mul(&mut self, a: &BigRat, b: &BigRat) {
        if let (BigRat::Small(x), BigRat::Small(y), BigRat::Small(z)) = (&*self, a, b) {
            if let Some(v) = y.checked_mul(*z).and_then(|p| x.checked_add(p)) {
                *self = BigRat::Small(v);
                return;
            }
        }
        *self = &*self + &(a * b);
    }
}

impl Default for BigRat {
    fn default() -> Self {
        BigRat::ZERO
    }
}

impl From<i64> for BigRat {
    fn from(v: i64) -> Self {
        BigRat::Small(v)
    }
}

impl From<i32> for BigRat {
    fn from(v: i32) -> Self {
        BigRat::Small(v as i64)
    }
}

impl From<BigInt> for BigRat {
    fn from(v: BigInt) -> Self {
        BigRat::from_bigint(v)
    }
}

impl<'a> Add<&'a BigRat> for &'a BigRat {
    type Output = BigRat;
    fn add(self, rhs: &BigRat) -> BigRat {
        if let (BigRat::Small(a), BigRat::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                return BigRat::Small(v);
            }
        }
        BigRat::from_ratio(self.to_ratio() + rhs.to_ratio())
    }
}

impl<'a> Sub<&'a BigRat> for &'a BigRat {
    type Output = BigRat;
    fn sub(self, rhs: &BigRat) -> BigRat {
        if let (BigRat::Small(a), BigRat::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                return BigRat::Small(v);
            }
        }
        BigRat::from_ratio(self.to_ratio() - rhs.to_ratio())
    }
}

impl<'a> Mul<&'a BigRat> for &'a BigRat {
    type Output = BigRat;
    fn mul(self, rhs: &BigRat) -> BigRat {
        if let (BigRat::Small(a), BigRat::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_mul(*b) {
                return BigRat::Small(v);
            }
        }
        BigRat::from_ratio(self.to_ratio() * rhs.to_ratio())
    }
}

impl<'a> Div<&'a BigRat> for &'a BigRat {
    type Output = BigRat;
    fn div(self, rhs: &BigRat) -> BigRat {
        assert!(!rhs.is_zero(), "division by zero");
        if let (BigRat::Small(a), BigRat::Small(b)) = (self, rhs) {
            if a % b == 0 {
                if let Some(v) = a.checked_div(*b) {
                    return BigRat::Small(v);
                }
            }
        }
        BigRat::from_ratio(self.to_ratio() / rhs.to_ratio())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigRat> for BigRat {
            type Output = BigRat;
            fn $m(self, rhs: BigRat) -> BigRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigRat> for BigRat {
            type Output = BigRat;
            fn $m(self, rhs: &BigRat) -> BigRat {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&BigRat> for BigRat {
    fn add_assign(&mut self, rhs: &BigRat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&BigRat> for BigRat {
    fn sub_assign(&mut self, rhs: &BigRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&BigRat> for BigRat {
    fn mul_assign(&mut self, rhs: &BigRat) {
        *self = &*self * rhs;
    }
}

impl Neg for &BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        match self {
            BigRat::Small(v) => match v.checked_neg() {
                Some(n) => BigRat::Small(n),
                None => BigRat::from_ratio(-self.to_ratio()),
            },
            BigRat::Big(r) => BigRat::from_ratio(-(**r).clone()),
        }
    }
}

impl Neg for BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        -&self
    }
}

impl PartialOrd for BigRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BigRat::Small(a), BigRat::Small(b)) => a.cmp(b),
            _ => self.to_ratio().cmp(&other.to_ratio()),
        }
    }
}

impl fmt::Display for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigRat::Small(v) => write!(f, "{v}"),
            BigRat::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError;

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid rational literal")
    }
}

impl std::error::Error for ParseRatError {}

impl FromStr for BigRat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let parse_int = |t: &str| -> Result<BigInt, ParseRatError> {
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseRatError);
            }
            t.parse::<BigInt>().map_err(|_| ParseRatError)
        };
        let n = parse_int(num)?;
        match den {
            None => Ok(BigRat::from_bigint(n)),
            Some(d) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(ParseRatError);
                }
                Ok(BigRat::from_ratio(BigRational::new(n, d)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_after_overflow_round_trip() {
        let big = BigRat::Small(i64::MAX);
        let sum = &big + &BigRat::ONE;
        assert!(matches!(sum, BigRat::Big(_)));
        let back = &sum - &BigRat::ONE;
        assert_eq!(back, BigRat::Small(i64::MAX));
    }

    #[test]
    fn reduced_fractions() {
        assert_eq!(BigRat::new(2, 4), BigRat::new(1, 2));
        assert_eq!(BigRat::new(4, -2), BigRat::Small(-2));
        assert_eq!(BigRat::new(0, 7), BigRat::ZERO);
        assert_eq!(BigRat::new(1, -2).denom(), BigInt::from(2));
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "-3", "7/2", "-1/3", "123456789012345678901234567890"] {
            let r: BigRat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<BigRat>().is_err());
        assert!("x".parse::<BigRat>().is_err());
    }

    #[test]
    fn add_mul_matches_plain_ops() {
        let mut acc = BigRat::Small(i64::MAX - 1);
        acc.add_mul(&BigRat::Small(3), &BigRat::Small(5));
        let expect = BigRat::from_ratio(
            BigRational::from_integer(BigInt::from(i64::MAX - 1)) + BigRational::from_integer(BigInt::from(15)),
        );
        assert_eq!(acc, expect);
    }
}
