//! Exact rational numbers used for profile weights and costs.
//!
//! [`Rational`] wraps an arbitrary-precision fraction kept in lowest terms
//! with a positive denominator. Every operation is exact; conversion to `f64`
//! only happens at reporting boundaries.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`, reducing to lowest terms.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidWeight("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidWeight("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
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

    /// Always positive.
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

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract_part(&self) -> Rational {
        Rational(&self.0 - self.0.floor())
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::OutOfRange("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Best rational approximation with denominator at most `max_denom`
    /// (continued-fraction convergents and semiconvergents).
    pub fn approximate(x: f64, max_denom: u64) -> Result<Rational> {
        if !x.is_finite() {
            return Err(Error::OutOfRange(format!("cannot approximate {x}")));
        }
        let negative = x < 0.0;
        let mut v = x.abs();
        let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
        let max = max_denom.max(1) as u128;
        for _ in 0..64 {
            let a = v.floor();
            if a > 1e18 {
                break;
            }
            let a_int = a as u128;
            let q2 = a_int * q1 + q0;
            if q2 > max {
                // Largest admissible semiconvergent.
                let k = (max - q0) / q1.max(1);
                let (ps, qs) = (k * p1 + p0, k * q1 + q0);
                let candidate = (ps as f64 / qs as f64 - x.abs()).abs();
                let current = (p1 as f64 / q1.max(1) as f64 - x.abs()).abs();
                if qs > 0 && candidate < current {
                    p1 = ps;
                    q1 = qs;
                }
                break;
            }
            let p2 = a_int * p1 + p0;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            let frac = v - a;
            if frac < 1e-15 {
                break;
            }
            v = 1.0 / frac;
        }
        if q1 == 0 {
            return Err(Error::OutOfRange(format!("cannot approximate {x}")));
        }
        let numer = BigInt::from(p1);
        let numer = if negative { -numer } else { numer };
        Rational::from_bigints(numer, BigInt::from(q1))
    }

    /// Numerator and denominator as `u64` when the value is nonnegative and
    /// both fit.
    pub fn to_u64_parts(&self) -> Option<(u64, u64)> {
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }

    pub fn denom_biguint(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }
}

/// The set of integers closest to `z`: one integer, or both neighbours when
/// the fractional part is exactly one half.
pub fn round_set(z: &Rational) -> BTreeSet<BigInt> {
    let floor = z.floor();
    let frac = z.fract_part();
    let half = Rational::new(1, 2).expect("nonzero");
    let mut out = BTreeSet::new();
    match frac.cmp(&half) {
        Ordering::Less => {
            out.insert(floor);
        }
        Ordering::Equal => {
            out.insert(floor.clone());
            out.insert(floor + 1);
        }
        Ordering::Greater => {
            out.insert(floor + 1);
        }
    }
    out
}

/// [`round_set`] for nonnegative arguments, as machine integers.
pub fn round_set_u64(z: &Rational) -> Result<BTreeSet<u64>> {
    if z.is_negative() {
        return Err(Error::OutOfRange(format!("round_set expects z >= 0, got {z}")));
    }
    round_set(z)
        .into_iter()
        .map(|k| {
            k.to_u64()
                .ok_or_else(|| Error::OutOfRange(format!("{k} does not fit in u64")))
        })
        .collect()
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
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

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"` or a plain integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidWeight(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::from_bigints(n, d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

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

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Least common multiple of the denominators.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn lowest_terms_and_sign() {
        assert_eq!(r(21, 120), r(7, 40));
        assert_eq!(r(3, -6).to_string(), "-1/2");
        assert!(r(1, 2).denom() > &BigInt::zero());
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("21/120".parse::<Rational>().unwrap(), r(7, 40));
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::from_integer(3));
        assert_eq!(r(6, 3).to_string(), "2");
        assert!("a/b".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn round_set_cases() {
        let ints = |z: Rational| -> Vec<u64> { round_set_u64(&z).unwrap().into_iter().collect() };
        assert_eq!(ints(Rational::from_integer(3)), vec![3]);
        assert_eq!(ints(r(5, 2)), vec![2, 3]);
        assert_eq!(ints(&r(3, 10) * &Rational::from_integer(10)), vec![3]);
        assert_eq!(ints(r(1, 100)), vec![0]);
        assert_eq!(ints(r(51, 100)), vec![1]);
        assert_eq!(ints(r(49, 100)), vec![0]);
        assert!(round_set_u64(&r(-1, 2)).is_err());
    }

    #[test]
    fn approximate_recovers_small_fractions() {
        assert_eq!(Rational::approximate(231.0 / 1318.0, 1_000_000).unwrap(), r(231, 1318));
        assert_eq!(Rational::approximate(0.175, 1_000_000).unwrap(), r(7, 40));
        assert_eq!(Rational::approximate(-0.5, 10).unwrap(), r(-1, 2));
        assert_eq!(Rational::approximate(3.0, 10).unwrap(), Rational::from_integer(3));
        let pi = Rational::approximate(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, r(355, 113));
    }

    #[test]
    fn serde_as_string() {
        let json = serde_json::to_string(&r(7, 40)).unwrap();
        assert_eq!(json, "\"7/40\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r(7, 40));
    }

    #[test]
    fn to_f64_large_parts() {
        let big = Rational::from_bigints(BigInt::from(10).pow(400), BigInt::from(10).pow(399) * 4).unwrap();
        assert!((big.to_f64() - 2.5).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn add_sub_roundtrip(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
                let x = r(a, b);
                let y = r(c, d);
                prop_assert_eq!(&(&x + &y) - &y, x.clone());
                prop_assert_eq!(&(&x * &y) + &x, &x * &(&y + &Rational::one()));
            }
        }
    }
}
