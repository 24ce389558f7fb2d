use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BitString;
use crate::error::Error;

/// An exact dyadic rational `numerator · 2^-exponent`.
///
/// Always canonical: the numerator is odd, or it is zero and the exponent
/// is zero. Field equality therefore coincides with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, exponent: u64) -> Self {
        let mut d = Self {
            numerator: numerator.into(),
            exponent,
        };
        d.normalize();
        d
    }

    /// Builds from a possibly negative exponent: `numerator · 2^-exponent`.
    pub fn with_signed_exponent(numerator: impl Into<BigInt>, exponent: i64) -> Self {
        let numerator = numerator.into();
        if exponent >= 0 {
            Self::new(numerator, exponent as u64)
        } else {
            Self::new(numerator << exponent.unsigned_abs(), 0)
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u64) -> Self {
        Self {
            numerator: BigInt::one(),
            exponent: k,
        }
    }

    /// `0.τ`, the left endpoint of the cylinder interval of `τ`.
    pub fn from_bits(tau: &BitString) -> Self {
        let mut num = BigUint::zero();
        for &b in tau.bits() {
            num <<= 1u32;
            if b {
                num += 1u32;
            }
        }
        Self::new(BigInt::from(num), tau.len() as u64)
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent);
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    /// Numerator rescaled to exponent `e >= self.exponent`.
    fn scaled_to(&self, e: u64) -> BigInt {
        debug_assert!(e >= self.exponent);
        &self.numerator << (e - self.exponent)
    }

    /// Multiply by `2^k` (`k` may be negative).
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exponent {
                Self::new(self.numerator.clone(), self.exponent - k)
            } else {
                Self::new(&self.numerator << (k - self.exponent), 0)
            }
        } else {
            Self::new(self.numerator.clone(), self.exponent + k.unsigned_abs())
        }
    }

    /// `⌊self · 2^r⌋` for non-negative `self`.
    pub fn floor_scale(&self, r: u64) -> BigUint {
        assert!(
            !self.is_negative(),
            "floor_scale requires a non-negative value"
        );
        let num = self.numerator.magnitude();
        if r >= self.exponent {
            num << (r - self.exponent)
        } else {
            num >> (self.exponent - r)
        }
    }

    /// The first `n` binary digits after the point, using the expansion
    /// with trailing zeros. Values outside `[0, 1)` saturate: negatives to
    /// `0^n`, values `>= 1` to `1^n`.
    pub fn prefix_bits(&self, n: usize) -> BitString {
        if self.is_negative() {
            return BitString::zeros(n);
        }
        if *self >= Self::one() {
            return BitString::ones(n);
        }
        let scaled = self.floor_scale(n as u64);
        (0..n).rev().map(|i| scaled.bit(i as u64)).collect()
    }

    /// Positions `j` (0-based after the point) with binary digit 1, in
    /// increasing order. Requires `0 <= self < 1`.
    pub fn one_positions(&self) -> Vec<u64> {
        assert!(
            !self.is_negative() && *self < Self::one(),
            "value must lie in [0, 1)"
        );
        let num = self.numerator.magnitude();
        let e = self.exponent;
        (0..e).filter(|&j| num.bit(e - 1 - j)).collect()
    }

    /// Exact value as an `f64` approximation, for display only.
    pub fn approx(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        n * (-(self.exponent as f64)).exp2()
    }

    pub fn abs(&self) -> Self {
        Self {
            numerator: self.numerator.abs(),
            exponent: self.exponent,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.numerator * &other.numerator,
            self.exponent + other.exponent,
        )
    }

    /// Multiply by a natural number.
    pub fn scale(&self, k: u64) -> Self {
        Self::new(&self.numerator * BigInt::from(k), self.exponent)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.exponent == other.exponent {
            return self.numerator.cmp(&other.numerator);
        }
        let sign_order = self.numerator.sign().cmp(&other.numerator.sign());
        if sign_order != Ordering::Equal {
            return sign_order;
        }
        let e = self.exponent.max(other.exponent);
        self.scaled_to(e).cmp(&other.scaled_to(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_to(e) + rhs.scaled_to(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_to(e) - rhs.scaled_to(e), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator,
            exponent: self.exponent,
        }
    }
}

impl<'a> std::iter::Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, d| &acc + d)
    }
}

impl std::iter::Sum<Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, d| &acc + &d)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct DyadicRepr {
    num: String,
    exp: u64,
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DyadicRepr {
            num: self.numerator.to_string(),
            exp: self.exponent,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DyadicRepr::deserialize(deserializer)?;
        let num: BigInt = repr.num.parse().map_err(serde::de::Error::custom)?;
        Ok(Dyadic::new(num, repr.exp))
    }
}

impl std::str::FromStr for Dyadic {
    type Err = Error;

    /// Accepts `a`, `a/2^e`, or `a/d` where `d` is a power of two.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidInput(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Dyadic::new(s.parse::<BigInt>().map_err(|_| bad())?, 0)),
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den = den.trim();
                let exp = if let Some(e) = den.strip_prefix("2^") {
                    e.parse::<u64>().map_err(|_| bad())?
                } else {
                    let d: u64 = den.parse().map_err(|_| bad())?;
                    if d == 0 || !d.is_power_of_two() {
                        return Err(bad());
                    }
                    u64::from(d.trailing_zeros())
                };
                Ok(Dyadic::new(num, exp))
            }
        }
    }
}

impl From<u64> for Dyadic {
    fn from(v: u64) -> Self {
        Dyadic::new(v, 0)
    }
}
