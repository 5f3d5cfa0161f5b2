//! Exact dyadic rationals `numerator / 2^exponent`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A non-negative dyadic rational kept in canonical form: the numerator is odd
/// or the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigUint,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: impl Into<BigUint>, exponent: u64) -> Self {
        let mut numerator = numerator.into();
        let mut exponent = exponent;
        if numerator.is_zero() {
            exponent = 0;
        } else {
            let twos = numerator.trailing_zeros().unwrap_or(0).min(exponent);
            numerator >>= twos;
            exponent -= twos;
        }
        DyadicRational {
            numerator,
            exponent,
        }
    }

    pub fn zero() -> Self {
        DyadicRational::new(0u32, 0)
    }

    pub fn one() -> Self {
        DyadicRational::new(1u32, 0)
    }

    /// `2^-exponent`.
    pub fn unit(exponent: u64) -> Self {
        DyadicRational::new(1u32, exponent)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Multiplies by `2^shift` (shift may be negative).
    pub fn mul_pow2(&self, shift: i64) -> Self {
        if shift >= 0 {
            let s = shift as u64;
            if s <= self.exponent {
                DyadicRational::new(self.numerator.clone(), self.exponent - s)
            } else {
                DyadicRational::new(&self.numerator << (s - self.exponent), 0)
            }
        } else {
            DyadicRational::new(self.numerator.clone(), self.exponent + shift.unsigned_abs())
        }
    }

    /// Numerators of `self` and `other` over the common denominator `2^e`.
    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u64) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
            e,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let (a, b, e) = self.aligned(other);
        if a < b {
            None
        } else {
            Some(DyadicRational::new(a - b, e))
        }
    }

    /// Residue of `numerator * (2^exponent)^-1` in `Z/p` for odd `p`.
    pub fn residue(&self, p: u64) -> Result<u64> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::InvalidModulus(p));
        }
        let num = (&self.numerator % BigUint::from(p)).to_u64().unwrap_or(0);
        let inv2 = (p + 1) / 2;
        let scale = BigUint::from(inv2)
            .modpow(&BigUint::from(self.exponent), &BigUint::from(p))
            .to_u64()
            .unwrap_or(0);
        Ok(mul_mod(num, scale, p))
    }

    /// True when `[self, self + 2^-k)` is a standard dyadic interval with `k = length_exp`.
    pub fn is_aligned_to(&self, length_exp: u64) -> bool {
        self.exponent <= length_exp
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let (a, b, e) = self.aligned(rhs);
        DyadicRational::new(a + b, e)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: DyadicRational) -> DyadicRational {
        &self + &rhs
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigUint::one() << self.exponent)
        }
    }
}

impl std::str::FromStr for DyadicRational {
    type Err = Error;

    /// Accepts `a`, `a/b` with `b` a power of two.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigUint = num
            .parse()
            .map_err(|_| Error::parse(0, format!("bad numerator in {s:?}")))?;
        let den: BigUint = den
            .parse()
            .map_err(|_| Error::parse(0, format!("bad denominator in {s:?}")))?;
        if den.is_zero() || !(&den & (&den - 1u32)).is_zero() {
            return Err(Error::parse(0, format!("{s:?} is not dyadic")));
        }
        let exponent = den.trailing_zeros().unwrap_or(0);
        Ok(DyadicRational::new(num, exponent))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DyadicRational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(DyadicRational::new(4u32, 4), d("1/4"));
        assert_eq!(DyadicRational::new(0u32, 9), DyadicRational::zero());
        assert_eq!(d("8/8"), DyadicRational::one());
        assert_eq!(d("6/16").numerator(), &BigUint::from(3u32));
        assert_eq!(d("6/16").exponent(), 3);
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(d("1/4") + d("1/8"), d("3/8"));
        assert_eq!(d("3/4").checked_sub(&d("1/2")), Some(d("1/4")));
        assert_eq!(d("1/4").checked_sub(&d("1/2")), None);
        assert!(d("5/16") < d("3/8"));
        assert_eq!(d("3/8").mul_pow2(2), d("3/2"));
        assert_eq!(d("3").mul_pow2(-3), d("3/8"));
    }

    #[test]
    fn residues() {
        // 5/16 = 5 * 16^-1; 16 = 1 mod 3.
        assert_eq!(d("5/16").residue(3).unwrap(), 2);
        assert_eq!(d("21/64").residue(7).unwrap(), 0);
        assert_eq!(d("1/2").residue(3).unwrap(), 2);
        assert_eq!(d("1/2").residue(4), Err(Error::InvalidModulus(4)));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "1", "1/2", "57/64", "3/8"] {
            assert_eq!(d(s).to_string(), s);
        }
        assert!("1/3".parse::<DyadicRational>().is_err());
    }
}
