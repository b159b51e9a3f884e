//! Coefficient rings for truncated series.
//!
//! A `Ring` is a cheap-to-clone handle; elements are plain data that only
//! make sense relative to their handle. Equality of handles is structural,
//! so two independently built handles for the same ring interoperate.

mod finite;

pub use finite::{SmallRing, SmallRingKind};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// True when the element is indistinguishable from zero. For exact rings
    /// this is literal equality; rings with precision tracking answer
    /// "zero to the element's guaranteed precision".
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }
    /// Parses what `fmt_elem` printed. Rings whose elements have no compact
    /// literal form may decline.
    fn parse_elem(&self, _s: &str) -> Result<Self::Elem> {
        Err(Error::Invalid(format!(
            "no literal element syntax for {}",
            self.name()
        )))
    }
    /// True when `is_zero` means literal equality with zero. Precision-
    /// tracking rings return false; containers then keep zero-to-precision
    /// entries instead of pruning them.
    fn is_exact(&self) -> bool {
        true
    }
}

/// The integers, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn inv(&self, a: &BigInt) -> Result<BigInt> {
        if self.is_unit(a) {
            Ok(a.clone())
        } else {
            Err(Error::NotAUnit)
        }
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "Z".into()
    }
    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        s.parse()
            .map_err(|_| Error::Invalid(format!("bad integer literal {s:?}")))
    }
}

/// The rationals, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRing;

impl Ring for RationalRing {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::NotAUnit)
        } else {
            Ok(a.recip())
        }
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "Q".into()
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse()
                .map_err(|_| Error::Invalid(format!("bad rational literal {s:?}")))
        };
        match s.split_once('/') {
            Some((num, den)) => {
                let den = parse_int(den)?;
                if den.is_zero() {
                    return Err(Error::Invalid(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(parse_int(num)?, den))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }
}

/// p-adic valuation of a rational, or `None` for zero.
pub fn rational_p_ord(a: &BigRational, p: u64) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut ord = 0i64;
    let mut n = a.numer().clone();
    while (&n % &p).is_zero() {
        n /= &p;
        ord += 1;
    }
    let mut d = a.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        ord -= 1;
    }
    Some(ord)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_units() {
        let z = IntegerRing;
        assert!(z.is_unit(&BigInt::from(-1)));
        assert!(!z.is_unit(&BigInt::from(2)));
        assert_eq!(z.inv(&BigInt::from(2)), Err(Error::NotAUnit));
    }

    #[test]
    fn rational_parse_roundtrip() {
        let q = RationalRing;
        for s in ["3", "-7/4", "0"] {
            let e = q.parse_elem(s).unwrap();
            assert_eq!(q.fmt_elem(&e), s);
        }
    }

    #[test]
    fn p_ord_of_rationals() {
        let q = RationalRing;
        let x = q.parse_elem("50/3").unwrap();
        assert_eq!(rational_p_ord(&x, 5), Some(2));
        let y = q.parse_elem("3/125").unwrap();
        assert_eq!(rational_p_ord(&y, 5), Some(-3));
        assert_eq!(rational_p_ord(&q.zero(), 5), None);
    }
}
