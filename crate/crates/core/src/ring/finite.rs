//! Table-backed finite rings: Z/m for m <= 125 and F_q for q <= 25.
//!
//! Elements are indices into precomputed operation tables, which keeps the
//! exhaustive searches in the moduli module cheap. F_q is represented as
//! F_p[w]/(minpoly) with the canonical minimal polynomial from
//! [`crate::arith::smallest_irreducible`]; an element index encodes its
//! coordinate vector in base p, lowest power of w first.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{is_prime, smallest_irreducible};
use crate::error::{Error, Result};
use crate::ring::Ring;

pub const MAX_ZMOD: u64 = 125;
pub const MAX_GF: u64 = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallRingKind {
    /// Z/m.
    Zmod { m: u64 },
    /// F_{p^f} as F_p[w]/(minpoly), minpoly stored without its leading 1.
    Gf { p: u64, f: usize, minpoly: Vec<u64> },
}

#[derive(Clone)]
pub struct SmallRing(Arc<Inner>);

struct Inner {
    kind: SmallRingKind,
    size: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<Option<u32>>,
}

impl PartialEq for SmallRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind == other.0.kind
    }
}

impl fmt::Debug for SmallRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallRing({})", self.name())
    }
}

impl SmallRing {
    pub fn zmod(m: u64) -> Result<Self> {
        if m < 2 || m > MAX_ZMOD {
            return Err(Error::Invalid(format!("modulus {m} out of range 2..=125")));
        }
        let size = m as u32;
        let add = |a: u32, b: u32| (a + b) % size;
        let mul = |a: u32, b: u32| ((a as u64 * b as u64) % m) as u32;
        Ok(Self::build(SmallRingKind::Zmod { m }, size, add, mul))
    }

    /// F_q with the canonical minimal polynomial for q = p^f.
    pub fn gf(q: u64) -> Result<Self> {
        if q < 2 || q > MAX_GF {
            return Err(Error::Invalid(format!("field size {q} out of range 2..=25")));
        }
        let (p, f) = factor_prime_power(q)?;
        let minpoly = smallest_irreducible(p, f)?;
        Self::gf_with_minpoly(p, &minpoly)
    }

    /// F_{p^f} presented by an explicit monic irreducible (no leading 1).
    /// Used when the field must match the residue field of a local ring.
    pub fn gf_with_minpoly(p: u64, minpoly: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let f = minpoly.len();
        let q = p.checked_pow(f as u32).filter(|&q| q <= MAX_GF).ok_or_else(|| {
            Error::Invalid(format!("field size p^{f} exceeds {MAX_GF}"))
        })?;
        let minpoly: Vec<u64> = minpoly.iter().map(|c| c % p).collect();
        let size = q as u32;
        let decode = |i: u32| -> Vec<u64> {
            let mut coords = vec![0u64; f];
            let mut n = i as u64;
            for c in coords.iter_mut() {
                *c = n % p;
                n /= p;
            }
            coords
        };
        let encode = |coords: &[u64]| -> u32 {
            let mut n = 0u64;
            for &c in coords.iter().rev() {
                n = n * p + c % p;
            }
            n as u32
        };
        let mp = minpoly.clone();
        let add = move |a: u32, b: u32| {
            let (x, y) = (decode(a), decode(b));
            let sum: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
            encode(&sum)
        };
        let mul = move |a: u32, b: u32| {
            let (x, y) = (decode(a), decode(b));
            let mut prod = vec![0u64; 2 * f - 1];
            for (i, &u) in x.iter().enumerate() {
                for (j, &v) in y.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            // Reduce w^k = -minpoly truncation, from the top down.
            for k in (f..2 * f - 1).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, &m) in mp.iter().enumerate() {
                    prod[k - f + i] = (prod[k - f + i] + (p - m % p) * c) % p;
                }
            }
            prod.truncate(f);
            encode(&prod)
        };
        Ok(Self::build(
            SmallRingKind::Gf { p, f, minpoly },
            size,
            add,
            mul,
        ))
    }

    fn build(
        kind: SmallRingKind,
        size: u32,
        add: impl Fn(u32, u32) -> u32,
        mul: impl Fn(u32, u32) -> u32,
    ) -> Self {
        let n = size as usize;
        let mut add_t = vec![0u32; n * n];
        let mut mul_t = vec![0u32; n * n];
        for a in 0..size {
            for b in 0..size {
                add_t[(a * size + b) as usize] = add(a, b);
                mul_t[(a * size + b) as usize] = mul(a, b);
            }
        }
        let mut neg_t = vec![0u32; n];
        for a in 0..size {
            neg_t[a as usize] = (0..size)
                .find(|&b| add_t[(a * size + b) as usize] == 0)
                .expect("additive inverse exists");
        }
        let mut inv_t = vec![None; n];
        for a in 0..size {
            inv_t[a as usize] = (0..size).find(|&b| mul_t[(a * size + b) as usize] == 1);
        }
        SmallRing(Arc::new(Inner {
            kind,
            size,
            add: add_t,
            mul: mul_t,
            neg: neg_t,
            inv: inv_t,
        }))
    }

    pub fn kind(&self) -> &SmallRingKind {
        &self.0.kind
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    /// All elements, in index order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.size
    }

    /// All units, in index order.
    pub fn units(&self) -> Vec<u32> {
        (0..self.0.size)
            .filter(|&a| self.0.inv[a as usize].is_some())
            .collect()
    }

    pub fn characteristic_p(&self) -> Option<u64> {
        match &self.0.kind {
            SmallRingKind::Gf { p, .. } => Some(*p),
            SmallRingKind::Zmod { m } => is_prime(*m).then_some(*m),
        }
    }

    /// Coordinates of a Gf element (length f), or the residue for Zmod.
    pub fn coords(&self, a: u32) -> Vec<u64> {
        match &self.0.kind {
            SmallRingKind::Zmod { .. } => vec![a as u64],
            SmallRingKind::Gf { p, f, .. } => {
                let mut coords = vec![0u64; *f];
                let mut n = a as u64;
                for c in coords.iter_mut() {
                    *c = n % p;
                    n /= p;
                }
                coords
            }
        }
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<u32> {
        match &self.0.kind {
            SmallRingKind::Zmod { m } => {
                let c = *coords.first().ok_or(Error::Invalid("empty coords".into()))?;
                Ok((c % m) as u32)
            }
            SmallRingKind::Gf { p, f, .. } => {
                if coords.len() > *f {
                    return Err(Error::Invalid(format!(
                        "{} coordinates for a degree {f} extension",
                        coords.len()
                    )));
                }
                let mut n = 0u64;
                for &c in coords.iter().rev() {
                    n = n * p + c % p;
                }
                Ok(n as u32)
            }
        }
    }
}

fn factor_prime_power(q: u64) -> Result<(u64, usize)> {
    for p in 2..=q {
        if q % p == 0 {
            if !is_prime(p) {
                return Err(Error::NonPrime(q));
            }
            let mut f = 0usize;
            let mut n = q;
            while n % p == 0 {
                n /= p;
                f += 1;
            }
            if n != 1 {
                return Err(Error::Invalid(format!("{q} is not a prime power")));
            }
            return Ok((p, f));
        }
    }
    Err(Error::Invalid(format!("{q} is not a prime power")))
}

impl Ring for SmallRing {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_bigint(&self, n: &BigInt) -> u32 {
        let m = match &self.0.kind {
            SmallRingKind::Zmod { m } => *m,
            SmallRingKind::Gf { p, .. } => *p,
        };
        n.mod_floor(&BigInt::from(m)).to_u32().unwrap()
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.0.add[(a * self.0.size + b) as usize]
    }
    fn neg(&self, a: &u32) -> u32 {
        self.0.neg[*a as usize]
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.0.mul[(a * self.0.size + b) as usize]
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u32) -> bool {
        self.0.inv[*a as usize].is_some()
    }
    fn inv(&self, a: &u32) -> Result<u32> {
        self.0.inv[*a as usize].ok_or(Error::NotAUnit)
    }
    fn fmt_elem(&self, a: &u32) -> String {
        match &self.0.kind {
            SmallRingKind::Zmod { .. } => a.to_string(),
            SmallRingKind::Gf { f, .. } if *f == 1 => a.to_string(),
            SmallRingKind::Gf { .. } => {
                let coords: Vec<String> =
                    self.coords(*a).iter().map(|c| c.to_string()).collect();
                format!("[{}]", coords.join(","))
            }
        }
    }
    fn name(&self) -> String {
        match &self.0.kind {
            SmallRingKind::Zmod { m } => format!("Z/{m}"),
            SmallRingKind::Gf { p, f, .. } => format!("F_{}", p.pow(*f as u32)),
        }
    }
    fn parse_elem(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let coords: Vec<u64> = body
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad coordinate in {s:?}")))
                })
                .collect::<Result<_>>()?;
            return self.from_coords(&coords);
        }
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::Invalid(format!("bad element literal {s:?}")))?;
        Ok(self.from_bigint(&n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_ring_axioms(r: &SmallRing) {
        for a in r.elements() {
            assert_eq!(r.add(&a, &r.neg(&a)), 0);
            assert_eq!(r.mul(&a, &1), a);
            for b in r.elements() {
                assert_eq!(r.add(&a, &b), r.add(&b, &a));
                assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
                for c in r.elements() {
                    assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
                    assert_eq!(
                        r.mul(&a, &r.add(&b, &c)),
                        r.add(&r.mul(&a, &b), &r.mul(&a, &c))
                    );
                }
            }
        }
    }

    #[test]
    fn zmod_axioms_and_units() {
        let r = SmallRing::zmod(8).unwrap();
        check_ring_axioms(&r);
        assert_eq!(r.units(), vec![1, 3, 5, 7]);
    }

    #[test]
    fn gf4_is_a_field() {
        let r = SmallRing::gf(4).unwrap();
        check_ring_axioms(&r);
        assert_eq!(r.units().len(), 3);
        // w^2 = w + 1 under the canonical minpoly x^2 + x + 1.
        assert_eq!(r.kind(), &SmallRingKind::Gf { p: 2, f: 2, minpoly: vec![1, 1] });
        let w = r.from_coords(&[0, 1]).unwrap();
        assert_eq!(r.mul(&w, &w), r.from_coords(&[1, 1]).unwrap());
    }

    #[test]
    fn gf25_multiplicative_order() {
        let r = SmallRing::gf(25).unwrap();
        check_ring_axioms(&r);
        for a in r.units() {
            let mut x = a;
            let mut ord = 1;
            while x != 1 {
                x = r.mul(&x, &a);
                ord += 1;
            }
            assert_eq!(24 % ord, 0);
        }
    }

    #[test]
    fn element_literals_roundtrip() {
        let r = SmallRing::gf(9).unwrap();
        for a in r.elements() {
            let s = r.fmt_elem(&a);
            assert_eq!(r.parse_elem(&s).unwrap(), a);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SmallRing::zmod(126).is_err());
        assert!(SmallRing::gf(27).is_err());
        assert!(SmallRing::gf(6).is_err());
    }
}
