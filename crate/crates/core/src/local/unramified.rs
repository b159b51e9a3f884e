//! W(F_q) at finite precision: the unramified ring Z_p[w]/(minpoly) with
//! elements known mod p^N.
//!
//! The minimal polynomial is always the canonical one produced by
//! [`crate::arith::smallest_irreducible`], with coefficients lifted to
//! {0, ..., p-1}, so two rings built from the same (p, f, N) are identical
//! and serialized data is portable. Elements are coordinate vectors in the
//! basis 1, w, ..., w^{f-1}.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::smallest_irreducible;
use crate::error::{Error, Result};
use crate::ring::SmallRing;

/// An element of W(F_q), or of one of its reductions W(F_q)/p^K. The vector
/// always has length f. Which K the coordinates are reduced at is decided by
/// the operation that produced the element; the ring's own N is the default.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittElem {
    pub coords: Vec<BigInt>,
}

impl WittElem {
    pub fn from_i64_coords(coords: &[i64]) -> Self {
        WittElem {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }
}

#[derive(Clone)]
pub struct UnramifiedRing(Arc<Inner>);

struct Inner {
    p: u64,
    f: usize,
    n: u32,
    p_big: BigInt,
    /// Canonical monic irreducible, lowest degree first, leading 1 omitted.
    minpoly: Vec<BigInt>,
    /// Coordinates of sigma(w^j) mod p^N for j < f, where sigma is the
    /// Frobenius lift fixing Z_p.
    frob_cols: Vec<Vec<BigInt>>,
}

impl PartialEq for UnramifiedRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.f == other.0.f && self.0.n == other.0.n
    }
}

impl fmt::Debug for UnramifiedRing {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "W(F_{}^{}) mod p^{}", self.0.p, self.0.f, self.0.n)
    }
}

impl UnramifiedRing {
    pub fn new(p: u64, f: usize, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("precision must be at least 1".into()));
        }
        let minpoly: Vec<BigInt> = smallest_irreducible(p, f)?
            .into_iter()
            .map(BigInt::from)
            .collect();
        let mut ring = UnramifiedRing(Arc::new(Inner {
            p,
            f,
            n,
            p_big: BigInt::from(p),
            minpoly,
            frob_cols: Vec::new(),
        }));
        let frob_cols = ring.build_frobenius()?;
        Arc::get_mut(&mut ring.0).unwrap().frob_cols = frob_cols;
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn f(&self) -> usize {
        self.0.f
    }
    pub fn precision(&self) -> u32 {
        self.0.n
    }
    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }
    pub fn q(&self) -> BigUint {
        BigUint::from(self.0.p).pow(self.0.f as u32)
    }

    pub fn modulus_at(&self, k: u32) -> BigInt {
        self.0.p_big.pow(k)
    }

    pub fn zero(&self) -> WittElem {
        WittElem {
            coords: vec![BigInt::zero(); self.0.f],
        }
    }

    pub fn one(&self) -> WittElem {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_bigint(&self, n: &BigInt) -> WittElem {
        let mut coords = vec![BigInt::zero(); self.0.f];
        coords[0] = n.mod_floor(&self.modulus_at(self.0.n));
        WittElem { coords }
    }

    /// Interprets a coordinate vector (length <= f) and reduces mod p^N.
    pub fn from_coords(&self, coords: &[BigInt]) -> Result<WittElem> {
        if coords.len() > self.0.f {
            return Err(Error::Invalid(format!(
                "{} coordinates for a rank {} ring",
                coords.len(),
                self.0.f
            )));
        }
        let mut full = coords.to_vec();
        full.resize(self.0.f, BigInt::zero());
        Ok(self.reduce_at(&WittElem { coords: full }, self.0.n))
    }

    pub fn generator(&self) -> WittElem {
        let mut coords = vec![BigInt::zero(); self.0.f];
        if self.0.f > 1 {
            coords[1] = BigInt::one();
        } else {
            // Degree 1: w is the root of the canonical linear polynomial.
            coords[0] = (-&self.0.minpoly[0]).mod_floor(&self.modulus_at(self.0.n));
        }
        WittElem { coords }
    }

    pub fn reduce_at(&self, a: &WittElem, k: u32) -> WittElem {
        let m = self.modulus_at(k);
        WittElem {
            coords: a.coords.iter().map(|c| c.mod_floor(&m)).collect(),
        }
    }

    pub(crate) fn add_at(&self, a: &WittElem, b: &WittElem, k: u32) -> WittElem {
        let m = self.modulus_at(k);
        WittElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| (x + y).mod_floor(&m))
                .collect(),
        }
    }

    pub(crate) fn neg_at(&self, a: &WittElem, k: u32) -> WittElem {
        let m = self.modulus_at(k);
        WittElem {
            coords: a.coords.iter().map(|x| (-x).mod_floor(&m)).collect(),
        }
    }

    pub(crate) fn sub_at(&self, a: &WittElem, b: &WittElem, k: u32) -> WittElem {
        self.add_at(a, &self.neg_at(b, k), k)
    }

    pub(crate) fn mul_at(&self, a: &WittElem, b: &WittElem, k: u32) -> WittElem {
        let f = self.0.f;
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        // w^t = -minpoly_{<f} * w^{t-f}, applied top down.
        for t in (f..2 * f - 1).rev() {
            if prod[t].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[t]);
            for (i, m) in self.0.minpoly.iter().enumerate() {
                prod[t - f + i] -= &c * m;
            }
        }
        prod.truncate(f);
        self.reduce_at(&WittElem { coords: prod }, k)
    }

    pub(crate) fn scale_at(&self, a: &WittElem, s: &BigInt, k: u32) -> WittElem {
        let m = self.modulus_at(k);
        WittElem {
            coords: a.coords.iter().map(|x| (x * s).mod_floor(&m)).collect(),
        }
    }

    pub fn add(&self, a: &WittElem, b: &WittElem) -> WittElem {
        self.add_at(a, b, self.0.n)
    }
    pub fn sub(&self, a: &WittElem, b: &WittElem) -> WittElem {
        self.sub_at(a, b, self.0.n)
    }
    pub fn neg(&self, a: &WittElem) -> WittElem {
        self.neg_at(a, self.0.n)
    }
    pub fn mul(&self, a: &WittElem, b: &WittElem) -> WittElem {
        self.mul_at(a, b, self.0.n)
    }

    pub fn eq(&self, a: &WittElem, b: &WittElem) -> bool {
        self.reduce_at(a, self.0.n) == self.reduce_at(b, self.0.n)
    }

    pub(crate) fn pow_big_at(&self, a: &WittElem, exp: &BigUint, k: u32) -> WittElem {
        let mut acc = self.reduce_at(&self.one(), k);
        let mut base = self.reduce_at(a, k);
        let mut e = exp.clone();
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul_at(&acc, &base, k);
            }
            base = self.mul_at(&base, &base, k);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: &WittElem, exp: u64) -> WittElem {
        self.pow_big_at(a, &BigUint::from(exp), self.0.n)
    }

    /// p-adic valuation, truncated at k: `None` means the element is zero
    /// mod p^k. The valuation of a coordinate vector is the minimum of the
    /// coordinate valuations because the basis reduces to a basis mod p.
    pub(crate) fn vp_at(&self, a: &WittElem, k: u32) -> Option<u32> {
        let mut best: Option<u32> = None;
        for c in &a.coords {
            let mut c = c.mod_floor(&self.modulus_at(k));
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            while (&c % &self.0.p_big).is_zero() {
                c /= &self.0.p_big;
                v += 1;
            }
            best = Some(best.map_or(v, |b| b.min(v)));
            if best == Some(0) {
                break;
            }
        }
        best.filter(|&v| v < k)
    }

    pub fn vp(&self, a: &WittElem) -> Option<u32> {
        self.vp_at(a, self.0.n)
    }

    /// Exact division by p^t; the caller guarantees vp >= t.
    pub(crate) fn div_pow_p_at(&self, a: &WittElem, t: u32, k: u32) -> Result<WittElem> {
        let pt = self.0.p_big.pow(t);
        let mut coords = Vec::with_capacity(self.0.f);
        for c in &a.coords {
            let c = c.mod_floor(&self.modulus_at(k + t));
            let (q, r) = c.div_rem(&pt);
            if !r.is_zero() {
                return Err(Error::NotIntegral(format!("{c} not divisible by p^{t}")));
            }
            coords.push(q);
        }
        Ok(self.reduce_at(&WittElem { coords }, k))
    }

    pub(crate) fn is_unit_at(&self, a: &WittElem) -> bool {
        self.vp_at(a, 1) == Some(0)
    }

    /// Inverse of a unit mod p^k by Newton iteration from the residue field
    /// inverse x^(q-2).
    pub(crate) fn inv_at(&self, a: &WittElem, k: u32) -> Result<WittElem> {
        if !self.is_unit_at(a) {
            return Err(Error::NotAUnit);
        }
        let q = self.q();
        let mut z = self.pow_big_at(a, &(&q - 2u32), 1);
        let mut known = 1u32;
        let two = self.from_bigint(&BigInt::from(2));
        while known < k {
            known = (known * 2).min(k);
            let az = self.mul_at(a, &z, known);
            z = self.mul_at(&z, &self.sub_at(&two, &az, known), known);
        }
        Ok(self.reduce_at(&z, k))
    }

    pub fn inv(&self, a: &WittElem) -> Result<WittElem> {
        self.inv_at(a, self.0.n)
    }

    /// The Teichmueller lift of a residue class: the unique root of x^q = x
    /// congruent to it mod p. One application of x -> x^q gains one digit.
    pub fn teichmuller(&self, residue: &WittElem) -> WittElem {
        let q = self.q();
        let mut x = self.reduce_at(residue, 1);
        for _ in 0..self.0.n {
            x = self.pow_big_at(&x, &q, self.0.n);
        }
        x
    }

    /// The Frobenius lift: the ring automorphism reducing to x -> x^p.
    pub fn frobenius(&self, a: &WittElem) -> WittElem {
        let m = self.modulus_at(self.0.n);
        let mut coords = vec![BigInt::zero(); self.0.f];
        for (j, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, col) in self.0.frob_cols[j].iter().enumerate() {
                coords[i] = (&coords[i] + c * col).mod_floor(&m);
            }
        }
        WittElem { coords }
    }

    /// sigma(w) is the unique root of the minimal polynomial congruent to
    /// w^p mod p, found by Hensel lifting.
    fn build_frobenius(&self) -> Result<Vec<Vec<BigInt>>> {
        let f = self.0.f;
        let n = self.0.n;
        let gen = self.generator();
        let mut y = self.pow_big_at(&gen, &BigUint::from(self.0.p), n);
        let eval = |at: &WittElem| -> WittElem {
            // minpoly(at) with the monic leading term restored.
            let mut acc = self.pow_big_at(at, &BigUint::from(f as u32), n);
            let mut pw = self.one();
            for c in &self.0.minpoly {
                acc = self.add_at(&acc, &self.scale_at(&pw, c, n), n);
                pw = self.mul_at(&pw, at, n);
            }
            acc
        };
        let eval_deriv = |at: &WittElem| -> WittElem {
            let mut acc = self.scale_at(
                &self.pow_big_at(at, &BigUint::from((f - 1) as u32), n),
                &BigInt::from(f as u64),
                n,
            );
            let mut pw = self.one();
            for (j, c) in self.0.minpoly.iter().enumerate() {
                if j >= 1 {
                    acc = self.add_at(
                        &acc,
                        &self.scale_at(&pw, &(c * BigInt::from(j as u64)), n),
                        n,
                    );
                    pw = self.mul_at(&pw, at, n);
                } else {
                    pw = self.one();
                }
            }
            acc
        };
        let steps = 32 - n.leading_zeros() + 1;
        for _ in 0..steps {
            let fy = eval(&y);
            let dy = eval_deriv(&y);
            let corr = self.mul_at(&fy, &self.inv_at(&dy, n)?, n);
            y = self.sub_at(&y, &corr, n);
        }
        if self.vp_at(&eval(&y), n).is_some() {
            return Err(Error::NonUniqueSolution(0));
        }
        let mut cols = Vec::with_capacity(f);
        let mut pw = self.one();
        for _ in 0..f {
            cols.push(pw.coords.clone());
            pw = self.mul_at(&pw, &y, n);
        }
        Ok(cols)
    }

    /// Coordinates of the residue class mod p.
    pub fn residue(&self, a: &WittElem) -> Vec<u64> {
        a.coords
            .iter()
            .map(|c| c.mod_floor(&self.0.p_big).to_u64().unwrap())
            .collect()
    }

    /// The residue field as a table ring, sharing this ring's minimal
    /// polynomial. Only available for q <= 25.
    pub fn residue_ring(&self) -> Result<SmallRing> {
        let mp: Vec<u64> = self
            .0
            .minpoly
            .iter()
            .map(|c| c.mod_floor(&self.0.p_big).to_u64().unwrap())
            .collect();
        SmallRing::gf_with_minpoly(self.0.p, &mp)
    }

    pub fn fmt_elem(&self, a: &WittElem) -> String {
        let parts: Vec<String> = a
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 if c.is_one() => "w".into(),
                1 => format!("{c}*w"),
                _ if c.is_one() => format!("w^{j}"),
                _ => format!("{c}*w^{j}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
