//! Totally ramified extensions of W(F_q): o_L = W[pi]/(E(pi)) for an
//! Eisenstein polynomial E, with elements tracked to a guaranteed pi-adic
//! precision.
//!
//! Internally an element's unit part is a length-e vector of [`WittElem`]
//! coordinates in the basis 1, pi, ..., pi^{e-1}; all coordinate arithmetic
//! runs at the base ring's full precision and the honest per-element
//! precision claim lives in [`super::num::LocalNum`].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::local::unramified::{UnramifiedRing, WittElem};
use crate::ring::SmallRing;

#[derive(Clone)]
pub struct LocalField(pub(crate) Arc<FieldInner>);

pub(crate) struct FieldInner {
    pub base: UnramifiedRing,
    pub e: usize,
    /// Eisenstein coefficients e_0, ..., e_{e-1} with exact integer
    /// coordinates, defining pi^e = -(e_0 + e_1 pi + ... + e_{e-1} pi^{e-1}).
    pub eis: Vec<WittElem>,
    /// Guaranteed pi-adic precision cap for elements of this field.
    pub m_prec: i64,
    /// Exact coordinates of pi^m for m in 0..=2e-2.
    pi_pow: Vec<Vec<WittElem>>,
    /// Coordinates of p/pi, known mod p^N. Division by pi rewrites the
    /// constant slot through this element.
    p_over_pi: Vec<WittElem>,
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        self.0.base == other.0.base
            && self.0.e == other.0.e
            && self.0.m_prec == other.0.m_prec
            && self
                .0
                .eis
                .iter()
                .zip(&other.0.eis)
                .all(|(a, b)| self.0.base.eq(a, b))
    }
}

impl fmt::Debug for LocalField {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "LocalField(p={}, f={}, e={}, prec=pi^{})",
            self.0.base.p(),
            self.0.base.f(),
            self.0.e,
            self.0.m_prec
        )
    }
}

impl LocalField {
    /// Builds o_L from its inertia subring and an Eisenstein polynomial.
    /// `m_prec` is the pi-adic precision elements of the field will claim;
    /// the base must carry enough p-adic digits to support it.
    pub fn new(base: UnramifiedRing, eis: Vec<WittElem>, m_prec: i64) -> Result<Self> {
        let e = eis.len();
        if e == 0 {
            return Err(Error::Invalid("Eisenstein polynomial has degree 0".into()));
        }
        if m_prec < 1 {
            return Err(Error::Invalid("precision must be at least 1".into()));
        }
        if e as i64 * (base.precision() as i64 - 2) < m_prec {
            return Err(Error::Invalid(format!(
                "base precision p^{} cannot support pi-adic precision {}",
                base.precision(),
                m_prec
            )));
        }
        for (i, c) in eis.iter().enumerate() {
            if c.coords.len() != base.f() {
                return Err(Error::Invalid(format!(
                    "coefficient e_{i} has {} coordinates, expected {}",
                    c.coords.len(),
                    base.f()
                )));
            }
        }
        // ord(e_i) > 0 for all i, ord(e_0) = 1 exactly. The coefficients are
        // exact integers so this is an exact check.
        let exact_vp = |c: &WittElem| -> Option<u32> {
            let p = BigInt::from(base.p());
            c.coords
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| {
                    let mut x = x.clone();
                    let mut v = 0u32;
                    while (&x % &p).is_zero() {
                        x /= &p;
                        v += 1;
                    }
                    v
                })
                .min()
        };
        for (i, c) in eis.iter().enumerate() {
            match exact_vp(c) {
                None => {
                    if i == 0 {
                        return Err(Error::NotEisenstein(0));
                    }
                }
                Some(v) => {
                    if v == 0 || (i == 0 && v != 1) {
                        return Err(Error::NotEisenstein(i));
                    }
                }
            }
        }

        // pi^m for m <= 2e-2, exact: multiply by pi repeatedly, rewriting
        // pi^e = -sum e_i pi^i with exact integer coordinates throughout.
        let exact_mul_by_pi = |v: &[WittElem]| -> Vec<WittElem> {
            let mut out = vec![
                WittElem {
                    coords: vec![BigInt::zero(); base.f()]
                };
                e
            ];
            let top = &v[e - 1];
            for j in 0..e {
                let mut coords = Vec::with_capacity(base.f());
                for t in 0..base.f() {
                    let mut acc = BigInt::zero();
                    // exact WittElem multiplication of top * eis[j] happens
                    // below through the ring at full precision; do it exactly
                    // here instead to keep the table exact.
                    acc -= exact_witt_mul(&base, top, &eis[j], t);
                    if j >= 1 {
                        acc += &v[j - 1].coords[t];
                    }
                    coords.push(acc);
                }
                out[j] = WittElem { coords };
            }
            out
        };
        let mut pi_pow = Vec::with_capacity(2 * e - 1);
        let mut cur: Vec<WittElem> = (0..e)
            .map(|i| {
                let mut coords = vec![BigInt::zero(); base.f()];
                if i == 0 {
                    coords[0] = BigInt::from(1);
                }
                WittElem { coords }
            })
            .collect();
        pi_pow.push(cur.clone());
        for _ in 1..(2 * e - 1).max(1) {
            cur = exact_mul_by_pi(&cur);
            pi_pow.push(cur.clone());
        }

        // p/pi = -w^{-1} (pi^{e-1} + sum_{1<=i<e} e_i pi^{i-1}), w = e_0/p.
        let n = base.precision();
        let w = base.div_pow_p_at(&eis[0], 1, n)?;
        let w_inv = base.inv(&w)?;
        let mut p_over_pi: Vec<WittElem> = (0..e)
            .map(|j| {
                let mut c = if j == e - 1 { base.one() } else { base.zero() };
                if j + 1 < e {
                    c = base.add(&c, &base.reduce_at(&eis[j + 1], n));
                }
                c
            })
            .collect();
        for c in p_over_pi.iter_mut() {
            *c = base.neg(&base.mul(c, &w_inv));
        }

        Ok(LocalField(Arc::new(FieldInner {
            base,
            e,
            eis,
            m_prec,
            pi_pow,
            p_over_pi,
        })))
    }

    pub fn base(&self) -> &UnramifiedRing {
        &self.0.base
    }
    pub fn e(&self) -> usize {
        self.0.e
    }
    pub fn f(&self) -> usize {
        self.0.base.f()
    }
    pub fn p(&self) -> u64 {
        self.0.base.p()
    }
    /// The pi-adic precision cap for elements.
    pub fn precision(&self) -> i64 {
        self.0.m_prec
    }
    pub fn eisenstein(&self) -> &[WittElem] {
        &self.0.eis
    }
    pub fn residue_ring(&self) -> Result<SmallRing> {
        self.0.base.residue_ring()
    }

    /// Relative precision cap: how many pi-adic digits of a unit part the
    /// stored coordinates can support.
    pub(crate) fn rel_cap(&self) -> i64 {
        self.0.e as i64 * (self.0.base.precision() as i64 - 1)
    }

    /// The multiplication table pi^i * pi^j = sum_l m[i][j][l] pi^l over the
    /// inertia subring, reduced at the base precision.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<WittElem>>> {
        let e = self.0.e;
        let n = self.0.base.precision();
        (0..e)
            .map(|i| {
                (0..e)
                    .map(|j| {
                        self.0.pi_pow[i + j]
                            .iter()
                            .map(|c| self.0.base.reduce_at(c, n))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Product of two unit-part coordinate vectors.
    pub(crate) fn unit_mul(&self, a: &[WittElem], b: &[WittElem]) -> Vec<WittElem> {
        let e = self.0.e;
        let base = &self.0.base;
        let n = base.precision();
        let mut acc = vec![base.zero(); e];
        for (i, x) in a.iter().enumerate() {
            if x.coords.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let prod = base.mul_at(x, y, n);
                if i + j < e {
                    acc[i + j] = base.add_at(&acc[i + j], &prod, n);
                } else {
                    for (l, m) in self.0.pi_pow[i + j].iter().enumerate() {
                        acc[l] = base.add_at(&acc[l], &base.mul_at(&prod, m, n), n);
                    }
                }
            }
        }
        acc
    }

    pub(crate) fn unit_add(&self, a: &[WittElem], b: &[WittElem]) -> Vec<WittElem> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.0.base.add(x, y))
            .collect()
    }

    pub(crate) fn unit_neg(&self, a: &[WittElem]) -> Vec<WittElem> {
        a.iter().map(|x| self.0.base.neg(x)).collect()
    }

    pub(crate) fn unit_mul_by_pi(&self, a: &[WittElem]) -> Vec<WittElem> {
        let e = self.0.e;
        let base = &self.0.base;
        let n = base.precision();
        let top = &a[e - 1];
        (0..e)
            .map(|j| {
                let mut c = base.neg(&base.mul_at(top, &base.reduce_at(&self.0.eis[j], n), n));
                if j >= 1 {
                    c = base.add(&c, &a[j - 1]);
                }
                c
            })
            .collect()
    }

    /// Exact division of a coordinate vector by pi. The constant slot must be
    /// divisible by p; its quotient re-enters through p/pi.
    pub(crate) fn unit_div_by_pi(&self, a: &[WittElem]) -> Result<Vec<WittElem>> {
        let e = self.0.e;
        let base = &self.0.base;
        let n = base.precision();
        let d = base.div_pow_p_at(&a[0], 1, n)?;
        Ok((0..e)
            .map(|j| {
                let mut c = base.mul_at(&d, &self.0.p_over_pi[j], n);
                if j + 1 < e {
                    c = base.add(&c, &a[j + 1]);
                }
                c
            })
            .collect())
    }

    /// pi-adic order of the coordinate vector, looking at most `bound`
    /// digits: min over slots of e*vp(c_i) + i.
    pub(crate) fn unit_ord(&self, a: &[WittElem], bound: i64) -> Option<i64> {
        let e = self.0.e as i64;
        let base = &self.0.base;
        let look = ((bound + e - 1).div_euclid(e) + 1).max(1) as u32;
        let look = look.min(base.precision());
        let mut best: Option<i64> = None;
        for (i, c) in a.iter().enumerate() {
            if let Some(v) = base.vp_at(c, look) {
                let ord = e * v as i64 + i as i64;
                if best.is_none_or(|b| ord < b) {
                    best = Some(ord);
                }
            }
        }
        best.filter(|&o| o < bound)
    }

    /// Inverse of a unit-part vector (constant slot a unit), by Newton
    /// iteration z <- z(2 - az) which converges pi-adically.
    pub(crate) fn unit_inv(&self, a: &[WittElem], relprec: i64) -> Result<Vec<WittElem>> {
        let base = &self.0.base;
        if !base.is_unit_at(&a[0]) {
            return Err(Error::NotAUnit);
        }
        let mut z = vec![base.zero(); self.0.e];
        z[0] = base.inv(&a[0])?;
        let two: Vec<WittElem> = (0..self.0.e)
            .map(|i| {
                if i == 0 {
                    base.from_bigint(&BigInt::from(2))
                } else {
                    base.zero()
                }
            })
            .collect();
        let mut known: i64 = 1;
        while known < relprec {
            known *= 2;
            let az = self.unit_mul(a, &z);
            let corr = self.unit_add(&two, &self.unit_neg(&az));
            z = self.unit_mul(&z, &corr);
        }
        Ok(z)
    }

    pub fn name(&self) -> String {
        format!(
            "L(p={}, f={}, e={})",
            self.0.base.p(),
            self.0.base.f(),
            self.0.e
        )
    }
}

/// Coordinate t of the exact product a*b in W, with minpoly rewriting done
/// over the integers (no modular reduction).
fn exact_witt_mul(base: &UnramifiedRing, a: &WittElem, b: &WittElem, t: usize) -> BigInt {
    let f = base.f();
    let mut prod = vec![BigInt::zero(); 2 * f - 1];
    for (i, x) in a.coords.iter().enumerate() {
        for (j, y) in b.coords.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (f..2 * f - 1).rev() {
        if prod[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut prod[k]);
        for (i, m) in base.minpoly().iter().enumerate() {
            prod[k - f + i] -= &c * m;
        }
    }
    std::mem::take(&mut prod[t])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramified_quadratic() -> LocalField {
        let base = UnramifiedRing::new(5, 1, 30).unwrap();
        // E(x) = x^2 - 5.
        let eis = vec![
            WittElem::from_i64_coords(&[-5]),
            WittElem::from_i64_coords(&[0]),
        ];
        LocalField::new(base, eis, 40).unwrap()
    }

    #[test]
    fn rejects_non_eisenstein() {
        let base = UnramifiedRing::new(5, 1, 30).unwrap();
        // ord(e_0) = 2
        let err = LocalField::new(
            base.clone(),
            vec![
                WittElem::from_i64_coords(&[-25]),
                WittElem::from_i64_coords(&[0]),
            ],
            40,
        )
        .unwrap_err();
        assert_eq!(err, Error::NotEisenstein(0));
        // ord(e_1) = 0
        let err = LocalField::new(
            base,
            vec![
                WittElem::from_i64_coords(&[-5]),
                WittElem::from_i64_coords(&[3]),
            ],
            40,
        )
        .unwrap_err();
        assert_eq!(err, Error::NotEisenstein(1));
    }

    #[test]
    fn structure_constants_for_x2_minus_5() {
        let field = ramified_quadratic();
        let m = field.structure_constants();
        // pi * pi = 5 * 1 + 0 * pi
        assert_eq!(m[1][1][0].coords[0], BigInt::from(5));
        assert!(m[1][1][1].coords[0].is_zero());
        // 1 * pi = pi
        assert!(m[0][1][0].coords[0].is_zero());
        assert_eq!(m[0][1][1].coords[0], BigInt::from(1));
    }

    #[test]
    fn structure_constants_are_commutative_and_associative() {
        let base = UnramifiedRing::new(5, 2, 20).unwrap();
        // E(x) = x^3 + 5w x + 5 over W(F_25): Eisenstein.
        let eis = vec![
            WittElem::from_i64_coords(&[5, 0]),
            WittElem::from_i64_coords(&[0, 5]),
            WittElem::from_i64_coords(&[0, 0]),
        ];
        let field = LocalField::new(base.clone(), eis, 30).unwrap();
        let m = field.structure_constants();
        let e = field.e();
        for i in 0..e {
            for j in 0..e {
                for l in 0..e {
                    assert!(base.eq(&m[i][j][l], &m[j][i][l]), "commutativity {i},{j},{l}");
                }
                // (pi^i pi^j) pi^k = pi^i (pi^j pi^k)
                for k in 0..e {
                    for s in 0..e {
                        let mut lhs = base.zero();
                        let mut rhs = base.zero();
                        for l in 0..e {
                            lhs = base.add(&lhs, &base.mul(&m[i][j][l], &m[l][k][s]));
                            rhs = base.add(&rhs, &base.mul(&m[j][k][l], &m[i][l][s]));
                        }
                        assert!(base.eq(&lhs, &rhs), "associativity {i},{j},{k},{s}");
                    }
                }
            }
        }
    }

    #[test]
    fn division_by_pi_inverts_multiplication() {
        let field = ramified_quadratic();
        let base = field.base().clone();
        let v = vec![base.from_bigint(&BigInt::from(7)), base.from_bigint(&BigInt::from(3))];
        let up = field.unit_mul_by_pi(&v);
        let back = field.unit_div_by_pi(&up).unwrap();
        for (a, b) in back.iter().zip(&v) {
            // One digit of the base is consumed by the round trip.
            assert!(base.vp_at(&base.sub(a, b), base.precision() - 1).is_none());
        }
    }

    #[test]
    fn unit_inverse() {
        let field = ramified_quadratic();
        let base = field.base().clone();
        let u = vec![base.from_bigint(&BigInt::from(3)), base.from_bigint(&BigInt::from(11))];
        let z = field.unit_inv(&u, 40).unwrap();
        let prod = field.unit_mul(&u, &z);
        assert!(base.vp_at(&base.sub(&prod[0], &base.one()), 20).is_none());
        assert!(base.vp_at(&prod[1], 20).is_none());
    }
}
