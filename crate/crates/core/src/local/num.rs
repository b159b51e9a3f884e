//! Elements of o_L (and its fraction field) to finite pi-adic precision.
//!
//! A value is either zero to precision m (nothing is known beyond ord >= m)
//! or pi^v * u with u a unit whose coordinates are trusted for prec - v
//! pi-adic digits. Operations propagate the weakest honest claim; when the
//! relative precision of a unit would drop to zero the operation fails with
//! [`Error::PrecisionExhausted`] rather than fabricate digits.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::field::LocalField;
use crate::local::unramified::WittElem;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct LocalNum {
    pub(crate) repr: Repr,
    /// Absolute pi-adic precision: ord of the first untrusted digit.
    pub(crate) prec: i64,
}

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    Zero,
    /// pi^v times the unit with the given coordinates in 1, pi, ..., pi^{e-1}
    /// over W; coords[0] is a unit of W.
    Unit { v: i64, coords: Vec<WittElem> },
}

/// pi-adic order of an element known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ord {
    /// Exactly pi^v times a unit.
    Exact(i64),
    /// Zero to precision m: all that is known is ord >= m.
    AtLeast(i64),
}

impl LocalNum {
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// True when nothing distinguishes the element from zero and at least
    /// one pi-adic digit backs the claim. An element known to precision 0 or
    /// less carries no evidence and never verifies as zero.
    pub fn is_zero_to_prec(&self) -> bool {
        matches!(self.repr, Repr::Zero) && self.prec >= 1
    }

    pub fn ord(&self) -> Ord {
        match &self.repr {
            Repr::Zero => Ord::AtLeast(self.prec),
            Repr::Unit { v, .. } => Ord::Exact(*v),
        }
    }

    /// Order as a rational multiple of ord(p) = e: returns (num, den) with
    /// den = e, for display in the normalization ord(p) = 1.
    pub fn ord_over_e(&self, field: &LocalField) -> Option<(i64, i64)> {
        match self.ord() {
            Ord::Exact(v) => Some((v, field.e() as i64)),
            Ord::AtLeast(_) => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        match &self.repr {
            Repr::Zero => self.prec >= 0,
            Repr::Unit { v, .. } => *v >= 0,
        }
    }
}

impl LocalField {
    fn clamp_zero(&self, prec: i64) -> LocalNum {
        LocalNum {
            repr: Repr::Zero,
            prec: prec.min(self.precision()),
        }
    }

    /// Canonicalizes (v, coords) claimed to precision `prec`: strips the
    /// actual pi-valuation out of the coordinate vector so coords[0] becomes
    /// a unit, or collapses to zero when no digit below `prec` is nonzero.
    pub(crate) fn normalize(&self, v: i64, coords: Vec<WittElem>, prec: i64) -> LocalNum {
        let prec = prec.min(self.precision());
        let relprec = prec - v;
        if relprec <= 0 {
            return self.clamp_zero(prec);
        }
        match self.unit_ord(&coords, relprec) {
            None => self.clamp_zero(prec),
            Some(0) => {
                let relprec = relprec.min(self.rel_cap());
                LocalNum {
                    repr: Repr::Unit { v, coords },
                    prec: v + relprec,
                }
            }
            Some(t) => {
                let mut c = coords;
                for _ in 0..t {
                    c = self
                        .unit_div_by_pi(&c)
                        .expect("slot below the located order must divide");
                }
                let relprec = (relprec - t).min(self.rel_cap());
                LocalNum {
                    repr: Repr::Unit { v: v + t, coords: c },
                    prec: v + t + relprec,
                }
            }
        }
    }

    /// Zero to the field's full precision.
    pub fn zero_elem(&self) -> LocalNum {
        self.clamp_zero(self.precision())
    }

    /// Zero to precision m.
    pub fn zero_to(&self, m: i64) -> LocalNum {
        self.clamp_zero(m)
    }

    pub fn from_int(&self, n: &BigInt) -> LocalNum {
        let mut coords = vec![self.base().zero(); self.e()];
        coords[0] = self.base().from_bigint(n);
        self.normalize(0, coords, self.precision())
    }

    pub fn from_witt(&self, w: &WittElem) -> LocalNum {
        let mut coords = vec![self.base().zero(); self.e()];
        coords[0] = self.base().reduce_at(w, self.base().precision());
        self.normalize(0, coords, self.precision())
    }

    /// The uniformizer pi as an element.
    pub fn pi(&self) -> LocalNum {
        let mut coords = vec![self.base().zero(); self.e()];
        if self.e() == 1 {
            // pi = -e_0 in the degree-1 case; represent through the unit part
            // so ord comes out as exactly 1.
            coords[0] = self
                .base()
                .div_pow_p_at(&self.eisenstein()[0], 1, self.base().precision())
                .expect("Eisenstein constant term is divisible by p");
            coords[0] = self.base().neg(&coords[0]);
            self.normalize(1, coords, self.precision() + 1)
        } else {
            coords[1] = self.base().one();
            self.normalize(0, coords, self.precision() + 1)
        }
    }

    /// Interprets rows[i][j] as the coefficient of w^j pi^i, entries exact
    /// integers.
    pub fn from_coord_rows(&self, rows: &[Vec<BigInt>]) -> Result<LocalNum> {
        if rows.len() > self.e() {
            return Err(Error::Invalid(format!(
                "coordinate vector has {} rows, field has e = {}",
                rows.len(),
                self.e()
            )));
        }
        let mut coords = vec![self.base().zero(); self.e()];
        for (i, row) in rows.iter().enumerate() {
            if row.len() > self.f() {
                return Err(Error::Invalid(format!(
                    "row {i} has {} entries, field has f = {}",
                    row.len(),
                    self.f()
                )));
            }
            let mut full = row.clone();
            full.resize(self.f(), BigInt::zero());
            coords[i] = self
                .base()
                .reduce_at(&WittElem { coords: full }, self.base().precision());
        }
        Ok(self.normalize(0, coords, self.precision()))
    }

    pub fn add_elems(&self, a: &LocalNum, b: &LocalNum) -> LocalNum {
        let prec = a.prec.min(b.prec);
        match (&a.repr, &b.repr) {
            (Repr::Zero, _) => {
                let mut out = b.clone();
                out.prec = prec;
                self.renormalize(out)
            }
            (_, Repr::Zero) => {
                let mut out = a.clone();
                out.prec = prec;
                self.renormalize(out)
            }
            (Repr::Unit { v: va, coords: ca }, Repr::Unit { v: vb, coords: cb }) => {
                let v = (*va).min(*vb);
                let mut xa = ca.clone();
                let mut xb = cb.clone();
                for _ in 0..(va - v) {
                    xa = self.unit_mul_by_pi(&xa);
                }
                for _ in 0..(vb - v) {
                    xb = self.unit_mul_by_pi(&xb);
                }
                self.normalize(v, self.unit_add(&xa, &xb), prec)
            }
        }
    }

    pub fn neg_elem(&self, a: &LocalNum) -> LocalNum {
        match &a.repr {
            Repr::Zero => a.clone(),
            Repr::Unit { v, coords } => LocalNum {
                repr: Repr::Unit {
                    v: *v,
                    coords: self.unit_neg(coords),
                },
                prec: a.prec,
            },
        }
    }

    pub fn sub_elems(&self, a: &LocalNum, b: &LocalNum) -> LocalNum {
        self.add_elems(a, &self.neg_elem(b))
    }

    pub fn mul_elems(&self, a: &LocalNum, b: &LocalNum) -> LocalNum {
        match (&a.repr, &b.repr) {
            (Repr::Zero, Repr::Zero) => self.clamp_zero(a.prec + b.prec),
            (Repr::Zero, Repr::Unit { v, .. }) => self.clamp_zero(a.prec + v),
            (Repr::Unit { v, .. }, Repr::Zero) => self.clamp_zero(b.prec + v),
            (Repr::Unit { v: va, coords: ca }, Repr::Unit { v: vb, coords: cb }) => {
                let v = va + vb;
                let rel = (a.prec - va).min(b.prec - vb);
                self.normalize(v, self.unit_mul(ca, cb), v + rel)
            }
        }
    }

    /// Multiplies by pi^k (k may be negative; negative k can leave o_L).
    pub fn shift(&self, a: &LocalNum, k: i64) -> LocalNum {
        match &a.repr {
            Repr::Zero => self.clamp_zero(a.prec + k),
            Repr::Unit { v, coords } => LocalNum {
                repr: Repr::Unit {
                    v: v + k,
                    coords: coords.clone(),
                },
                prec: (a.prec + k).min(self.precision()),
            },
        }
    }

    pub fn inv_elem(&self, a: &LocalNum) -> Result<LocalNum> {
        match &a.repr {
            Repr::Zero => Err(Error::DivisionByZeroToPrecision),
            Repr::Unit { v, coords } => {
                let rel = a.prec - v;
                let z = self.unit_inv(coords, rel)?;
                Ok(self.normalize(-v, z, -v + rel))
            }
        }
    }

    pub fn div_elems(&self, a: &LocalNum, b: &LocalNum) -> Result<LocalNum> {
        Ok(self.mul_elems(a, &self.inv_elem(b)?))
    }

    pub fn pow_elem(&self, a: &LocalNum, n: u64) -> LocalNum {
        let mut acc = self.from_int(&BigInt::from(1));
        let mut sq = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_elems(&acc, &sq);
            }
            n >>= 1;
            if n > 0 {
                sq = self.mul_elems(&sq, &sq);
            }
        }
        acc
    }

    /// Equality to the weaker of the two precision claims.
    pub fn eq_to_prec(&self, a: &LocalNum, b: &LocalNum) -> bool {
        self.sub_elems(a, b).is_zero_to_prec()
    }

    fn renormalize(&self, a: LocalNum) -> LocalNum {
        match a.repr {
            Repr::Zero => a,
            Repr::Unit { v, coords } => self.normalize(v, coords, a.prec),
        }
    }

    /// Image in the residue field as coordinates over F_p, for integral
    /// elements known to at least one digit.
    pub fn residue(&self, a: &LocalNum) -> Result<Vec<u64>> {
        match &a.repr {
            Repr::Zero => {
                if a.prec >= 1 {
                    Ok(vec![0; self.f()])
                } else {
                    Err(Error::PrecisionExhausted)
                }
            }
            Repr::Unit { v, coords } => {
                if *v < 0 {
                    Err(Error::NotIntegral(format!(
                        "ord = {v}, element lies outside the integer ring"
                    )))
                } else if *v >= 1 {
                    Ok(vec![0; self.f()])
                } else {
                    Ok(self.base().residue(&coords[0]))
                }
            }
        }
    }

    /// Canonical digit matrix of the unit part: entry (i, j) is the w^j
    /// coordinate of slot pi^i, reduced mod p^ceil((relprec - i) / e) so two
    /// equal-to-precision elements serialize identically.
    fn canonical_rows(&self, coords: &[WittElem], relprec: i64) -> Vec<Vec<BigInt>> {
        let e = self.e() as i64;
        let p = BigInt::from(self.p());
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let digits = (relprec - i as i64 + e - 1).div_euclid(e).max(0) as u32;
                let modulus = num_traits::pow::pow(p.clone(), digits as usize);
                c.coords
                    .iter()
                    .map(|x| {
                        if digits == 0 {
                            BigInt::zero()
                        } else {
                            ((x % &modulus) + &modulus) % &modulus
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_repr(&self, a: &LocalNum) -> LocalNumRepr {
        match &a.repr {
            Repr::Zero => LocalNumRepr {
                v: None,
                unit: Vec::new(),
                prec: a.prec,
            },
            Repr::Unit { v, coords } => LocalNumRepr {
                v: Some(*v),
                unit: self
                    .canonical_rows(coords, a.prec - v)
                    .into_iter()
                    .map(|row| row.into_iter().map(|x| x.to_string()).collect())
                    .collect(),
                prec: a.prec,
            },
        }
    }

    pub fn from_repr(&self, r: &LocalNumRepr) -> Result<LocalNum> {
        match r.v {
            None => {
                if r.prec > self.precision() {
                    return Err(Error::Invalid(format!(
                        "precision claim {} exceeds the field cap {}",
                        r.prec,
                        self.precision()
                    )));
                }
                Ok(self.clamp_zero(r.prec))
            }
            Some(v) => {
                if r.unit.len() != self.e() {
                    return Err(Error::Invalid(format!(
                        "unit part has {} rows, field has e = {}",
                        r.unit.len(),
                        self.e()
                    )));
                }
                let mut coords = Vec::with_capacity(self.e());
                for row in &r.unit {
                    if row.len() != self.f() {
                        return Err(Error::Invalid(format!(
                            "unit row has {} entries, field has f = {}",
                            row.len(),
                            self.f()
                        )));
                    }
                    let mut cs = Vec::with_capacity(self.f());
                    for s in row {
                        let x: BigInt = s
                            .parse()
                            .map_err(|_| Error::Invalid(format!("bad integer literal {s:?}")))?;
                        cs.push(x);
                    }
                    coords.push(self.base().reduce_at(
                        &WittElem { coords: cs },
                        self.base().precision(),
                    ));
                }
                let out = self.normalize(v, coords, r.prec.min(self.precision()));
                match &out.repr {
                    Repr::Unit { v: v2, .. } if *v2 == v => Ok(out),
                    _ => Err(Error::Invalid(
                        "unit part of the representation is not a unit".into(),
                    )),
                }
            }
        }
    }

    pub fn fmt_num(&self, a: &LocalNum) -> String {
        match &a.repr {
            Repr::Zero => format!("O(pi^{})", a.prec),
            Repr::Unit { v, coords } => {
                let rows = self.canonical_rows(coords, a.prec - v);
                let mut terms = Vec::new();
                for (i, row) in rows.iter().enumerate() {
                    let w = WittElem { coords: row.clone() };
                    if row.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let c = self.base().fmt_elem(&w);
                    let c = if self.f() > 1 || c.contains('-') && i > 0 {
                        format!("({c})")
                    } else {
                        c
                    };
                    terms.push(match i {
                        0 => c,
                        1 => format!("{c}*pi"),
                        _ => format!("{c}*pi^{i}"),
                    });
                }
                let body = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                };
                if *v == 0 {
                    format!("{body} + O(pi^{})", a.prec)
                } else {
                    format!("pi^{v}*({body}) + O(pi^{})", a.prec)
                }
            }
        }
    }
}

/// Canonical serialized form: `v` absent for zero-to-precision, otherwise the
/// valuation together with the reduced digit matrix of the unit part.
/// Coordinates are decimal strings; they routinely exceed 64 bits.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LocalNumRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub unit: Vec<Vec<String>>,
    pub prec: i64,
}

impl Ring for LocalField {
    type Elem = LocalNum;

    fn zero(&self) -> LocalNum {
        self.zero_elem()
    }
    fn one(&self) -> LocalNum {
        self.from_int(&BigInt::from(1))
    }
    fn from_bigint(&self, n: &BigInt) -> LocalNum {
        self.from_int(n)
    }
    fn add(&self, a: &LocalNum, b: &LocalNum) -> LocalNum {
        self.add_elems(a, b)
    }
    fn neg(&self, a: &LocalNum) -> LocalNum {
        self.neg_elem(a)
    }
    fn mul(&self, a: &LocalNum, b: &LocalNum) -> LocalNum {
        self.mul_elems(a, b)
    }
    fn is_zero(&self, a: &LocalNum) -> bool {
        a.is_zero_to_prec()
    }
    fn is_unit(&self, a: &LocalNum) -> bool {
        matches!(&a.repr, Repr::Unit { v: 0, .. })
    }
    fn inv(&self, a: &LocalNum) -> crate::error::Result<LocalNum> {
        self.inv_elem(a)
    }
    fn eq_elem(&self, a: &LocalNum, b: &LocalNum) -> bool {
        self.eq_to_prec(a, b)
    }
    fn fmt_elem(&self, a: &LocalNum) -> String {
        self.fmt_num(a)
    }
    fn name(&self) -> String {
        LocalField::name(self)
    }
    fn parse_elem(&self, s: &str) -> crate::error::Result<LocalNum> {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad integer literal {s:?}")))?;
        Ok(self.from_int(&n))
    }
    fn is_exact(&self) -> bool {
        false
    }
}

impl fmt::Display for Ord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ord::Exact(v) => write!(f, "{v}"),
            Ord::AtLeast(m) => write!(f, ">={m}"),
        }
    }
}
