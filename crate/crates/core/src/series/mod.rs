//! Truncated multivariate power series over any [`Ring`].
//!
//! A series tracks all coefficients of total degree up to an inclusive cap;
//! everything above the cap is an unknown tail. Monomials absent from the
//! table are exactly zero. Over exact rings zero coefficients are pruned;
//! over precision-tracking rings a stored zero keeps its precision claim.

mod compose;
mod text;

pub use compose::recenter_with_tail;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Hard cap on the number of variable axes. Public interfaces stay at three
/// variables; the headroom is consumed internally during substitution.
pub const MAX_VARS: usize = 6;

/// A monomial exponent vector with its total degree cached for ordering.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mono {
    deg: u16,
    e: [u16; MAX_VARS],
}

impl Mono {
    pub fn from_exps(exps: &[usize]) -> Mono {
        let mut e = [0u16; MAX_VARS];
        let mut deg = 0u16;
        for (i, &x) in exps.iter().enumerate() {
            e[i] = x as u16;
            deg += x as u16;
        }
        Mono { deg, e }
    }

    pub fn one() -> Mono {
        Mono {
            deg: 0,
            e: [0; MAX_VARS],
        }
    }

    pub fn deg(&self) -> usize {
        self.deg as usize
    }

    pub fn exp(&self, axis: usize) -> usize {
        self.e[axis] as usize
    }

    pub fn exps(&self, nvars: usize) -> Vec<usize> {
        (0..nvars).map(|i| self.e[i] as usize).collect()
    }

    fn mul(&self, o: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.e[i] + o.e[i];
        }
        Mono {
            deg: self.deg + o.deg,
            e,
        }
    }

    fn with_axis(&self, axis: usize, exp: usize) -> Mono {
        let mut e = self.e;
        let deg = self.deg - e[axis] + exp as u16;
        e[axis] = exp as u16;
        Mono { deg, e }
    }
}

/// Graded ordering: total degree first, then descending lexicographic on the
/// exponent vector, so iteration runs degree by degree with earlier axes
/// first (X^2 before XY before Y^2).
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| other.e.cmp(&self.e))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct TruncSeries<R: Ring> {
    ring: R,
    vars: Vec<String>,
    /// Highest tracked total degree, inclusive.
    cap: usize,
    coeffs: BTreeMap<Mono, R::Elem>,
}

impl<R: Ring> TruncSeries<R> {
    pub fn new(ring: R, vars: &[&str], cap: usize) -> Result<Self> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::Invalid(format!(
                "variable count {} out of range 1..={MAX_VARS}",
                vars.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Invalid(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v:?}")));
            }
        }
        if cap > u16::MAX as usize / 4 {
            return Err(Error::Invalid(format!("degree cap {cap} too large")));
        }
        Ok(TruncSeries {
            ring,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            cap,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn constant(ring: R, vars: &[&str], cap: usize, c: R::Elem) -> Result<Self> {
        let mut s = Self::new(ring, vars, cap)?;
        s.set_coeff_mono(Mono::one(), c);
        Ok(s)
    }

    /// The monomial series for variable `name`.
    pub fn var(ring: R, vars: &[&str], cap: usize, name: &str) -> Result<Self> {
        let mut s = Self::new(ring, vars, cap)?;
        let axis = s.axis_of(name)?;
        if cap >= 1 {
            let one = s.ring.one();
            s.set_coeff_mono(Mono::from_exps(&{
                let mut e = vec![0; axis + 1];
                e[axis] = 1;
                e
            }), one);
        }
        Ok(s)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn axis_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name:?}")))
    }

    /// Iterates stored (monomial, coefficient) pairs in graded order.
    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &R::Elem)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exps: &[usize]) -> R::Elem {
        let m = Mono::from_exps(exps);
        self.coeffs
            .get(&m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeff_mono(&self, m: &Mono) -> R::Elem {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn set_coeff(&mut self, exps: &[usize], c: R::Elem) {
        self.set_coeff_mono(Mono::from_exps(exps), c);
    }

    pub(crate) fn set_coeff_mono(&mut self, m: Mono, c: R::Elem) {
        if m.deg() > self.cap {
            return;
        }
        if self.ring.is_exact() && self.ring.is_zero(&c) {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }

    /// True when every stored coefficient verifies as zero. Over precision
    /// rings this asserts each entry is zero to at least one digit.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| self.ring.is_zero(c))
    }

    /// Smallest total degree whose coefficient is not known to be zero, if
    /// any.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .find(|(_, c)| !self.ring.is_zero(c))
            .map(|(m, _)| m.deg())
    }

    /// The constant coefficient verifies as zero (absent or zero with
    /// evidence), so substitution into a tail-truncated context is sound.
    pub fn has_zero_constant_term(&self) -> bool {
        match self.coeffs.get(&Mono::one()) {
            None => true,
            Some(c) => self.ring.is_zero(c),
        }
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.name(), other.ring.name()));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(
                self.vars.clone(),
                other.vars.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let cap = self.cap.min(other.cap);
        let mut out = TruncSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            cap,
            coeffs: BTreeMap::new(),
        };
        for (m, c) in &self.coeffs {
            if m.deg() <= cap {
                out.coeffs.insert(*m, c.clone());
            }
        }
        for (m, c) in &other.coeffs {
            if m.deg() > cap {
                continue;
            }
            let v = match out.coeffs.remove(m) {
                Some(prev) => self.ring.add(&prev, c),
                None => c.clone(),
            };
            out.set_coeff_mono(*m, v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let mut out = TruncSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            cap: self.cap,
            coeffs: BTreeMap::new(),
        };
        for (m, c) in &self.coeffs {
            out.set_coeff_mono(*m, self.ring.mul(c, k));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let cap = self.cap.min(other.cap);
        let mut out = TruncSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            cap,
            coeffs: BTreeMap::new(),
        };
        for (ma, ca) in &self.coeffs {
            if ma.deg() > cap {
                continue;
            }
            for (mb, cb) in &other.coeffs {
                if ma.deg() + mb.deg() > cap {
                    break; // graded order: later keys only get bigger
                }
                let m = ma.mul(mb);
                let prod = self.ring.mul(ca, cb);
                let v = match out.coeffs.remove(&m) {
                    Some(prev) => self.ring.add(&prev, &prod),
                    None => prod,
                };
                out.coeffs.insert(m, v);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        let mut acc = Self::constant(
            self.ring.clone(),
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            self.cap,
            self.ring.one(),
        )?;
        let mut sq = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Lowers the cap, dropping higher coefficients.
    pub fn truncate(&self, new_cap: usize) -> Self {
        let cap = new_cap.min(self.cap);
        TruncSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            cap,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.deg() <= cap)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Raises the cap. The caller asserts the value is a polynomial: every
    /// coefficient between the old and new cap is exactly zero.
    pub fn assume_cap(&self, new_cap: usize) -> Self {
        let mut out = self.clone();
        out.cap = new_cap.max(self.cap);
        out
    }

    /// Re-expresses the series on a new variable list; axis `i` becomes the
    /// axis of `mapping[i]` in `new_vars`. Axes outside the mapping get
    /// exponent zero.
    pub fn embed(&self, new_vars: &[&str], mapping: &[usize]) -> Result<Self> {
        if mapping.len() != self.vars.len() {
            return Err(Error::Invalid(
                "embedding must map every source variable".into(),
            ));
        }
        let mut out = TruncSeries::new(self.ring.clone(), new_vars, self.cap)?;
        for (m, c) in &self.coeffs {
            let mut e = vec![0usize; new_vars.len()];
            for (i, &t) in mapping.iter().enumerate() {
                if t >= new_vars.len() {
                    return Err(Error::Invalid(format!("axis {t} out of range")));
                }
                e[t] += m.exp(i);
            }
            out.coeffs.insert(Mono::from_exps(&e), c.clone());
        }
        Ok(out)
    }

    /// Renames variables in place (same axes, new labels).
    pub fn rename(&self, new_vars: &[&str]) -> Result<Self> {
        if new_vars.len() != self.vars.len() {
            return Err(Error::Invalid("rename must keep the axis count".into()));
        }
        let mut out = TruncSeries::new(self.ring.clone(), new_vars, self.cap)?;
        out.coeffs = self.coeffs.clone();
        Ok(out)
    }

    /// Maps coefficients into another ring.
    pub fn map_ring<S: Ring>(
        &self,
        target: S,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem>,
    ) -> Result<TruncSeries<S>> {
        let mut out = TruncSeries {
            ring: target,
            vars: self.vars.clone(),
            cap: self.cap,
            coeffs: BTreeMap::new(),
        };
        for (m, c) in &self.coeffs {
            let v = f(c)?;
            out.set_coeff_mono(*m, v);
        }
        Ok(out)
    }

    /// Evaluates at a point, all coordinates given.
    pub fn eval(&self, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.vars.len() {
            return Err(Error::Invalid(format!(
                "evaluation point has {} coordinates for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = self.ring.zero();
        for (m, c) in &self.coeffs {
            let mut term = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    term = self.ring.mul(&term, x);
                }
            }
            acc = self.ring.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Structural equality up to the shared cap: the difference verifies as
    /// zero coefficientwise.
    pub fn eq_to_cap(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Partial derivative along `axis`. One degree of information is lost:
    /// the result cap drops by one.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.nvars() {
            return Err(Error::Invalid(format!("axis {axis} out of range")));
        }
        let cap = self.cap.saturating_sub(1);
        let mut out = self.empty_like(cap);
        for (m, c) in &self.coeffs {
            let e = m.exp(axis);
            if e == 0 || m.deg() - 1 > cap {
                continue;
            }
            let scaled = self.ring.mul(c, &self.ring.from_i64(e as i64));
            out.set_coeff_mono(m.with_axis(axis, e - 1), scaled);
        }
        Ok(out)
    }

    /// First (monomial, coefficient) violating `pred`, in graded order.
    pub fn first_failing<F: Fn(&R::Elem) -> bool>(&self, pred: F) -> Option<(Mono, R::Elem)> {
        self.coeffs
            .iter()
            .find(|(_, c)| !pred(c))
            .map(|(m, c)| (*m, c.clone()))
    }

    fn prune(&mut self) {
        if self.ring.is_exact() {
            let ring = self.ring.clone();
            self.coeffs.retain(|_, c| !ring.is_zero(c));
        }
    }

    pub(crate) fn from_parts(
        ring: R,
        vars: Vec<String>,
        cap: usize,
        coeffs: BTreeMap<Mono, R::Elem>,
    ) -> Self {
        let mut s = TruncSeries {
            ring,
            vars,
            cap,
            coeffs,
        };
        s.prune();
        s
    }

    fn empty_like(&self, cap: usize) -> Self {
        TruncSeries {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            cap,
            coeffs: BTreeMap::new(),
        }
    }

    /// Splits off the part with the given exponent on `axis`, that exponent
    /// zeroed out.
    fn extract_axis_power(&self, axis: usize, exp: usize) -> Self {
        let mut out = self.empty_like(self.cap);
        for (m, c) in &self.coeffs {
            if m.exp(axis) == exp {
                out.coeffs.insert(m.with_axis(axis, 0), c.clone());
            }
        }
        out
    }

    /// Distinct exponents of `axis` across stored monomials, descending.
    fn axis_exponents(&self, axis: usize) -> Vec<usize> {
        let mut es: Vec<usize> = self.coeffs.keys().map(|m| m.exp(axis)).collect();
        es.sort_unstable();
        es.dedup();
        es.reverse();
        es
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::IntegerRing;
    use num_bigint::BigInt;

    fn zs(cap: usize) -> TruncSeries<IntegerRing> {
        TruncSeries::new(IntegerRing, &["X", "Y"], cap).unwrap()
    }

    #[test]
    fn mono_ordering_is_graded() {
        let a = Mono::from_exps(&[2, 0]); // X^2
        let b = Mono::from_exps(&[0, 1]); // Y
        let c = Mono::from_exps(&[1, 1]); // XY
        assert!(b < a);
        assert!(a < c || c < a); // same degree as X^2: decided lexicographically
        assert!(b < c);
    }

    #[test]
    fn add_and_mul_agree_with_hand_expansion() {
        let mut f = zs(4);
        f.set_coeff(&[1, 0], BigInt::from(1)); // X
        f.set_coeff(&[0, 1], BigInt::from(1)); // Y
        let g = f.mul(&f).unwrap(); // (X+Y)^2
        assert_eq!(g.coeff(&[2, 0]), BigInt::from(1));
        assert_eq!(g.coeff(&[1, 1]), BigInt::from(2));
        assert_eq!(g.coeff(&[0, 2]), BigInt::from(1));
        let h = g.mul(&f).unwrap(); // (X+Y)^3
        assert_eq!(h.coeff(&[2, 1]), BigInt::from(3));
        // cap respected
        let p4 = h.mul(&f).unwrap();
        assert_eq!(p4.coeff(&[2, 2]), BigInt::from(6));
        let p5 = p4.mul(&f).unwrap();
        assert!(p5.iter().all(|(m, _)| m.deg() <= 4));
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let mut f = zs(6);
        f.set_coeff(&[1, 0], BigInt::from(2));
        f.set_coeff(&[0, 1], BigInt::from(-1));
        f.set_coeff(&[1, 1], BigInt::from(3));
        let p3 = f.pow(3).unwrap();
        let m3 = f.mul(&f).unwrap().mul(&f).unwrap();
        assert!(p3.eq_to_cap(&m3).unwrap());
    }

    #[test]
    fn zero_coefficients_are_pruned_over_exact_rings() {
        let mut f = zs(3);
        f.set_coeff(&[1, 0], BigInt::from(1));
        let g = f.sub(&f).unwrap();
        assert_eq!(g.iter().count(), 0);
        assert!(g.is_zero());
    }

    #[test]
    fn embed_moves_axes() {
        let mut f = TruncSeries::new(IntegerRing, &["X", "Y"], 3).unwrap();
        f.set_coeff(&[1, 2], BigInt::from(7));
        let g = f.embed(&["A", "X", "Y"], &[1, 2]).unwrap();
        assert_eq!(g.coeff(&[0, 1, 2]), BigInt::from(7));
        assert_eq!(g.vars(), &["A", "X", "Y"]);
    }

    #[test]
    fn eval_at_integers() {
        let mut f = zs(3);
        f.set_coeff(&[1, 0], BigInt::from(2));
        f.set_coeff(&[1, 1], BigInt::from(5));
        // f(3, 4) = 6 + 60
        let v = f.eval(&[BigInt::from(3), BigInt::from(4)]).unwrap();
        assert_eq!(v, BigInt::from(66));
    }

    #[test]
    fn context_mismatches_are_rejected() {
        let f = zs(3);
        let g = TruncSeries::new(IntegerRing, &["X", "Z"], 3).unwrap();
        assert!(matches!(f.add(&g), Err(Error::VariableMismatch(_, _))));
        let h = TruncSeries::new(crate::ring::RationalRing, &["X", "Y"], 3).unwrap();
        // Different ring types do not even typecheck; same type different
        // structure does:
        let z8 = TruncSeries::new(crate::ring::SmallRing::zmod(8).unwrap(), &["X"], 3).unwrap();
        let z9 = TruncSeries::new(crate::ring::SmallRing::zmod(9).unwrap(), &["X"], 3).unwrap();
        assert!(matches!(z8.add(&z9), Err(Error::RingMismatch(_, _))));
        drop(h);
    }

    #[test]
    fn var_constructor() {
        let x = TruncSeries::var(IntegerRing, &["X", "Y"], 5, "Y").unwrap();
        assert_eq!(x.coeff(&[0, 1]), BigInt::from(1));
        assert_eq!(x.iter().count(), 1);
    }
}
