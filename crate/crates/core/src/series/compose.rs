//! Substitution, compositional inverse and recentering.
//!
//! Substitution is organized to stay cheap on sparse operands: the source
//! series is moved onto fresh internal axes alongside the target axes, then
//! each source axis is eliminated by Horner evaluation over the distinct
//! exponents that actually occur, with gap powers of the substituted series
//! computed by square-and-multiply. Because every substituted series has
//! positive valuation, truncation by total degree across the mixed axes is
//! sound at every intermediate step.

use std::collections::BTreeMap;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::{Mono, TruncSeries, MAX_VARS};

impl<R: Ring> TruncSeries<R> {
    /// Substitutes `targets[i]` for variable `i`. All targets must live in a
    /// common context and have verified-zero constant terms; the result lives
    /// in that context with cap `min(self.cap, target caps)`.
    pub fn substitute(&self, targets: &[&TruncSeries<R>]) -> Result<TruncSeries<R>> {
        if targets.len() != self.nvars() {
            return Err(Error::Invalid(format!(
                "{} substitution targets for {} variables",
                targets.len(),
                self.nvars()
            )));
        }
        let first = targets
            .first()
            .ok_or_else(|| Error::Invalid("substitution into no variables".into()))?;
        let mut out_cap = self.cap().min(first.cap());
        for t in targets {
            if t.ring() != self.ring() {
                return Err(Error::RingMismatch(self.ring().name(), t.ring().name()));
            }
            if t.vars() != first.vars() {
                return Err(Error::VariableMismatch(
                    first.vars().to_vec(),
                    t.vars().to_vec(),
                ));
            }
            if !t.has_zero_constant_term() {
                return Err(Error::NonzeroConstantTerm);
            }
            out_cap = out_cap.min(t.cap());
        }
        let m = first.nvars();
        let k = self.nvars();
        if m + k > MAX_VARS {
            return Err(Error::Invalid(format!(
                "substitution needs {m}+{k} internal axes, limit is {MAX_VARS}"
            )));
        }

        // Internal context: target axes first, then one slot per source axis.
        let mut inames: Vec<String> = first.vars().to_vec();
        for i in 0..k {
            inames.push(format!("__s{i}"));
        }
        let iname_refs: Vec<&str> = inames.iter().map(|s| s.as_str()).collect();

        // Source series moved onto the fresh slots. Monomials of degree
        // beyond out_cap cannot contribute (targets have valuation >= 1).
        let mut work = TruncSeries::new(self.ring().clone(), &iname_refs, out_cap)?;
        for (mono, c) in self.iter() {
            if mono.deg() > out_cap {
                continue;
            }
            let mut e = vec![0usize; m + k];
            for i in 0..k {
                e[m + i] = mono.exp(i);
            }
            work.set_coeff_mono(Mono::from_exps(&e), c.clone());
        }

        // Targets embedded into the internal context (identity on axes 0..m).
        let embedded: Vec<TruncSeries<R>> = targets
            .iter()
            .map(|t| {
                t.truncate(out_cap)
                    .embed(&iname_refs, &(0..m).collect::<Vec<_>>())
            })
            .collect::<Result<_>>()?;

        for (i, target) in embedded.iter().enumerate() {
            work = eliminate_axis(&work, m + i, target)?;
        }

        // All source slots are gone; project back onto the target axes.
        let mut coeffs = BTreeMap::new();
        for (mono, c) in work.iter() {
            let mut e = vec![0usize; m];
            for (axis, slot) in e.iter_mut().enumerate() {
                *slot = mono.exp(axis);
            }
            for i in 0..k {
                debug_assert_eq!(mono.exp(m + i), 0);
            }
            coeffs.insert(Mono::from_exps(&e), c.clone());
        }
        Ok(TruncSeries::from_parts(
            self.ring().clone(),
            first.vars().to_vec(),
            out_cap,
            coeffs,
        ))
    }

    /// One-variable convenience: substitutes `target` for the single
    /// variable.
    pub fn substitute_one(&self, target: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        self.substitute(&[target])
    }

    /// Multiplicative inverse 1/f for f with unit constant term, by Newton
    /// iteration z <- z(2 - fz).
    pub fn mul_inverse(&self) -> Result<TruncSeries<R>> {
        let ring = self.ring().clone();
        let c0 = self.coeff(&vec![0; self.nvars()]);
        if !ring.is_unit(&c0) {
            return Err(Error::LeadingCoefficientNotUnit);
        }
        let vars: Vec<&str> = self.vars().iter().map(|s| s.as_str()).collect();
        let mut z = TruncSeries::constant(ring.clone(), &vars, self.cap(), ring.inv(&c0)?)?;
        let two = TruncSeries::constant(ring.clone(), &vars, self.cap(), ring.from_i64(2))?;
        let mut known = 1usize;
        while known <= self.cap() {
            known *= 2;
            let fz = self.mul(&z)?;
            z = z.mul(&two.sub(&fz)?)?;
        }
        Ok(z)
    }

    /// Compositional inverse of a one-variable series t with t(0) = 0 and
    /// t'(0) a unit: the unique s with t(s(T)) = T.
    pub fn comp_inverse(&self) -> Result<TruncSeries<R>> {
        if self.nvars() != 1 {
            return Err(Error::Invalid(
                "compositional inverse needs one variable".into(),
            ));
        }
        if !self.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm);
        }
        let ring = self.ring().clone();
        let t1 = self.coeff(&[1]);
        if !ring.is_unit(&t1) {
            return Err(Error::LeadingCoefficientNotUnit);
        }
        let t1_inv = ring.inv(&t1)?;
        let cap = self.cap();
        let vars: Vec<&str> = self.vars().iter().map(|s| s.as_str()).collect();

        // Newton with cap doubling: when t(s) = T through degree n, the
        // update s <- s - (t(s) - T) / t'(s) is exact through degree 2n.
        let mut s = TruncSeries::new(ring.clone(), &vars, 1.min(cap))?;
        s.set_coeff(&[1], t1_inv.clone());
        let mut n = 1usize;
        while n < cap {
            let m = (2 * n).min(cap);
            let t = self.truncate(m);
            let cur = s.assume_cap(m);
            let var = TruncSeries::var(ring.clone(), &vars, m, &vars[0])?;
            let defect = t.substitute_one(&cur)?.sub(&var)?;
            if defect.is_zero() {
                s = cur;
                n = m;
                continue;
            }
            let deriv = t.partial(0)?.substitute_one(&cur.truncate(m.saturating_sub(1)))?;
            // The padded top slot of the reciprocal never reaches degrees
            // <= m in the product: the defect vanishes through degree n >= 1.
            let recip = deriv.mul_inverse()?.assume_cap(m);
            s = cur.sub(&defect.mul(&recip)?)?;
            n = m;
        }
        Ok(s)
    }
}

/// Replaces `axis` by `target` inside `work` via Horner over the distinct
/// exponents of `axis`. `target` lives in the same internal context with
/// exponent zero on every elimination slot.
fn eliminate_axis<R: Ring>(
    work: &TruncSeries<R>,
    axis: usize,
    target: &TruncSeries<R>,
) -> Result<TruncSeries<R>> {
    let exps = work.axis_exponents(axis);
    if exps.is_empty() {
        return Ok(work.clone());
    }
    let mut acc = work.extract_axis_power(axis, exps[0]);
    for pair in exps.windows(2) {
        let gap = pair[0] - pair[1];
        acc = acc.mul(&target.pow(gap)?)?;
        acc = acc.add(&work.extract_axis_power(axis, pair[1]))?;
    }
    let last = *exps.last().expect("nonempty");
    if last > 0 {
        acc = acc.mul(&target.pow(last)?)?;
    }
    Ok(acc)
}

/// Recenters a one-variable series at w: the coefficients of
/// a(w + T) = a(w) + sum_{k>=1} b_k T^k are b_k = sum_{l>=0} C(k+l, l)
/// a_{k+l} w^l. Returns (b, a(w)).
///
/// The sum for b_k is truncated to the coefficients the input tracks; it is
/// exact when the input is a polynomial. `tail` receives each k and may
/// return an extra "zero of known precision" summand accounting for the
/// dropped tail; pass `|_| None` over exact rings.
pub fn recenter_with_tail<R: Ring>(
    a: &TruncSeries<R>,
    w: &R::Elem,
    mut tail: impl FnMut(usize) -> Option<R::Elem>,
) -> Result<(TruncSeries<R>, R::Elem)> {
    if a.nvars() != 1 {
        return Err(Error::Invalid("recentering needs one variable".into()));
    }
    let ring = a.ring().clone();
    let cap = a.cap();
    // Powers of w up to the cap.
    let mut wpow = Vec::with_capacity(cap + 1);
    wpow.push(ring.one());
    for _ in 1..=cap {
        wpow.push(ring.mul(wpow.last().expect("nonempty"), w));
    }

    let constant = {
        let mut acc = ring.zero();
        for (m, c) in a.iter() {
            acc = ring.add(&acc, &ring.mul(c, &wpow[m.deg()]));
        }
        if let Some(z) = tail(0) {
            acc = ring.add(&acc, &z);
        }
        acc
    };

    let vars: Vec<&str> = a.vars().iter().map(|s| s.as_str()).collect();
    let mut out = TruncSeries::new(ring.clone(), &vars, cap)?;
    for k in 1..=cap {
        let mut acc = ring.zero();
        for l in 0..=(cap - k) {
            let c = a.coeff(&[k + l]);
            if ring.is_exact() && ring.is_zero(&c) {
                continue;
            }
            let b = ring.from_bigint(&binomial((k + l) as u64, l as u64));
            acc = ring.add(&acc, &ring.mul(&ring.mul(&b, &c), &wpow[l]));
        }
        if let Some(z) = tail(k) {
            acc = ring.add(&acc, &z);
        }
        out.set_coeff(&[k], acc);
    }
    Ok((out, constant))
}
