//! Logarithms: strict isomorphisms to the additive law over the fraction
//! field, with the exponential cached. Includes the Honda and Lubin-Tate
//! logarithm families, the law <-> log conversions, and [a]-endomorphisms.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fgl::{FormalGroupLaw, Provenance};
use crate::local::{LocalField, Ord as LocalOrd};
use crate::ring::Ring;
use crate::series::TruncSeries;

/// A strict logarithm log = T + higher together with exp = log^{-1}.
#[derive(Clone, Debug)]
pub struct Logarithm<R: Ring> {
    log: TruncSeries<R>,
    exp: TruncSeries<R>,
}

impl<R: Ring> Logarithm<R> {
    /// Wraps a one-variable series as a logarithm; must be strict
    /// (zero constant term, leading coefficient exactly 1).
    pub fn from_series(log: TruncSeries<R>) -> Result<Self> {
        if log.nvars() != 1 {
            return Err(Error::Invalid("logarithm needs one variable".into()));
        }
        if !log.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm);
        }
        let ring = log.ring().clone();
        if !ring.eq_elem(&log.coeff(&[1]), &ring.one()) {
            return Err(Error::Invalid(
                "logarithm must be strict: leading coefficient 1".into(),
            ));
        }
        let exp = log.comp_inverse()?;
        Ok(Logarithm { log, exp })
    }

    pub fn log(&self) -> &TruncSeries<R> {
        &self.log
    }
    pub fn exp(&self) -> &TruncSeries<R> {
        &self.exp
    }
    pub fn ring(&self) -> &R {
        self.log.ring()
    }
    pub fn cap(&self) -> usize {
        self.log.cap()
    }
}

/// Honda's logarithm sum over k of p^{-k} T^{p^{nk}}, over an e = 1 field.
pub fn honda_log(field: &LocalField, n: u32, cap: usize) -> Result<Logarithm<LocalField>> {
    if field.e() != 1 {
        return Err(Error::Invalid(
            "the Honda logarithm lives over an unramified field".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Invalid("height parameter must be positive".into()));
    }
    let p_inv = field.inv_elem(&field.from_int(&BigInt::from(field.p())))?;
    let mut log = TruncSeries::new(field.clone(), &["T"], cap)?;
    let mut k = 0u32;
    loop {
        let deg = (field.p() as u128).checked_pow(n * k);
        match deg {
            Some(d) if (d as usize) <= cap => {
                log.set_coeff(&[d as usize], field.pow_elem(&p_inv, k as u64));
            }
            _ => break,
        }
        k += 1;
    }
    Logarithm::from_series(log)
}

/// The Lubin-Tate logarithm sum over k of pi^{-k} T^{q^k}, q the residue
/// field size.
pub fn lubin_tate_log(field: &LocalField, cap: usize) -> Result<Logarithm<LocalField>> {
    let q = (field.p() as u128).pow(field.f() as u32);
    let pi_inv = field.inv_elem(&field.pi())?;
    let mut log = TruncSeries::new(field.clone(), &["T"], cap)?;
    let mut k = 0u32;
    loop {
        match q.checked_pow(k) {
            Some(d) if (d as usize) <= cap => {
                log.set_coeff(&[d as usize], field.pow_elem(&pi_inv, k as u64));
            }
            _ => break,
        }
        k += 1;
    }
    Logarithm::from_series(log)
}

/// F(X, Y) = exp(log X + log Y). No integrality judgment is made here; use
/// [`check_integral`] when the construction promises an integral law.
pub fn law_from_log<R: Ring>(lg: &Logarithm<R>, cap: usize) -> Result<FormalGroupLaw<R>> {
    let cap = cap.min(lg.cap());
    let lx = lg.log().truncate(cap).embed(&["X", "Y"], &[0])?;
    let ly = lg.log().truncate(cap).embed(&["X", "Y"], &[1])?;
    let sum = lx.add(&ly)?;
    let f = lg.exp().truncate(cap).substitute(&[&sum])?;
    FormalGroupLaw::from_series(f, Provenance::FromLog)
}

/// Certifies that every coefficient is integral (pi-adic order >= 0). A
/// negative order is an integrality violation; a zero-to-precision entry
/// whose claim does not even reach order 0 cannot be certified at all.
pub fn check_integral(series: &TruncSeries<LocalField>) -> Result<()> {
    for (m, c) in series.iter() {
        match c.ord() {
            LocalOrd::Exact(v) if v < 0 => {
                return Err(Error::IntegralityViolation {
                    degree: m.deg(),
                    ord: v.to_string(),
                });
            }
            LocalOrd::AtLeast(b) if b < 0 => {
                return Err(Error::PrecisionExhausted);
            }
            _ => {}
        }
    }
    Ok(())
}

/// Extracts the logarithm of a law over a ring containing the rationals,
/// by integrating the normalized invariant differential:
/// log'(T) = 1 / (dF/dY)(T, 0).
pub fn log_from_law<R: Ring>(law: &FormalGroupLaw<R>) -> Result<Logarithm<R>> {
    let ring = law.ring().clone();
    let cap = law.cap();
    let fy = law.series().partial(1)?;
    let t = TruncSeries::var(ring.clone(), &["T"], fy.cap(), "T")?;
    let zero = TruncSeries::new(ring.clone(), &["T"], fy.cap(), )?;
    let g = fy.substitute(&[&t, &zero])?;
    let u = g.mul_inverse()?;
    let mut log = TruncSeries::new(ring.clone(), &["T"], cap)?;
    for k in 1..=cap {
        let c = u.coeff(&[k - 1]);
        if ring.is_exact() && ring.is_zero(&c) {
            continue;
        }
        let kk = ring.from_i64(k as i64);
        log.set_coeff(&[k], ring.mul(&c, &ring.inv(&kk)?));
    }
    Logarithm::from_series(log)
}

/// The endomorphism [a](T) = exp(a log(T)).
pub fn endo<R: Ring>(lg: &Logarithm<R>, a: &R::Elem) -> Result<TruncSeries<R>> {
    let scaled = lg.log().scale(a);
    lg.exp().substitute(&[&scaled])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RationalRing;
    use num_rational::BigRational;

    fn q5(prec: i64) -> LocalField {
        LocalField::unramified(5, 1, prec).unwrap()
    }

    #[test]
    fn honda_log_coefficients() {
        let f = q5(30);
        let lg = honda_log(&f, 1, 25).unwrap();
        // T + 5^{-1} T^5 + 5^{-2} T^25
        assert!(f.eq_to_prec(&lg.log().coeff(&[1]), &f.one()));
        let c5 = lg.log().coeff(&[5]);
        assert_eq!(c5.ord(), LocalOrd::Exact(-1));
        let c25 = lg.log().coeff(&[25]);
        assert_eq!(c25.ord(), LocalOrd::Exact(-2));
        assert!(f.eq_to_prec(
            &f.mul_elems(&c5, &f.from_int(&BigInt::from(5))),
            &f.one()
        ));
        // all other coefficients absent
        assert_eq!(lg.log().iter().count(), 3);
        // n = 2 keeps only T and T^25
        let lg2 = honda_log(&f, 2, 25).unwrap();
        assert_eq!(lg2.log().iter().count(), 2);
        assert_eq!(lg2.log().coeff(&[25]).ord(), LocalOrd::Exact(-1));
    }

    #[test]
    fn lubin_tate_log_ramified_orders() {
        // E(x) = x^2 - 5: q = 5, coefficient of T^5 is pi^{-1} with ord -1
        // (that is, -1/2 in multiples of ord(p) = 2).
        let base = crate::local::UnramifiedRing::new(5, 1, 30).unwrap();
        let eis = vec![
            crate::local::WittElem::from_i64_coords(&[-5]),
            crate::local::WittElem::from_i64_coords(&[0]),
        ];
        let field = LocalField::new(base, eis, 40).unwrap();
        let lg = lubin_tate_log(&field, 25).unwrap();
        let c5 = lg.log().coeff(&[5]);
        assert_eq!(c5.ord(), LocalOrd::Exact(-1));
        assert_eq!(c5.ord_over_e(&field), Some((-1, 2)));
        assert_eq!(lg.log().coeff(&[25]).ord(), LocalOrd::Exact(-2));
        // unramified Q_5: lubin_tate_log = honda_log(5, 1)
        let f = q5(30);
        let a = lubin_tate_log(&f, 25).unwrap();
        let b = honda_log(&f, 1, 25).unwrap();
        assert!(a.log().eq_to_cap(b.log()).unwrap());
    }

    #[test]
    fn law_from_trivial_log_is_additive() {
        let f = q5(20);
        let t = TruncSeries::var(f.clone(), &["T"], 10, "T").unwrap();
        let lg = Logarithm::from_series(t).unwrap();
        let law = law_from_log(&lg, 10).unwrap();
        let add = FormalGroupLaw::additive(f, 10).unwrap();
        assert!(law.series().eq_to_cap(add.series()).unwrap());
    }

    #[test]
    fn multiplicative_log_over_q() {
        // log = -log(1-T) = sum T^k/k has exp = 1 - e^{-T}... with the
        // opposite sign convention: log = sum (-1)^{k+1} T^k / k (the log of
        // 1+T) gives F = X + Y + XY.
        let mut l = TruncSeries::new(RationalRing, &["T"], 8).unwrap();
        for k in 1..=8i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            l.set_coeff(
                &[k as usize],
                BigRational::new(BigInt::from(sign), BigInt::from(k)),
            );
        }
        let lg = Logarithm::from_series(l).unwrap();
        let law = law_from_log(&lg, 8).unwrap();
        let mult = FormalGroupLaw::multiplicative(RationalRing, 8).unwrap();
        assert!(law.series().eq_to_cap(mult.series()).unwrap());
        assert!(law.verify_axioms().unwrap().all_pass());
    }

    #[test]
    fn log_extraction_inverts_law_from_log() {
        let f = q5(40);
        let lg = honda_log(&f, 1, 25).unwrap();
        let law = law_from_log(&lg, 25).unwrap();
        check_integral(law.series()).unwrap();
        let back = log_from_law(&law).unwrap();
        assert!(back.log().eq_to_cap(lg.log()).unwrap());
    }

    #[test]
    fn endo_on_multiplicative_law() {
        // [2] for X+Y+XY is (1+T)^2 - 1 = 2T + T^2.
        let mut l = TruncSeries::new(RationalRing, &["T"], 6).unwrap();
        for k in 1..=6i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            l.set_coeff(
                &[k as usize],
                BigRational::new(BigInt::from(sign), BigInt::from(k)),
            );
        }
        let lg = Logarithm::from_series(l).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        let e2 = endo(&lg, &two).unwrap();
        assert_eq!(e2.coeff(&[1]), two);
        assert_eq!(e2.coeff(&[2]), BigRational::from_integer(BigInt::from(1)));
        for d in 3..=6 {
            assert!(RationalRing.is_zero(&e2.coeff(&[d])), "degree {d}");
        }
        // [1] = id
        let one = BigRational::from_integer(BigInt::from(1));
        let e1 = endo(&lg, &one).unwrap();
        let ident = TruncSeries::var(RationalRing, &["T"], 6, "T").unwrap();
        assert!(e1.eq_to_cap(&ident).unwrap());
    }

    #[test]
    fn honda_law_is_integral() {
        let f = q5(40);
        let lg = honda_log(&f, 1, 25).unwrap();
        let law = law_from_log(&lg, 25).unwrap();
        check_integral(law.series()).unwrap();
        // its axioms pass
        assert!(law.verify_axioms().unwrap().all_pass());
    }

    #[test]
    fn integrality_violation_is_reported() {
        // log = T + 5^{-1} T^2 is not p-typical and its law is not integral:
        // F = exp(logX + logY) has coefficient of XY equal to -2/5... the
        // check must flag a negative order at degree 2.
        let f = q5(30);
        let mut l = TruncSeries::new(f.clone(), &["T"], 4).unwrap();
        l.set_coeff(&[1], f.one());
        let five_inv = f.inv_elem(&f.from_int(&BigInt::from(5))).unwrap();
        l.set_coeff(&[2], five_inv);
        let lg = Logarithm::from_series(l).unwrap();
        let law = law_from_log(&lg, 4).unwrap();
        let err = check_integral(law.series()).unwrap_err();
        assert!(matches!(err, Error::IntegralityViolation { degree: 2, .. }));
    }
}
