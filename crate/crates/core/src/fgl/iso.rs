//! Strict isomorphisms between laws, solved degree by degree. A candidate
//! t = T + t_2 T^2 + ... must satisfy t(F(X,Y)) = G(t(X), t(Y)); adding
//! t_d shifts the degree-d defect by t_d [(X+Y)^d - X^d - Y^d], so each
//! t_d is forced by one binomial pivot and the rest of the slice either
//! agrees or obstructs. Over residue characteristic p the pivot polynomial
//! vanishes in degrees p^k, where t_{p^k} is a free parameter: the minimal
//! lift sets it to zero, and a surviving defect there is a genuine
//! obstruction, not a solver failure.

use num_bigint::BigInt;
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::ring::Ring;
use crate::series::TruncSeries;

#[derive(Clone, Debug)]
pub enum IsoOutcome<R: Ring> {
    /// A strict isomorphism from the first law to the second, valid through
    /// the shared cap.
    Found { t: TruncSeries<R> },
    /// No strict isomorphism exists: the first unresolvable defect.
    Obstructed { degree: usize, residual: String },
}

impl<R: Ring> IsoOutcome<R> {
    pub fn found(self) -> Option<TruncSeries<R>> {
        match self {
            IsoOutcome::Found { t } => Some(t),
            IsoOutcome::Obstructed { .. } => None,
        }
    }
}

/// The defect t(F) - G(t x t) through degree `cap`.
fn defect<R: Ring>(
    t: &TruncSeries<R>,
    f: &TruncSeries<R>,
    g: &TruncSeries<R>,
    cap: usize,
) -> Result<TruncSeries<R>> {
    let t = t.truncate(cap);
    let f = f.truncate(cap);
    let g = g.truncate(cap);
    let vars: Vec<&str> = vec!["X", "Y"];
    let tx = t.embed(&vars, &[0])?;
    let ty = t.embed(&vars, &[1])?;
    let lhs = t.substitute(&[&f])?;
    let rhs = g.substitute(&[&tx, &ty])?;
    lhs.sub(&rhs)
}

/// Searches for a strict isomorphism t with t(F(X,Y)) = G(t(X), t(Y)).
/// Free parameters take the minimal lift (zero), so the answer is
/// deterministic. The final full-cap defect check is what separates
/// `Found` from `Obstructed`; per-degree solving alone cannot, since a
/// slice may be inconsistent away from the pivot monomial.
pub fn find_isomorphism<R: Ring>(
    from: &FormalGroupLaw<R>,
    to: &FormalGroupLaw<R>,
) -> Result<IsoOutcome<R>> {
    let ring = from.ring().clone();
    if &ring != to.ring() {
        return Err(Error::RingMismatch(ring.name(), to.ring().name()));
    }
    let cap = from.cap().min(to.cap());
    let f = from.series().truncate(cap);
    let g = to.series().truncate(cap);
    let mut t = TruncSeries::var(ring.clone(), &["T"], cap, "T")?;

    for d in 2..=cap {
        let r = defect(&t, &f, &g, d)?;
        // Pivot on a mixed binomial, preferring a unit.
        let mut pivot: Option<(usize, R::Elem)> = None;
        for i in 1..d {
            let b = ring.from_bigint(&binomial(BigInt::from(d), BigInt::from(i)));
            if ring.is_zero(&b) {
                continue;
            }
            if ring.is_unit(&b) {
                pivot = Some((i, b));
                break;
            }
            if pivot.is_none() {
                pivot = Some((i, b));
            }
        }
        let Some((i, b)) = pivot else {
            // every mixed binomial vanishes: free parameter, minimal lift
            continue;
        };
        let rd = r.coeff(&[i, d - i]);
        if ring.is_zero(&rd) {
            continue;
        }
        let td = ring.neg(&ring.mul(&rd, &ring.inv(&b)?));
        t.set_coeff(&[d], td);
    }

    let r = defect(&t, &f, &g, cap)?;
    if let Some((m, c)) = r.first_failing(|c| ring.is_zero(c)) {
        return Ok(IsoOutcome::Obstructed {
            degree: m.deg(),
            residual: ring.fmt_elem(&c),
        });
    }
    Ok(IsoOutcome::Found { t })
}

/// Whether t(F(X,Y)) = G(t(X), t(Y)) through the shared cap. t need only
/// be a series with zero constant term; [p] into the same law is the
/// standard example.
pub fn is_homomorphism<R: Ring>(
    t: &TruncSeries<R>,
    from: &FormalGroupLaw<R>,
    to: &FormalGroupLaw<R>,
) -> Result<bool> {
    if t.nvars() != 1 {
        return Err(Error::VariableMismatch(
            t.vars().to_vec(),
            vec!["T".into()],
        ));
    }
    if !t.has_zero_constant_term() {
        return Err(Error::NonzeroConstantTerm);
    }
    let ring = from.ring().clone();
    if &ring != to.ring() || &ring != t.ring() {
        return Err(Error::RingMismatch(ring.name(), t.ring().name()));
    }
    let cap = t.cap().min(from.cap()).min(to.cap());
    let r = defect(t, from.series(), to.series(), cap)?;
    Ok(r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::{
        height_mod_pi, law_from_log, lubin_tate_from_frobenius, lubin_tate_log, p_series_via_sum,
        HeightVerdict,
    };
    use crate::local::LocalField;
    use crate::ring::SmallRing;

    fn q5(prec: i64) -> LocalField {
        LocalField::unramified(5, 1, prec).unwrap()
    }

    #[test]
    fn identity_on_equal_laws() {
        let field = q5(30);
        let law = FormalGroupLaw::multiplicative(field.clone(), 10).unwrap();
        let t = find_isomorphism(&law, &law).unwrap().found().unwrap();
        let id = TruncSeries::var(field.clone(), &["T"], 10, "T").unwrap();
        assert!(t.eq_to_cap(&id).unwrap());
    }

    #[test]
    fn additive_to_multiplicative_is_exponential() {
        // t(X + Y) = tX + tY + tX tY forces t = e^T - 1.
        let field = q5(40);
        let add = FormalGroupLaw::additive(field.clone(), 12).unwrap();
        let mult = FormalGroupLaw::multiplicative(field.clone(), 12).unwrap();
        let t = find_isomorphism(&add, &mult).unwrap().found().unwrap();
        assert!(is_homomorphism(&t, &add, &mult).unwrap());
        let mut factorial = 1i64;
        for d in 2..=12 {
            factorial *= d as i64;
            let expect = field
                .inv_elem(&field.from_int(&BigInt::from(factorial)))
                .unwrap();
            assert!(
                field.eq_to_prec(&t.coeff(&[d]), &expect),
                "coefficient of T^{d}"
            );
        }
    }

    #[test]
    fn two_lubin_tate_constructions_are_strictly_isomorphic() {
        let field = q5(48);
        let via_log = law_from_log(&lubin_tate_log(&field, 15).unwrap(), 15).unwrap();
        let (via_frob, _) = lubin_tate_from_frobenius(&field, 15).unwrap();
        let t = find_isomorphism(&via_log, &via_frob)
            .unwrap()
            .found()
            .unwrap();
        assert!(is_homomorphism(&t, &via_log, &via_frob).unwrap());
        // The constructions genuinely differ, so t is not the identity.
        let id = TruncSeries::var(field.clone(), &["T"], 15, "T").unwrap();
        assert!(!t.eq_to_cap(&id).unwrap());
        // Both reductions have height 1, as an isomorphism demands.
        assert_eq!(height_mod_pi(&via_log).unwrap(), HeightVerdict::Finite(1));
        assert_eq!(height_mod_pi(&via_frob).unwrap(), HeightVerdict::Finite(1));
    }

    #[test]
    fn obstruction_over_residue_field_at_first_p_power() {
        // Additive and multiplicative laws over F_5 have different heights;
        // the defect survives exactly at degree 5, where t_5 is free.
        let k = SmallRing::gf(5).unwrap();
        let add = FormalGroupLaw::additive(k.clone(), 8).unwrap();
        let mult = FormalGroupLaw::multiplicative(k.clone(), 8).unwrap();
        match find_isomorphism(&add, &mult).unwrap() {
            IsoOutcome::Obstructed { degree, .. } => assert_eq!(degree, 5),
            IsoOutcome::Found { .. } => panic!("laws of different height"),
        }
    }

    #[test]
    fn p_series_is_an_endomorphism() {
        let field = q5(30);
        let mult = FormalGroupLaw::multiplicative(field.clone(), 12).unwrap();
        let ps = p_series_via_sum(&mult, 5).unwrap();
        assert!(is_homomorphism(&ps, &mult, &mult).unwrap());
        // but T itself is not a homomorphism between different laws
        let add = FormalGroupLaw::additive(field.clone(), 12).unwrap();
        let id = TruncSeries::var(field.clone(), &["T"], 12, "T").unwrap();
        assert!(!is_homomorphism(&id, &add, &mult).unwrap());
    }
}
