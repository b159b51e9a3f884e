//! One-dimensional commutative formal group laws over a coefficient ring:
//! axiom verification, conjugation, formal sums and inverses, logarithms,
//! the Frobenius-polynomial construction, p-typical coordinates, heights,
//! and isomorphism search.

mod araki;
mod frobenius;
mod height;
mod io;
mod iso;
mod log;

pub use araki::{araki_from_ptypical, classifying_value, log_from_araki, ptypical_from_araki};
pub use io::{build_law, build_series, law_doc, series_doc, LawDoc, SeriesDoc, TermDoc};
pub use frobenius::{
    frobenius_equivariance, lubin_tate_from_frobenius, lubin_tate_with_frobenius,
    standard_frobenius,
};
pub use height::{
    height_mod_pi, height_of_p_series, p_series_via_log, p_series_via_sum, reduce_law_mod_pi,
    reduce_series_mod_pi, require_height, HeightVerdict,
};
pub use iso::{find_isomorphism, is_homomorphism, IsoOutcome};
pub use log::{
    check_integral, endo, honda_log, law_from_log, log_from_law, lubin_tate_log, Logarithm,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::TruncSeries;

/// How a law was obtained; carried into serialized output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromLog,
    FromFrobenius,
    FromAraki,
    Raw,
}

/// A (candidate) formal group law: a series in X, Y truncated at the degree
/// cap. Construction checks shape only; the axioms are verified on demand so
/// that invalid candidates can be diagnosed rather than rejected opaquely.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw<R: Ring> {
    series: TruncSeries<R>,
    provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomStatus {
    Pass,
    /// First failing monomial in graded order, with the offending residual
    /// coefficient printed through the ring.
    Fail {
        monomial: Vec<usize>,
        residual: String,
    },
}

impl AxiomStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, AxiomStatus::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub unit: AxiomStatus,
    pub commutative: AxiomStatus,
    pub associative: AxiomStatus,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.unit.is_pass() && self.commutative.is_pass() && self.associative.is_pass()
    }
}

impl<R: Ring> FormalGroupLaw<R> {
    /// Wraps a series in X, Y as a law candidate.
    pub fn from_series(series: TruncSeries<R>, provenance: Provenance) -> Result<Self> {
        if series.vars() != ["X", "Y"] {
            return Err(Error::VariableMismatch(
                vec!["X".into(), "Y".into()],
                series.vars().to_vec(),
            ));
        }
        if series.cap() < 1 {
            return Err(Error::Invalid("degree cap must be at least 1".into()));
        }
        Ok(FormalGroupLaw {
            series,
            provenance,
        })
    }

    pub fn additive(ring: R, cap: usize) -> Result<Self> {
        let mut s = TruncSeries::new(ring.clone(), &["X", "Y"], cap)?;
        s.set_coeff(&[1, 0], ring.one());
        s.set_coeff(&[0, 1], ring.one());
        Self::from_series(s, Provenance::Raw)
    }

    pub fn multiplicative(ring: R, cap: usize) -> Result<Self> {
        let mut s = TruncSeries::new(ring.clone(), &["X", "Y"], cap)?;
        s.set_coeff(&[1, 0], ring.one());
        s.set_coeff(&[0, 1], ring.one());
        s.set_coeff(&[1, 1], ring.one());
        Self::from_series(s, Provenance::Raw)
    }

    pub fn series(&self) -> &TruncSeries<R> {
        &self.series
    }
    pub fn ring(&self) -> &R {
        self.series.ring()
    }
    pub fn cap(&self) -> usize {
        self.series.cap()
    }
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Checks the unit, commutativity and associativity axioms to the cap,
    /// reporting the first failing monomial of each.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let ring = self.ring().clone();
        let cap = self.cap();

        let unit = {
            let x = TruncSeries::var(ring.clone(), &["X"], cap, "X")?;
            let zero = TruncSeries::new(ring.clone(), &["X"], cap)?;
            let fx0 = self.series.substitute(&[&x, &zero])?;
            let f0x = self.series.substitute(&[&zero, &x])?;
            let dx = fx0.sub(&x)?;
            let dy = f0x.sub(&x)?;
            match dx
                .first_failing(|c| ring.is_zero(c))
                .or_else(|| dy.first_failing(|c| ring.is_zero(c)))
            {
                None => AxiomStatus::Pass,
                Some((m, c)) => AxiomStatus::Fail {
                    monomial: m.exps(1),
                    residual: ring.fmt_elem(&c),
                },
            }
        };

        let commutative = {
            let swapped = self.series.embed(&["X", "Y"], &[1, 0])?;
            match self
                .series
                .sub(&swapped)?
                .first_failing(|c| ring.is_zero(c))
            {
                None => AxiomStatus::Pass,
                Some((m, c)) => AxiomStatus::Fail {
                    monomial: m.exps(2),
                    residual: ring.fmt_elem(&c),
                },
            }
        };

        let associative = {
            let vars3 = ["X", "Y", "Z"];
            let x3 = TruncSeries::var(ring.clone(), &vars3, cap, "X")?;
            let z3 = TruncSeries::var(ring.clone(), &vars3, cap, "Z")?;
            let fxy = self.series.embed(&vars3, &[0, 1])?;
            let fyz = self.series.embed(&vars3, &[1, 2])?;
            let lhs = self.series.substitute(&[&fxy, &z3])?;
            let rhs = self.series.substitute(&[&x3, &fyz])?;
            match lhs.sub(&rhs)?.first_failing(|c| ring.is_zero(c)) {
                None => AxiomStatus::Pass,
                Some((m, c)) => AxiomStatus::Fail {
                    monomial: m.exps(3),
                    residual: ring.fmt_elem(&c),
                },
            }
        };

        Ok(AxiomReport {
            unit,
            commutative,
            associative,
        })
    }

    /// Fails with a specific error on the first broken axiom.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.verify_axioms()?;
        if let AxiomStatus::Fail { .. } = report.unit {
            return Err(Error::UnitMissing);
        }
        if let AxiomStatus::Fail { monomial, .. } = report.commutative {
            return Err(Error::NotCommutative(monomial[0], monomial[1]));
        }
        if let AxiomStatus::Fail { monomial, .. } = report.associative {
            return Err(Error::NotAssociative(monomial[0], monomial[1], monomial[2]));
        }
        Ok(())
    }

    /// F(s, u) for series with zero constant term in any common context.
    pub fn formal_sum2(
        &self,
        s: &TruncSeries<R>,
        u: &TruncSeries<R>,
    ) -> Result<TruncSeries<R>> {
        self.series.substitute(&[s, u])
    }

    /// Left fold of `formal_sum2` over the list.
    pub fn formal_sum(&self, terms: &[TruncSeries<R>]) -> Result<TruncSeries<R>> {
        let mut iter = terms.iter();
        let mut acc = iter
            .next()
            .ok_or_else(|| Error::Invalid("formal sum of no terms".into()))?
            .clone();
        for t in iter {
            acc = self.formal_sum2(&acc, t)?;
        }
        Ok(acc)
    }

    /// The formal inverse: the unique i(T) = -T + ... with F(T, i(T)) = 0.
    pub fn formal_inverse(&self) -> Result<TruncSeries<R>> {
        let ring = self.ring().clone();
        let cap = self.cap();
        let t = TruncSeries::var(ring.clone(), &["T"], cap, "T")?;
        let mut inv = t.neg();
        for d in 2..=cap {
            let defect = self.formal_sum2(&t.truncate(d), &inv.truncate(d))?;
            let c = defect.coeff(&[d]);
            if ring.is_exact() && ring.is_zero(&c) {
                continue;
            }
            // F(T, i + cT^d)_d = defect_d + c': correction subtracts the
            // defect coefficient (the Y-partial of F at the origin is 1).
            let prev = inv.coeff(&[d]);
            inv.set_coeff(&[d], ring.sub(&prev, &c));
        }
        Ok(inv)
    }

    /// F(s, i(u)): formal difference.
    pub fn formal_diff(
        &self,
        s: &TruncSeries<R>,
        u: &TruncSeries<R>,
    ) -> Result<TruncSeries<R>> {
        let inv = self.formal_inverse()?;
        let iu = inv.substitute_one(u)?;
        self.formal_sum2(s, &iu)
    }

    /// The conjugate law F^t = t^{-1}(F(t(X), t(Y))) for an invertible
    /// coordinate change t (t(0) = 0, unit slope).
    pub fn conjugate(&self, t: &TruncSeries<R>) -> Result<FormalGroupLaw<R>> {
        if t.nvars() != 1 {
            return Err(Error::Invalid("coordinate change needs one variable".into()));
        }
        if !t.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm);
        }
        if !self.ring().is_unit(&t.coeff(&[1])) {
            return Err(Error::LeadingCoefficientNotUnit);
        }
        let cap = self.cap().min(t.cap());
        let tinv = t.comp_inverse()?;
        let tx = t.truncate(cap).embed(&["X", "Y"], &[0])?;
        let ty = t.truncate(cap).embed(&["X", "Y"], &[1])?;
        let inner = self.series.substitute(&[&tx, &ty])?;
        let outer = tinv.substitute(&[&inner])?;
        FormalGroupLaw::from_series(outer, Provenance::Raw)
    }

    /// True when t conjugates F to itself.
    pub fn is_automorphism(&self, t: &TruncSeries<R>) -> Result<bool> {
        Ok(self.conjugate(t)?.series().eq_to_cap(&self.series)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntegerRing, SmallRing};
    use num_bigint::BigInt;

    #[test]
    fn additive_and_multiplicative_pass_axioms() {
        for law in [
            FormalGroupLaw::additive(IntegerRing, 6).unwrap(),
            FormalGroupLaw::multiplicative(IntegerRing, 6).unwrap(),
        ] {
            let report = law.verify_axioms().unwrap();
            assert!(report.all_pass(), "{report:?}");
            law.require_valid().unwrap();
        }
    }

    #[test]
    fn unit_axiom_failure_is_located() {
        // X + Y + X^2 fails the unit axiom at degree 2.
        let mut s = TruncSeries::new(IntegerRing, &["X", "Y"], 4).unwrap();
        s.set_coeff(&[1, 0], BigInt::from(1));
        s.set_coeff(&[0, 1], BigInt::from(1));
        s.set_coeff(&[2, 0], BigInt::from(1));
        let law = FormalGroupLaw::from_series(s, Provenance::Raw).unwrap();
        let report = law.verify_axioms().unwrap();
        assert_eq!(
            report.unit,
            AxiomStatus::Fail {
                monomial: vec![2],
                residual: "1".into()
            }
        );
        assert!(matches!(law.require_valid(), Err(Error::UnitMissing)));
    }

    #[test]
    fn associativity_failure_is_located() {
        // X + Y + XY + X^2 Y^2 breaks associativity. Hand expansion of the
        // degree-4 slices: F(F(X,Y),Z) gives X^2Y^2 + X^2Z^2 + 2XYZ^2 +
        // Y^2Z^2 while F(X,F(Y,Z)) gives Y^2Z^2 + X^2Y^2 + 2X^2YZ + X^2Z^2,
        // so the first defect is -2 X^2YZ.
        let mut s = TruncSeries::new(IntegerRing, &["X", "Y"], 6).unwrap();
        s.set_coeff(&[1, 0], BigInt::from(1));
        s.set_coeff(&[0, 1], BigInt::from(1));
        s.set_coeff(&[1, 1], BigInt::from(1));
        s.set_coeff(&[2, 2], BigInt::from(1));
        let law = FormalGroupLaw::from_series(s, Provenance::Raw).unwrap();
        let report = law.verify_axioms().unwrap();
        assert!(report.unit.is_pass());
        assert!(report.commutative.is_pass());
        assert_eq!(
            report.associative,
            AxiomStatus::Fail {
                monomial: vec![2, 1, 1],
                residual: "-2".into()
            }
        );
    }

    #[test]
    fn conjugate_of_additive_law_frozen() {
        // Frozen: conjugating X+Y by t = T+T^2 at cap 3 gives
        // X + Y - 2XY + 4X^2 Y + 4X Y^2.
        let law = FormalGroupLaw::additive(IntegerRing, 3).unwrap();
        let mut t = TruncSeries::new(IntegerRing, &["T"], 3).unwrap();
        t.set_coeff(&[1], BigInt::from(1));
        t.set_coeff(&[2], BigInt::from(1));
        let g = law.conjugate(&t).unwrap();
        assert_eq!(g.series().coeff(&[1, 0]), BigInt::from(1));
        assert_eq!(g.series().coeff(&[0, 1]), BigInt::from(1));
        assert_eq!(g.series().coeff(&[1, 1]), BigInt::from(-2));
        assert_eq!(g.series().coeff(&[2, 1]), BigInt::from(4));
        assert_eq!(g.series().coeff(&[1, 2]), BigInt::from(4));
        let report = g.verify_axioms().unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn conjugation_is_a_right_action() {
        // (F^t)^s = F^{t o s} for a couple of concrete coordinate changes.
        let law = FormalGroupLaw::multiplicative(IntegerRing, 5).unwrap();
        let mut t = TruncSeries::new(IntegerRing, &["T"], 5).unwrap();
        t.set_coeff(&[1], BigInt::from(1));
        t.set_coeff(&[2], BigInt::from(3));
        let mut s = TruncSeries::new(IntegerRing, &["T"], 5).unwrap();
        s.set_coeff(&[1], BigInt::from(-1));
        s.set_coeff(&[3], BigInt::from(2));
        let lhs = law.conjugate(&t).unwrap().conjugate(&s).unwrap();
        let ts = t.substitute_one(&s).unwrap();
        let rhs = law.conjugate(&ts).unwrap();
        assert!(lhs.series().eq_to_cap(rhs.series()).unwrap());
        // identity coordinate change is neutral
        let ident = TruncSeries::var(IntegerRing, &["T"], 5, "T").unwrap();
        assert!(law
            .conjugate(&ident)
            .unwrap()
            .series()
            .eq_to_cap(law.series())
            .unwrap());
    }

    #[test]
    fn formal_sum_and_inverse() {
        let law = FormalGroupLaw::multiplicative(IntegerRing, 5).unwrap();
        let t = TruncSeries::var(IntegerRing, &["T"], 5, "T").unwrap();
        // T +_F T = 2T + T^2 for the multiplicative law
        let s = law.formal_sum2(&t, &t).unwrap();
        assert_eq!(s.coeff(&[1]), BigInt::from(2));
        assert_eq!(s.coeff(&[2]), BigInt::from(1));
        // s +_F 0 = s
        let zero = TruncSeries::new(IntegerRing, &["T"], 5).unwrap();
        assert!(law.formal_sum2(&s, &zero).unwrap().eq_to_cap(&s).unwrap());
        // T +_F i(T) = 0; for the multiplicative law i(T) is the alternating
        // geometric series -T + T^2 - T^3 + ...
        let inv = law.formal_inverse().unwrap();
        for d in 1..=5usize {
            let expect = if d % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coeff(&[d]), BigInt::from(expect), "degree {d}");
        }
        assert!(law.formal_sum2(&t, &inv).unwrap().is_zero());
        // formal difference of equal arguments vanishes
        assert!(law.formal_diff(&s, &s).unwrap().is_zero());
    }

    #[test]
    fn automorphism_detection() {
        let law = FormalGroupLaw::additive(IntegerRing, 4).unwrap();
        let ident = TruncSeries::var(IntegerRing, &["T"], 4, "T").unwrap();
        assert!(law.is_automorphism(&ident).unwrap());
        // scaling by -1 is an automorphism of the additive law
        let minus = ident.neg();
        assert!(law.is_automorphism(&minus).unwrap());
        // T + T^2 is not
        let mut t = TruncSeries::new(IntegerRing, &["T"], 4).unwrap();
        t.set_coeff(&[1], BigInt::from(1));
        t.set_coeff(&[2], BigInt::from(1));
        assert!(!law.is_automorphism(&t).unwrap());
    }

    #[test]
    fn axioms_over_small_rings() {
        // multiplicative law reduced mod 5 still passes
        let r = SmallRing::gf(5).unwrap();
        let law = FormalGroupLaw::multiplicative(r, 10).unwrap();
        assert!(law.verify_axioms().unwrap().all_pass());
    }
}
