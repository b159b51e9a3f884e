//! Brute-force enumeration of truncated formal-group-law buds over small
//! finite rings, the coordinate-change action on them, and orbit /
//! stabilizer / groupoid bookkeeping. Everything here is an independent
//! oracle for the series and fgl modules: no cleverness, just complete
//! deterministic searches over table-backed rings.
//!
//! A bud of degree d is a two-variable law X + Y + sum c_ij X^i Y^j
//! carried exactly to total degree d; only the symmetric coefficient
//! slots (i <= j) are stored. A coordinate change is t_0 T + ... +
//! t_{d-1} T^d with t_0 a unit. Buds and changes are plain index vectors
//! over a [`SmallRing`]; the ring handle travels alongside, as with
//! series over their coefficient rings.

mod enumerate;
mod orbits;

pub use enumerate::{enumerate_buds, enumerate_coordchanges};
pub use orbits::{
    act, groupoid_report, orbit_and_stabilizer, GroupoidChecks, GroupoidReport, OrbitStab,
    OrbitSummary,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgl::{FormalGroupLaw, Provenance};
use crate::ring::{Ring, SmallRing};
use crate::series::TruncSeries;

pub const MIN_DEG: usize = 2;
pub const MAX_DEG: usize = 4;

/// Rings the enumerators accept, in serializable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiniteRingSpec {
    Zmod { m: u64 },
    Gf { q: u64 },
}

impl FiniteRingSpec {
    pub fn build(&self) -> Result<SmallRing> {
        match self {
            FiniteRingSpec::Zmod { m } => SmallRing::zmod(*m),
            FiniteRingSpec::Gf { q } => SmallRing::gf(*q),
        }
    }
}

fn check_degree(d: usize) -> Result<()> {
    if !(MIN_DEG..=MAX_DEG).contains(&d) {
        return Err(Error::Invalid(format!(
            "degree cap {d} outside the supported range {MIN_DEG}..={MAX_DEG}"
        )));
    }
    Ok(())
}

/// The free coefficient slots (i, j) with 1 <= i <= j and i + j <= d, in
/// graded order. Commutativity makes these a complete parametrization of
/// bud candidates.
pub fn coeff_slots(d: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::new();
    for total in 2..=d {
        for i in 1..=total / 2 {
            slots.push((i, total - i));
        }
    }
    slots.sort_by_key(|&(i, j)| (i + j, i));
    slots
}

/// A degree-d law bud: coefficient indices for each slot of
/// [`coeff_slots`], over a ring supplied at use sites.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bud {
    pub d: usize,
    pub coeffs: Vec<u32>,
}

impl Bud {
    pub fn new(ring: &SmallRing, d: usize, coeffs: Vec<u32>) -> Result<Bud> {
        check_degree(d)?;
        let want = coeff_slots(d).len();
        if coeffs.len() != want {
            return Err(Error::Invalid(format!(
                "degree {d} bud takes {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= ring.size()) {
            return Err(Error::Invalid("coefficient index out of ring range".into()));
        }
        Ok(Bud { d, coeffs })
    }

    /// X + Y plus the symmetric coefficient terms, capped at d.
    pub fn to_series(&self, ring: &SmallRing) -> Result<TruncSeries<SmallRing>> {
        let mut s = TruncSeries::new(ring.clone(), &["X", "Y"], self.d)?;
        s.set_coeff(&[1, 0], ring.one());
        s.set_coeff(&[0, 1], ring.one());
        for (&(i, j), &c) in coeff_slots(self.d).iter().zip(&self.coeffs) {
            s.set_coeff(&[i, j], c);
            if i != j {
                s.set_coeff(&[j, i], c);
            }
        }
        Ok(s)
    }

    pub fn to_law(&self, ring: &SmallRing) -> Result<FormalGroupLaw<SmallRing>> {
        FormalGroupLaw::from_series(self.to_series(ring)?, Provenance::Raw)
    }

    /// Reads a bud off any series in X, Y: the linear part must be
    /// exactly X + Y, coefficients must be symmetric, and nothing else
    /// may survive below the cap.
    pub fn from_series(s: &TruncSeries<SmallRing>, d: usize) -> Result<Bud> {
        check_degree(d)?;
        if s.vars() != ["X", "Y"] {
            return Err(Error::VariableMismatch(
                vec!["X".into(), "Y".into()],
                s.vars().to_vec(),
            ));
        }
        if s.cap() < d {
            return Err(Error::DegreeCapTooSmall {
                cap: s.cap(),
                need: d,
            });
        }
        let ring = s.ring();
        let t = s.truncate(d);
        let slots = coeff_slots(d);
        let mut coeffs = Vec::with_capacity(slots.len());
        for &(i, j) in &slots {
            let c = t.coeff(&[i, j]);
            if !ring.eq_elem(&c, &t.coeff(&[j, i])) {
                return Err(Error::NotCommutative(i, j));
            }
            coeffs.push(c);
        }
        // everything off the slot pattern must vanish
        let bud = Bud { d, coeffs };
        let shaped = bud.to_series(ring)?;
        if let Some((m, c)) = t.sub(&shaped)?.first_failing(|c| ring.is_zero(c)) {
            return Err(Error::Invalid(format!(
                "series is not a bud: stray {} at {:?}",
                ring.fmt_elem(&c),
                m.exps(2)
            )));
        }
        Ok(bud)
    }

    pub fn display(&self, ring: &SmallRing) -> Result<String> {
        Ok(self.to_series(ring)?.to_text())
    }
}

/// A truncated coordinate change t_0 T + t_1 T^2 + ... + t_{d-1} T^d,
/// t_0 a unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordChange {
    pub d: usize,
    pub coeffs: Vec<u32>,
}

impl CoordChange {
    pub fn new(ring: &SmallRing, d: usize, coeffs: Vec<u32>) -> Result<CoordChange> {
        check_degree(d)?;
        if coeffs.len() != d {
            return Err(Error::Invalid(format!(
                "degree {d} coordinate change takes {d} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= ring.size()) {
            return Err(Error::Invalid("coefficient index out of ring range".into()));
        }
        if !ring.is_unit(&coeffs[0]) {
            return Err(Error::LeadingCoefficientNotUnit);
        }
        Ok(CoordChange { d, coeffs })
    }

    pub fn identity(ring: &SmallRing, d: usize) -> Result<CoordChange> {
        let mut coeffs = vec![0u32; d];
        coeffs[0] = ring.one();
        CoordChange::new(ring, d, coeffs)
    }

    pub fn to_series(&self, ring: &SmallRing) -> Result<TruncSeries<SmallRing>> {
        let mut s = TruncSeries::new(ring.clone(), &["T"], self.d)?;
        for (k, &c) in self.coeffs.iter().enumerate() {
            s.set_coeff(&[k + 1], c);
        }
        Ok(s)
    }

    pub fn from_series(s: &TruncSeries<SmallRing>, d: usize) -> Result<CoordChange> {
        check_degree(d)?;
        if s.nvars() != 1 {
            return Err(Error::Invalid("coordinate change needs one variable".into()));
        }
        if !s.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm);
        }
        if s.cap() < d {
            return Err(Error::DegreeCapTooSmall {
                cap: s.cap(),
                need: d,
            });
        }
        let ring = s.ring();
        let coeffs: Vec<u32> = (1..=d).map(|k| s.coeff(&[k])).collect();
        CoordChange::new(ring, d, coeffs)
    }

    /// (self compose other)(T) = self(other(T)); with the right action
    /// F^t this satisfies act(s, act(t, F)) = act(t compose s, F).
    pub fn compose(&self, other: &CoordChange, ring: &SmallRing) -> Result<CoordChange> {
        if self.d != other.d {
            return Err(Error::Invalid("degree mismatch in composition".into()));
        }
        let s = self.to_series(ring)?.substitute(&[&other.to_series(ring)?])?;
        CoordChange::from_series(&s, self.d)
    }

    pub fn inverse(&self, ring: &SmallRing) -> Result<CoordChange> {
        CoordChange::from_series(&self.to_series(ring)?.comp_inverse()?, self.d)
    }

    pub fn display(&self, ring: &SmallRing) -> Result<String> {
        Ok(self.to_series(ring)?.to_text())
    }
}
