//! Height of the special fibre. Over the residue field the multiplication
//! by p is either zero through the cap or begins in degree p^h; that h is
//! the height. Two independent routes compute the [p]-series: the p-fold
//! formal sum of the law, and exp(p log T) when a logarithm is on hand.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgl::log::{endo, Logarithm};
use crate::fgl::FormalGroupLaw;
use crate::local::LocalField;
use crate::ring::{Ring, SmallRing};
use crate::series::TruncSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightVerdict {
    /// The [p]-series survives reduction; its first term sits in degree p^h.
    Finite(u32),
    /// [p] vanishes mod pi through the truncation cap. Consistent with
    /// infinite height but certified only as far as the cap.
    InfiniteToCap,
}

impl std::fmt::Display for HeightVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HeightVerdict::Finite(h) => write!(f, "{h}"),
            HeightVerdict::InfiniteToCap => write!(f, "infinite to cap"),
        }
    }
}

/// Reduces coefficientwise to the residue field. Fails if any coefficient
/// is non-integral or has no evidence left.
pub fn reduce_series_mod_pi(s: &TruncSeries<LocalField>) -> Result<TruncSeries<SmallRing>> {
    let field = s.ring().clone();
    let k = field.residue_ring()?;
    let kk = k.clone();
    s.map_ring(k, move |c| {
        let coords = field.residue(c)?;
        kk.from_coords(&coords)
    })
}

pub fn reduce_law_mod_pi(law: &FormalGroupLaw<LocalField>) -> Result<FormalGroupLaw<SmallRing>> {
    let series = reduce_series_mod_pi(law.series())?;
    FormalGroupLaw::from_series(series, law.provenance())
}

/// [p](T) as the p-fold formal sum T +_F ... +_F T. Works over any
/// coefficient ring; no logarithm needed.
pub fn p_series_via_sum<R: Ring>(law: &FormalGroupLaw<R>, p: u64) -> Result<TruncSeries<R>> {
    let t = TruncSeries::var(law.ring().clone(), &["T"], law.cap(), "T")?;
    let copies = vec![t; p as usize];
    law.formal_sum(&copies)
}

/// [p](T) as exp(p log T), certified integral before anyone reduces it.
pub fn p_series_via_log(lg: &Logarithm<LocalField>) -> Result<TruncSeries<LocalField>> {
    let field = lg.ring().clone();
    let p = field.p();
    let ps = endo(lg, &field.from_int(&BigInt::from(p)))?;
    super::check_integral(&ps)?;
    Ok(ps)
}

/// Reads the height off a [p]-series over the residue field.
pub fn height_of_p_series(ps: &TruncSeries<SmallRing>, p: u64) -> Result<HeightVerdict> {
    match ps.min_degree() {
        None => Ok(HeightVerdict::InfiniteToCap),
        Some(d) => {
            let mut h = 0u32;
            let mut n = d;
            while n % p as usize == 0 {
                n /= p as usize;
                h += 1;
            }
            if n != 1 {
                return Err(Error::HeightNotPPower(d));
            }
            Ok(HeightVerdict::Finite(h))
        }
    }
}

/// Height of the mod-pi reduction, by the formal-sum route.
pub fn height_mod_pi(law: &FormalGroupLaw<LocalField>) -> Result<HeightVerdict> {
    let p = law.ring().p();
    let red = reduce_law_mod_pi(law)?;
    let ps = p_series_via_sum(&red, p)?;
    height_of_p_series(&ps, p)
}

/// Demands height exactly h. Certifying height h requires seeing the
/// [p]-series through degree p^h, so too small a cap is an error rather
/// than a verdict.
pub fn require_height(law: &FormalGroupLaw<LocalField>, h: u32) -> Result<()> {
    let p = law.ring().p();
    let need = (p as u128)
        .checked_pow(h)
        .filter(|&n| n <= usize::MAX as u128)
        .ok_or(Error::DegreeCapTooSmall {
            cap: law.cap(),
            need: usize::MAX,
        })? as usize;
    if law.cap() < need {
        return Err(Error::DegreeCapTooSmall {
            cap: law.cap(),
            need,
        });
    }
    match height_mod_pi(law)? {
        HeightVerdict::Finite(g) if g == h => Ok(()),
        v => Err(Error::Invalid(format!("height is {v}, wanted {h}"))),
    }
}
