//! Finite-precision arithmetic in local fields: the inertia subring W(F_q)
//! at p-adic precision, totally ramified extensions cut out by an Eisenstein
//! polynomial, and precision-tracked elements with exact valuation bookkeeping.

mod field;
mod num;
mod unramified;

pub use field::LocalField;
pub use num::{LocalNum, LocalNumRepr, Ord};
pub use unramified::{UnramifiedRing, WittElem};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serialized description of a field: enough to reconstruct it exactly.
/// Eisenstein coefficients are rows of w-coordinates, entries decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDesc {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    pub eisenstein: Vec<Vec<String>>,
    pub precision: i64,
}

impl LocalField {
    pub fn descriptor(&self) -> FieldDesc {
        FieldDesc {
            p: self.p(),
            f: self.f(),
            e: self.e(),
            eisenstein: self
                .eisenstein()
                .iter()
                .map(|c| c.coords.iter().map(|x| x.to_string()).collect())
                .collect(),
            precision: self.precision(),
        }
    }

    pub fn from_descriptor(d: &FieldDesc) -> Result<LocalField> {
        if d.e == 0 {
            return Err(Error::Invalid("field descriptor has e = 0".into()));
        }
        if d.eisenstein.len() != d.e {
            return Err(Error::Invalid(format!(
                "descriptor lists {} Eisenstein coefficients for e = {}",
                d.eisenstein.len(),
                d.e
            )));
        }
        // Base precision: enough p-adic digits for the requested pi-adic
        // claim plus slack for normalization round trips.
        let digits = (d.precision.max(1) as u32).div_ceil(d.e as u32) + 4;
        let base = UnramifiedRing::new(d.p, d.f, digits)?;
        let mut eis = Vec::with_capacity(d.e);
        for row in &d.eisenstein {
            if row.len() != d.f {
                return Err(Error::Invalid(format!(
                    "Eisenstein coefficient has {} coordinates for f = {}",
                    row.len(),
                    d.f
                )));
            }
            let mut coords = Vec::with_capacity(d.f);
            for s in row {
                coords.push(
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Invalid(format!("bad integer literal {s:?}")))?,
                );
            }
            eis.push(WittElem { coords });
        }
        LocalField::new(base, eis, d.precision)
    }

    /// The unramified field Q_p(w) of degree f at the given pi = p precision.
    pub fn unramified(p: u64, f: usize, precision: i64) -> Result<LocalField> {
        let digits = (precision.max(1) as u32) + 4;
        let base = UnramifiedRing::new(p, f, digits)?;
        let mut e0 = vec![BigInt::from(0); f];
        e0[0] = BigInt::from(-(p as i64));
        LocalField::new(base, vec![WittElem { coords: e0 }], precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_roundtrip() {
        let l = LocalField::unramified(5, 2, 20).unwrap();
        let d = l.descriptor();
        assert_eq!(d.p, 5);
        assert_eq!(d.f, 2);
        assert_eq!(d.e, 1);
        assert_eq!(d.eisenstein, vec![vec!["-5".to_string(), "0".to_string()]]);
        let l2 = LocalField::from_descriptor(&d).unwrap();
        assert_eq!(l2.descriptor(), d);

        let json = serde_json::to_string(&d).unwrap();
        let d2: FieldDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn descriptor_rejects_bad_shapes() {
        let mut d = LocalField::unramified(5, 1, 10).unwrap().descriptor();
        d.eisenstein[0][0] = "nonsense".into();
        assert!(LocalField::from_descriptor(&d).is_err());
        let mut d2 = LocalField::unramified(5, 1, 10).unwrap().descriptor();
        d2.e = 2;
        assert!(LocalField::from_descriptor(&d2).is_err());
    }
}
