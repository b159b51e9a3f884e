//! JSON documents for laws and series over a local field. A document embeds
//! the field descriptor so it reconstructs without out-of-band context.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{FieldDesc, LocalField, LocalNumRepr};
use crate::ring::Ring;
use crate::series::TruncSeries;

use super::{FormalGroupLaw, Provenance};

/// One stored monomial: exponents in variable order, coefficient as a repr.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermDoc {
    pub exps: Vec<usize>,
    pub coeff: LocalNumRepr,
}

/// A truncated series together with its coefficient field. Terms are listed
/// in graded order and zero coefficients are dropped, so serializing the
/// same series twice gives identical bytes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesDoc {
    pub field: FieldDesc,
    pub vars: Vec<String>,
    pub cap: usize,
    pub terms: Vec<TermDoc>,
}

/// A formal group law document: a series in X, Y plus its provenance tag.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LawDoc {
    pub provenance: Provenance,
    pub series: SeriesDoc,
}

pub fn series_doc(s: &TruncSeries<LocalField>) -> SeriesDoc {
    let field = s.ring();
    let terms = s
        .iter()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(m, c)| TermDoc {
            exps: m.exps(s.nvars()),
            coeff: field.to_repr(c),
        })
        .collect();
    SeriesDoc {
        field: field.descriptor(),
        vars: s.vars().to_vec(),
        cap: s.cap(),
        terms,
    }
}

pub fn build_series(doc: &SeriesDoc) -> Result<TruncSeries<LocalField>> {
    let field = LocalField::from_descriptor(&doc.field)?;
    let vars: Vec<&str> = doc.vars.iter().map(|v| v.as_str()).collect();
    let mut s = TruncSeries::new(field.clone(), &vars, doc.cap)?;
    for t in &doc.terms {
        if t.exps.len() != vars.len() {
            return Err(Error::Invalid(format!(
                "term lists {} exponents for {} variables",
                t.exps.len(),
                vars.len()
            )));
        }
        let deg: usize = t.exps.iter().sum();
        if deg > doc.cap {
            return Err(Error::Invalid(format!(
                "term of degree {deg} exceeds the cap {}",
                doc.cap
            )));
        }
        s.set_coeff(&t.exps, field.from_repr(&t.coeff)?);
    }
    Ok(s)
}

pub fn law_doc(law: &FormalGroupLaw<LocalField>) -> LawDoc {
    LawDoc {
        provenance: law.provenance(),
        series: series_doc(law.series()),
    }
}

pub fn build_law(doc: &LawDoc) -> Result<FormalGroupLaw<LocalField>> {
    FormalGroupLaw::from_series(build_series(&doc.series)?, doc.provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::{law_from_log, lubin_tate_log};

    #[test]
    fn law_document_round_trips() {
        let field = LocalField::unramified(5, 1, 20).unwrap();
        let lg = lubin_tate_log(&field, 8).unwrap();
        let law = law_from_log(&lg, 8).unwrap();

        let doc = law_doc(&law);
        assert_eq!(doc.provenance, Provenance::FromLog);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back: LawDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);

        let rebuilt = build_law(&back).unwrap();
        assert!(rebuilt.series().eq_to_cap(law.series()).unwrap());
        assert_eq!(law_doc(&rebuilt), doc);
    }

    #[test]
    fn emission_is_stable() {
        let field = LocalField::unramified(3, 2, 12).unwrap();
        let lg = lubin_tate_log(&field, 6).unwrap();
        let law = law_from_log(&lg, 6).unwrap();
        let a = serde_json::to_vec(&law_doc(&law)).unwrap();
        let b = serde_json::to_vec(&law_doc(&build_law(&law_doc(&law)).unwrap())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let field = LocalField::unramified(5, 1, 10).unwrap();
        let lg = lubin_tate_log(&field, 4).unwrap();
        let law = law_from_log(&lg, 4).unwrap();
        let mut doc = law_doc(&law);

        doc.series.terms[0].exps = vec![1];
        assert!(build_law(&doc).is_err());

        let mut doc2 = law_doc(&law);
        doc2.series.terms[0].exps = vec![9, 9];
        assert!(build_law(&doc2).is_err());

        let mut doc3 = law_doc(&law);
        doc3.series.vars = vec!["T".into()];
        doc3.series.terms.clear();
        assert!(build_law(&doc3).is_err());
    }
}
