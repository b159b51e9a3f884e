//! Wire formats for complexes and their homology. Integers travel as
//! decimal strings so nothing is lost to floating point or 64-bit
//! truncation, and matrix dumps are row-major for external checkers.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::koszul::algebra::{
    make_monomial_algebra, Base, Coords, FinAlgebra, MonomialQuotient,
};
use crate::koszul::complex::KoszulComplex;
use crate::koszul::homology::HomologyGroup;
use crate::koszul::snf::Mat;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum BaseSpec {
    Int,
    ZmodPow { p: u64, n: u32 },
}

impl BaseSpec {
    pub fn to_base(&self) -> Base {
        match self {
            BaseSpec::Int => Base::Int,
            BaseSpec::ZmodPow { p, n } => Base::ZmodPow { p: *p, n: *n },
        }
    }

    pub fn of(base: &Base) -> BaseSpec {
        match base {
            Base::Int => BaseSpec::Int,
            Base::ZmodPow { p, n } => BaseSpec::ZmodPow { p: *p, n: *n },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct MonomialSpec {
    pub vars: Vec<String>,
    pub bounds: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct TableSpec {
    pub labels: Vec<String>,
    /// table[i][j] = coordinates of b_i * b_j.
    pub table: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
}

/// An algebra arrives either as a monomial quotient or as an explicit
/// multiplication table; exactly one of the two must be present.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct AlgebraSpec {
    pub base: BaseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomial_quotient: Option<MonomialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|_| Error::Invalid(format!("bad integer literal {s:?}")))
}

pub fn parse_coords(strs: &[String]) -> Result<Coords> {
    strs.iter().map(|s| parse_int(s)).collect()
}

pub fn coords_strings(coords: &[BigInt]) -> Vec<String> {
    coords.iter().map(|c| c.to_string()).collect()
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<FinAlgebra> {
        let base = self.base.to_base();
        match (&self.monomial_quotient, &self.table) {
            (Some(mq), None) => make_monomial_algebra(
                base,
                &MonomialQuotient {
                    vars: mq.vars.clone(),
                    bounds: mq.bounds.clone(),
                    total: mq.total,
                },
            ),
            (None, Some(t)) => {
                let mut table = Vec::with_capacity(t.table.len());
                for row in &t.table {
                    let mut out = Vec::with_capacity(row.len());
                    for entry in row {
                        out.push(parse_coords(entry)?);
                    }
                    table.push(out);
                }
                FinAlgebra::from_table(base, t.labels.clone(), table, parse_coords(&t.unit)?)
            }
            _ => Err(Error::Invalid(
                "algebra needs exactly one of monomial-quotient or table".into(),
            )),
        }
    }

    /// Export any algebra as an explicit table; round-trips through
    /// `build` to an equal algebra.
    pub fn of(algebra: &FinAlgebra) -> AlgebraSpec {
        let r = algebra.rank();
        let table = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        coords_strings(&algebra.mul(&algebra.basis_elem(i), &algebra.basis_elem(j)))
                    })
                    .collect()
            })
            .collect();
        AlgebraSpec {
            base: BaseSpec::of(algebra.base()),
            monomial_quotient: None,
            table: Some(TableSpec {
                labels: algebra.labels().to_vec(),
                table,
                unit: coords_strings(&algebra.unit()),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct ComplexSpec {
    pub algebra: AlgebraSpec,
    /// Sequence elements as coordinate vectors over the algebra basis.
    pub sequence: Vec<Vec<String>>,
}

impl ComplexSpec {
    pub fn build(&self) -> Result<KoszulComplex> {
        let algebra = self.algebra.build()?;
        let seq = self
            .sequence
            .iter()
            .map(|s| {
                let c = parse_coords(s)?;
                algebra.from_coords(&c)
            })
            .collect::<Result<Vec<_>>>()?;
        KoszulComplex::build(algebra, seq)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct HomologyDegree {
    pub degree: usize,
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
    pub display: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct HomologyReport {
    pub base: BaseSpec,
    pub sequence_length: usize,
    pub chain_ranks: Vec<usize>,
    pub degrees: Vec<HomologyDegree>,
}

pub fn homology_report(ksz: &KoszulComplex, groups: &[HomologyGroup]) -> HomologyReport {
    let m = ksz.len();
    HomologyReport {
        base: BaseSpec::of(ksz.algebra().base()),
        sequence_length: m,
        chain_ranks: (0..=m).map(|k| ksz.chain_rank(k)).collect(),
        degrees: groups
            .iter()
            .enumerate()
            .map(|(k, g)| HomologyDegree {
                degree: k,
                free_rank: g.free_rank,
                invariant_factors: g.torsion.iter().map(|t| t.to_string()).collect(),
                display: g.describe(),
            })
            .collect(),
    }
}

/// Row-major exact dump of one matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl MatrixDump {
    pub fn of(m: &Mat) -> MatrixDump {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                entries.push(m.get(i, j).to_string());
            }
        }
        MatrixDump {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_mat(&self) -> Result<Mat> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Invalid(format!(
                "matrix dump claims {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let mut out = Mat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, parse_int(&self.entries[i * self.cols + j])?);
            }
        }
        Ok(out)
    }
}

/// All differentials d_1..d_m of a built complex, for external checking.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct ComplexDump {
    pub chain_ranks: Vec<usize>,
    pub differentials: Vec<MatrixDump>,
}

pub fn dump_complex(ksz: &KoszulComplex) -> ComplexDump {
    let m = ksz.len();
    ComplexDump {
        chain_ranks: (0..=m).map(|k| ksz.chain_rank(k)).collect(),
        differentials: (1..=m)
            .map(|k| MatrixDump::of(ksz.differential(k).expect("k in 1..=m")))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::homology::homology_all;

    fn eisenstein_spec() -> ComplexSpec {
        ComplexSpec {
            algebra: AlgebraSpec {
                base: BaseSpec::Int,
                monomial_quotient: None,
                table: Some(TableSpec {
                    labels: vec!["1".into(), "pi".into()],
                    table: vec![
                        vec![
                            vec!["1".into(), "0".into()],
                            vec!["0".into(), "1".into()],
                        ],
                        vec![
                            vec!["0".into(), "1".into()],
                            vec!["5".into(), "0".into()],
                        ],
                    ],
                    unit: vec!["1".into(), "0".into()],
                }),
            },
            sequence: vec![vec!["0".into(), "1".into()]],
        }
    }

    #[test]
    fn complex_spec_builds_and_reports() {
        let ksz = eisenstein_spec().build().unwrap();
        let h = homology_all(&ksz).unwrap();
        let rep = homology_report(&ksz, &h);
        assert_eq!(rep.chain_ranks, vec![2, 2]);
        assert_eq!(rep.degrees[0].invariant_factors, vec!["5".to_string()]);
        assert_eq!(rep.degrees[0].display, "Z/5");
        assert_eq!(rep.degrees[1].display, "0");
        let json = serde_json::to_string(&rep).unwrap();
        let back: HomologyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn monomial_spec_round_trips_through_table_export() {
        let spec = AlgebraSpec {
            base: BaseSpec::ZmodPow { p: 3, n: 2 },
            monomial_quotient: Some(MonomialSpec {
                vars: vec!["x".into(), "y".into()],
                bounds: vec![2, 2],
                total: Some(3),
            }),
            table: None,
        };
        let a = spec.build().unwrap();
        let exported = AlgebraSpec::of(&a);
        let b = exported.build().unwrap();
        assert_eq!(a.rank(), b.rank());
        assert_eq!(a.labels(), b.labels());
        for i in 0..a.rank() {
            for j in 0..a.rank() {
                assert_eq!(
                    a.mul(&a.basis_elem(i), &a.basis_elem(j)),
                    b.mul(&b.basis_elem(i), &b.basis_elem(j))
                );
            }
        }
    }

    #[test]
    fn matrix_dump_round_trips() {
        let ksz = eisenstein_spec().build().unwrap();
        let dump = dump_complex(&ksz);
        assert_eq!(dump.differentials.len(), 1);
        let d1 = &dump.differentials[0];
        // multiplication by pi in basis {1, pi}: pi*1 = pi, pi*pi = 5
        assert_eq!(d1.entries, vec!["0", "5", "1", "0"]);
        let m = d1.to_mat().unwrap();
        assert_eq!(&MatrixDump::of(&m), d1);
        let json = serde_json::to_string(&dump).unwrap();
        let back: ComplexDump = serde_json::from_str(&json).unwrap();
        assert_eq!(back, dump);
    }

    #[test]
    fn bad_inputs_are_usage_errors() {
        let both = AlgebraSpec {
            base: BaseSpec::Int,
            monomial_quotient: Some(MonomialSpec {
                vars: vec![],
                bounds: vec![],
                total: None,
            }),
            table: Some(TableSpec {
                labels: vec!["1".into()],
                table: vec![vec![vec!["1".into()]]],
                unit: vec!["1".into()],
            }),
        };
        assert!(matches!(both.build(), Err(Error::Invalid(_))));
        assert!(matches!(parse_int("5x"), Err(Error::Invalid(_))));
        let short = MatrixDump {
            rows: 2,
            cols: 2,
            entries: vec!["1".into()],
        };
        assert!(matches!(short.to_mat(), Err(Error::Invalid(_))));
    }
}
