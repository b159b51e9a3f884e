//! Finite-rank commutative algebras presented by structure constants over
//! the integers or over Z/p^N. Elements are coordinate vectors in the
//! fixed basis; the multiplication table is validated exhaustively at
//! construction, so everything downstream may assume a genuine
//! commutative unital algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::koszul::snf::Mat;

pub const MAX_RANK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    /// Exact integers.
    Int,
    /// Z/p^n.
    ZmodPow { p: u64, n: u32 },
}

impl Base {
    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            Base::Int => None,
            Base::ZmodPow { p, n } => Some(BigInt::from(*p).pow(*n)),
        }
    }

    pub fn reduce(&self, v: &BigInt) -> BigInt {
        match self.modulus() {
            None => v.clone(),
            Some(m) => v.mod_floor(&m),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Base::Int => "Z".into(),
            Base::ZmodPow { p, n } => format!("Z/{p}^{n}"),
        }
    }
}

/// Coordinates of an algebra element in the basis.
pub type Coords = Vec<BigInt>;

#[derive(Clone, Debug)]
pub struct FinAlgebra {
    base: Base,
    rank: usize,
    labels: Vec<String>,
    /// table[i][j] = coordinates of basis_i * basis_j
    table: Vec<Vec<Coords>>,
    unit: Coords,
}

impl FinAlgebra {
    /// Validates and builds from an explicit multiplication table. The
    /// checks are exhaustive: commutativity and the unit law on basis
    /// pairs, associativity on basis triples.
    pub fn from_table(
        base: Base,
        labels: Vec<String>,
        table: Vec<Vec<Coords>>,
        unit: Coords,
    ) -> Result<FinAlgebra> {
        let rank = labels.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::SizeLimit {
                rows: rank,
                cols: rank,
            });
        }
        if let Base::ZmodPow { p, .. } = base {
            if !is_prime(p) {
                return Err(Error::NonPrime(p));
            }
        }
        let dims_ok = table.len() == rank
            && table.iter().all(|row| {
                row.len() == rank && row.iter().all(|v| v.len() == rank)
            })
            && unit.len() == rank;
        if !dims_ok {
            return Err(Error::Invalid("structure table has wrong shape".into()));
        }
        let table: Vec<Vec<Coords>> = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|c| base.reduce(c)).collect())
                    .collect()
            })
            .collect();
        let unit: Coords = unit.iter().map(|c| base.reduce(c)).collect();
        let a = FinAlgebra {
            base,
            rank,
            labels,
            table,
            unit,
        };
        for i in 0..rank {
            for j in 0..i {
                if a.table[i][j] != a.table[j][i] {
                    return Err(Error::NotCommutative(i, j));
                }
            }
        }
        for j in 0..rank {
            let mut e_j = a.zero();
            e_j[j] = BigInt::from(1);
            if a.mul(&a.unit, &e_j) != e_j {
                return Err(Error::UnitMissing);
            }
        }
        // all ordered triples: commutativity alone does not let one
        // associator stand in for the others
        for k in 0..rank {
            let e_k = a.basis_elem(k);
            for i in 0..rank {
                for j in 0..rank {
                    let left = a.mul(&a.table[i][j], &e_k);
                    let right = a.mul_basis_right(i, &a.table[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(a)
    }

    /// b_i * v
    fn mul_basis_right(&self, i: usize, v: &Coords) -> Coords {
        let mut out = self.zero();
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, t) in self.table[i][j].iter().enumerate() {
                out[l] += c * t;
            }
        }
        out.iter().map(|c| self.base.reduce(c)).collect()
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero(&self) -> Coords {
        vec![BigInt::zero(); self.rank]
    }

    pub fn unit(&self) -> Coords {
        self.unit.clone()
    }

    pub fn basis_elem(&self, i: usize) -> Coords {
        let mut v = self.zero();
        v[i] = BigInt::from(1);
        v
    }

    pub fn from_coords(&self, coords: &[BigInt]) -> Result<Coords> {
        if coords.len() != self.rank {
            return Err(Error::Invalid(format!(
                "{} coordinates for a rank-{} algebra",
                coords.len(),
                self.rank
            )));
        }
        Ok(coords.iter().map(|c| self.base.reduce(c)).collect())
    }

    pub fn add(&self, a: &Coords, b: &Coords) -> Coords {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.base.reduce(&(x + y)))
            .collect()
    }

    pub fn neg(&self, a: &Coords) -> Coords {
        a.iter().map(|x| self.base.reduce(&-x)).collect()
    }

    pub fn scale(&self, k: &BigInt, a: &Coords) -> Coords {
        a.iter().map(|x| self.base.reduce(&(k * x))).collect()
    }

    pub fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (l, t) in self.table[i][j].iter().enumerate() {
                    out[l] += &xy * t;
                }
            }
        }
        out.iter().map(|c| self.base.reduce(c)).collect()
    }

    pub fn is_zero(&self, a: &Coords) -> bool {
        a.iter().all(|c| self.base.reduce(c).is_zero())
    }

    /// Multiplication-by-a matrix in the basis (column l = a * b_l).
    pub fn mult_matrix(&self, a: &Coords) -> Mat {
        let mut m = Mat::zero(self.rank, self.rank);
        for l in 0..self.rank {
            let col = self.mul(a, &self.basis_elem(l));
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, l, v);
            }
        }
        m
    }

    pub fn fmt_elem(&self, a: &Coords) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.labels[i] == "1" {
                parts.push(c.to_string());
            } else if *c == BigInt::from(1) {
                parts.push(self.labels[i].clone());
            } else {
                parts.push(format!("{}*{}", c, self.labels[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Monomial-quotient presentation: polynomial variables with per-variable
/// exponent bounds and an optional total-degree bound; any product
/// escaping the bounds is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialQuotient {
    pub vars: Vec<String>,
    /// exponent of vars[i] must stay below bounds[i]
    pub bounds: Vec<usize>,
    /// total degree must stay below this, when set
    pub total: Option<usize>,
}

pub fn make_monomial_algebra(base: Base, mq: &MonomialQuotient) -> Result<FinAlgebra> {
    if mq.vars.len() != mq.bounds.len() {
        return Err(Error::Invalid(
            "one exponent bound per variable required".into(),
        ));
    }
    if mq.bounds.iter().any(|&b| b == 0) {
        return Err(Error::Invalid("zero exponent bound".into()));
    }
    // enumerate admissible exponent tuples, graded then lexicographic
    let mut exps: Vec<Vec<usize>> = vec![vec![]];
    for &b in &mq.bounds {
        let mut next = Vec::new();
        for e in &exps {
            for v in 0..b {
                let mut e2 = e.clone();
                e2.push(v);
                next.push(e2);
            }
        }
        exps = next;
        if exps.len() > MAX_RANK * 8 {
            return Err(Error::SizeLimit {
                rows: exps.len(),
                cols: exps.len(),
            });
        }
    }
    if let Some(t) = mq.total {
        exps.retain(|e| e.iter().sum::<usize>() < t);
    }
    exps.sort_by_key(|e| (e.iter().sum::<usize>(), e.clone()));
    if exps.is_empty() {
        return Err(Error::Invalid("monomial basis is empty".into()));
    }
    if exps.len() > MAX_RANK {
        return Err(Error::SizeLimit {
            rows: exps.len(),
            cols: exps.len(),
        });
    }
    let label = |e: &[usize]| -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, &v)| {
                if v == 1 {
                    mq.vars[i].clone()
                } else {
                    format!("{}^{}", mq.vars[i], v)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    };
    let rank = exps.len();
    let index: std::collections::HashMap<Vec<usize>, usize> = exps
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let in_bounds = |e: &[usize]| -> bool {
        e.iter().zip(&mq.bounds).all(|(&v, &b)| v < b)
            && mq.total.is_none_or(|t| e.iter().sum::<usize>() < t)
    };
    let mut table = vec![vec![vec![BigInt::zero(); rank]; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let sum: Vec<usize> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
            if in_bounds(&sum) {
                table[i][j][index[&sum]] = BigInt::from(1);
            }
        }
    }
    let mut unit = vec![BigInt::zero(); rank];
    unit[0] = BigInt::from(1);
    let labels = exps.iter().map(|e| label(e)).collect();
    FinAlgebra::from_table(base, labels, table, unit)
}

/// Rank-2 algebra base[w]/(w^2 - c1 w - c0).
pub fn make_quadratic(base: Base, label: &str, c0: &BigInt, c1: &BigInt) -> Result<FinAlgebra> {
    let z = BigInt::zero();
    let one = BigInt::from(1);
    let table = vec![
        vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]],
        vec![vec![z.clone(), one.clone()], vec![c0.clone(), c1.clone()]],
    ];
    FinAlgebra::from_table(
        base,
        vec!["1".into(), label.into()],
        table,
        vec![one, z],
    )
}
