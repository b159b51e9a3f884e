//! The Koszul complex of a sequence a_1..a_m in a finite-rank algebra.
//! Exterior generators e_I are indexed by subsets of {1..m} stored as
//! bitmasks (bit b stands for the (b+1)-st element of the sequence); each
//! degree lists its subsets in colexicographic order, which for bitmasks
//! is plain numeric order. The differential is
//!
//!   d e_I = sum_{1 <= i <= |I|} (-1)^{i+1} a_{I(i)} e_{I \ I(i)}
//!
//! with I(i) the i-th smallest member. Chain modules are free over the
//! base with basis "subset x algebra-basis", column index
//! subset_position * rank + basis_index; the matrices are what homology
//! and external dumps consume.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::koszul::algebra::{Coords, FinAlgebra};
use crate::koszul::snf::Mat;

pub const MAX_SEQ: usize = 12;
const MAX_MATRIX: usize = 1 << 22;

/// A degree-k chain: one algebra element per size-k subset, in colex
/// order.
pub type Chain = Vec<Coords>;

#[derive(Clone, Debug)]
pub struct KoszulComplex {
    algebra: FinAlgebra,
    seq: Vec<Coords>,
    m: usize,
    basis: Vec<Vec<u32>>,
    pos: HashMap<u32, usize>,
    diff: Vec<Mat>,
}

/// Sign and union of e_I ^ e_K, or None when the subsets overlap. The
/// sign is that of the permutation sorting the concatenation I, K: each
/// pair (x in I, y in K) with x > y contributes a transposition.
pub fn wedge(i_mask: u32, k_mask: u32) -> Option<(i8, u32)> {
    if i_mask & k_mask != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut k_bits = k_mask;
    while k_bits != 0 {
        let b = k_bits.trailing_zeros();
        inversions += (i_mask >> (b + 1)).count_ones();
        k_bits &= k_bits - 1;
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((sign, i_mask | k_mask))
}

impl KoszulComplex {
    pub fn build(algebra: FinAlgebra, seq: Vec<Coords>) -> Result<KoszulComplex> {
        let m = seq.len();
        if m > MAX_SEQ {
            return Err(Error::Invalid(format!(
                "sequence of length {m} exceeds the limit of {MAX_SEQ}"
            )));
        }
        for a in &seq {
            if a.len() != algebra.rank() {
                return Err(Error::Invalid(
                    "sequence element has wrong coordinate count".into(),
                ));
            }
        }
        let mut basis: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
        for mask in 0u32..(1u32 << m) {
            basis[mask.count_ones() as usize].push(mask);
        }
        let mut pos = HashMap::new();
        for degree in &basis {
            for (p, &mask) in degree.iter().enumerate() {
                pos.insert(mask, p);
            }
        }
        let r = algebra.rank();
        let mult: Vec<Mat> = seq.iter().map(|a| algebra.mult_matrix(a)).collect();
        let mut diff = Vec::new();
        for k in 1..=m {
            let rows = basis[k - 1].len() * r;
            let cols = basis[k].len() * r;
            if rows.saturating_mul(cols) > MAX_MATRIX {
                return Err(Error::SizeLimit { rows, cols });
            }
            let mut d = Mat::zero(rows, cols);
            for (ci, &mask) in basis[k].iter().enumerate() {
                let mut idx = 0;
                let mut bits = mask;
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    idx += 1; // 1-based position of b within mask
                    let target = mask & !(1 << b);
                    let ri = pos[&target];
                    let neg = idx % 2 == 0;
                    let block = &mult[b as usize];
                    for i in 0..r {
                        for j in 0..r {
                            let v = block.get(i, j);
                            if v.is_zero() {
                                continue;
                            }
                            let v = if neg { -v } else { v.clone() };
                            d.set(ri * r + i, ci * r + j, v);
                        }
                    }
                }
            }
            diff.push(d);
        }
        let ksz = KoszulComplex {
            algebra,
            seq,
            m,
            basis,
            pos,
            diff,
        };
        for k in 2..=m {
            let dd = ksz.diff[k - 2].mul(&ksz.diff[k - 1])?;
            let ok = (0..dd.rows())
                .all(|i| (0..dd.cols()).all(|j| ksz.algebra.base().reduce(dd.get(i, j)).is_zero()));
            if !ok {
                return Err(Error::DSquaredNonzero(k));
            }
        }
        Ok(ksz)
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn seq(&self) -> &[Coords] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Size-k subsets in colex order.
    pub fn subsets(&self, k: usize) -> &[u32] {
        &self.basis[k]
    }

    pub fn chain_rank(&self, k: usize) -> usize {
        if k > self.m {
            0
        } else {
            self.basis[k].len() * self.algebra.rank()
        }
    }

    /// The matrix of d_k : C_k -> C_{k-1}, for 1 <= k <= m.
    pub fn differential(&self, k: usize) -> Option<&Mat> {
        if k >= 1 && k <= self.m {
            Some(&self.diff[k - 1])
        } else {
            None
        }
    }

    pub fn zero_chain(&self, k: usize) -> Chain {
        vec![self.algebra.zero(); self.basis[k].len()]
    }

    /// d applied symbolically, straight off the defining formula; the
    /// matrices are cross-checked against this in tests.
    pub fn apply_d(&self, k: usize, x: &Chain) -> Result<Chain> {
        if k == 0 || k > self.m || x.len() != self.basis[k].len() {
            return Err(Error::Invalid("chain degree mismatch".into()));
        }
        let mut out = self.zero_chain(k - 1);
        for (ci, &mask) in self.basis[k].iter().enumerate() {
            if self.algebra.is_zero(&x[ci]) {
                continue;
            }
            let mut idx = 0;
            let mut bits = mask;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                idx += 1;
                let target = mask & !(1 << b);
                let mut term = self.algebra.mul(&self.seq[b as usize], &x[ci]);
                if idx % 2 == 0 {
                    term = self.algebra.neg(&term);
                }
                let ri = self.pos[&target];
                out[ri] = self.algebra.add(&out[ri], &term);
            }
        }
        Ok(out)
    }

    /// Wedge product of chains, A-bilinear with the subset signs.
    pub fn mul_chains(&self, j: usize, x: &Chain, k: usize, y: &Chain) -> Result<Chain> {
        if j + k > self.m {
            return Err(Error::Invalid("product degree exceeds sequence length".into()));
        }
        if x.len() != self.basis[j].len() || y.len() != self.basis[k].len() {
            return Err(Error::Invalid("chain degree mismatch".into()));
        }
        let mut out = self.zero_chain(j + k);
        for (xi, &mi) in self.basis[j].iter().enumerate() {
            if self.algebra.is_zero(&x[xi]) {
                continue;
            }
            for (yi, &mk) in self.basis[k].iter().enumerate() {
                let Some((sign, union)) = wedge(mi, mk) else {
                    continue;
                };
                let mut term = self.algebra.mul(&x[xi], &y[yi]);
                if sign < 0 {
                    term = self.algebra.neg(&term);
                }
                let p = self.pos[&union];
                out[p] = self.algebra.add(&out[p], &term);
            }
        }
        Ok(out)
    }

    /// Flattens a chain to the module-basis column vector the matrices
    /// act on.
    pub fn chain_to_vec(&self, k: usize, x: &Chain) -> Mat {
        let r = self.algebra.rank();
        let mut v = Mat::zero(self.basis[k].len() * r, 1);
        for (ci, coords) in x.iter().enumerate() {
            for (l, c) in coords.iter().enumerate() {
                v.set(ci * r + l, 0, c.clone());
            }
        }
        v
    }

    pub fn chain_from_vec(&self, k: usize, v: &Mat) -> Chain {
        let r = self.algebra.rank();
        let mut out = self.zero_chain(k);
        for ci in 0..self.basis[k].len() {
            for l in 0..r {
                out[ci][l] = v.get(ci * r + l, 0).clone();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::algebra::{make_monomial_algebra, make_quadratic, Base, MonomialQuotient};
    use num_bigint::BigInt;

    fn zpi() -> FinAlgebra {
        make_quadratic(Base::Int, "pi", &BigInt::from(5), &BigInt::zero()).unwrap()
    }

    fn zxy33() -> FinAlgebra {
        make_monomial_algebra(
            Base::Int,
            &MonomialQuotient {
                vars: vec!["x".into(), "y".into()],
                bounds: vec![3, 3],
                total: None,
            },
        )
        .unwrap()
    }

    #[test]
    fn wedge_signs() {
        // e_1 ^ e_2 = e_{12}, e_2 ^ e_1 = -e_{12}, overlap dies
        assert_eq!(wedge(0b01, 0b10), Some((1, 0b11)));
        assert_eq!(wedge(0b10, 0b01), Some((-1, 0b11)));
        assert_eq!(wedge(0b01, 0b01), None);
        // e_{13} ^ e_2: sorting (1,3,2) is one transposition
        assert_eq!(wedge(0b101, 0b010), Some((-1, 0b111)));
        // signs multiply: (e_1 ^ e_3) ^ e_2 vs e_1 ^ (e_3 ^ e_2)
        assert_eq!(wedge(0b001, 0b100), Some((1, 0b101)));
        assert_eq!(wedge(0b100, 0b010), Some((-1, 0b110)));
        assert_eq!(wedge(0b001, 0b110), Some((1, 0b111)));
    }

    #[test]
    fn colex_subset_order() {
        let a = zpi();
        let seq = vec![a.basis_elem(1); 4];
        let ksz = KoszulComplex::build(a, seq).unwrap();
        assert_eq!(
            ksz.subsets(2),
            &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(ksz.chain_rank(2), 12);
    }

    #[test]
    fn single_element_complex_is_multiplication() {
        // 0 -> A -> A -> 0 with d = multiplication by pi: {{0,5},{1,0}}
        let a = zpi();
        let pi = a.basis_elem(1);
        let ksz = KoszulComplex::build(a, vec![pi]).unwrap();
        let d = ksz.differential(1).unwrap();
        assert_eq!((d.rows(), d.cols()), (2, 2));
        assert_eq!(*d.get(0, 1), BigInt::from(5));
        assert_eq!(*d.get(1, 0), BigInt::from(1));
        assert!(d.get(0, 0).is_zero() && d.get(1, 1).is_zero());
        assert!(ksz.differential(2).is_none());
    }

    #[test]
    fn two_element_differential_signs() {
        // d e_{12} = a_1 e_2 - a_2 e_1
        let a = zxy33();
        let x = a.basis_elem(1);
        let y = a.basis_elem(2);
        let ksz = KoszulComplex::build(a.clone(), vec![x.clone(), y.clone()]).unwrap();
        let mut e12 = ksz.zero_chain(2);
        e12[0] = a.unit();
        let d = ksz.apply_d(2, &e12).unwrap();
        // basis of degree 1 is [e_1, e_2]
        assert_eq!(d[0], a.neg(&y));
        assert_eq!(d[1], x);
    }

    #[test]
    fn matrices_agree_with_symbolic_differential() {
        let a = zxy33();
        let x = a.basis_elem(1);
        let y = a.basis_elem(2);
        let xy = a.mul(&x, &y);
        let seq = vec![x.clone(), a.add(&y, &xy), a.add(&a.unit(), &x)];
        let ksz = KoszulComplex::build(a.clone(), seq).unwrap();
        for k in 1..=3usize {
            // a deterministic but nontrivial chain
            let mut chain = ksz.zero_chain(k);
            for (ci, slot) in chain.iter_mut().enumerate() {
                let mut v = a.zero();
                for (l, c) in v.iter_mut().enumerate() {
                    *c = BigInt::from(((ci + 1) * (l + 3) % 7) as i64 - 3);
                }
                *slot = v;
            }
            let sym = ksz.apply_d(k, &chain).unwrap();
            let mat = ksz
                .differential(k)
                .unwrap()
                .mul(&ksz.chain_to_vec(k, &chain))
                .unwrap();
            assert_eq!(ksz.chain_to_vec(k - 1, &sym), mat, "degree {k}");
        }
    }

    #[test]
    fn leibniz_rule() {
        // d(x y) = dx y + (-1)^|x| x dy on handpicked chains
        let a = zxy33();
        let xg = a.basis_elem(1);
        let yg = a.basis_elem(2);
        let seq = vec![xg.clone(), yg.clone(), a.mul(&xg, &xg)];
        let ksz = KoszulComplex::build(a.clone(), seq).unwrap();
        let mut x = ksz.zero_chain(1);
        x[0] = a.add(&a.unit(), &yg);
        x[2] = xg.clone();
        let mut y = ksz.zero_chain(1);
        y[1] = a.add(&xg, &a.mul(&yg, &yg));
        y[2] = a.unit();
        let xy = ksz.mul_chains(1, &x, 1, &y).unwrap();
        let lhs = ksz.apply_d(2, &xy).unwrap();
        let dx_y = ksz
            .mul_chains(0, &ksz.apply_d(1, &x).unwrap(), 1, &y)
            .unwrap();
        let x_dy = ksz
            .mul_chains(1, &x, 0, &ksz.apply_d(1, &y).unwrap())
            .unwrap();
        // |x| = 1, so the second term enters with a minus sign
        let rhs: Chain = dx_y
            .iter()
            .zip(&x_dy)
            .map(|(u, v)| a.add(u, &a.neg(v)))
            .collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_anticommutes_on_odd_chains() {
        let a = zpi();
        let pi = a.basis_elem(1);
        let ksz = KoszulComplex::build(a.clone(), vec![pi.clone(), a.unit(), pi]).unwrap();
        let mut x = ksz.zero_chain(1);
        x[0] = a.basis_elem(1);
        x[1] = a.unit();
        let mut y = ksz.zero_chain(1);
        y[1] = a.basis_elem(1);
        y[2] = a.add(&a.unit(), &a.unit());
        let xy = ksz.mul_chains(1, &x, 1, &y).unwrap();
        let yx = ksz.mul_chains(1, &y, 1, &x).unwrap();
        let neg_yx: Chain = yx.iter().map(|v| a.neg(v)).collect();
        assert_eq!(xy, neg_yx);
        // squares of odd elements vanish
        let xx = ksz.mul_chains(1, &x, 1, &x).unwrap();
        assert!(xx.iter().all(|v| a.is_zero(v)));
    }

    #[test]
    fn sequence_length_guard() {
        let a = zpi();
        let seq = vec![a.unit(); 13];
        assert!(matches!(
            KoszulComplex::build(a, seq),
            Err(Error::Invalid(_))
        ));
    }
}
