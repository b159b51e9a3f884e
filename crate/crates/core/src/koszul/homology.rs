//! Homology of a Koszul complex as honest base modules. Over the
//! integers H_k = ker d_k / im d_{k+1} is computed from a kernel-lattice
//! basis (kernels of maps between free modules are pure, so the basis is
//! genuine) and the Smith normal form of the boundary coordinates. Over
//! Z/p^N everything lifts to the integers with p^N relations adjoined,
//! which turns the quotient computation into the same lattice problem.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::koszul::algebra::{Base, Coords, FinAlgebra};
use crate::koszul::complex::KoszulComplex;
use crate::koszul::snf::{column_lattice_basis, kernel_basis, smith_normal_form, solve_exact, Mat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Nontrivial invariant factors, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn scaled_identity(n: usize, m: &BigInt) -> Mat {
    let mut out = Mat::zero(n, n);
    for i in 0..n {
        out.set(i, i, m.clone());
    }
    out
}

/// Lattice basis of the degree-k cycles, viewed inside Z^{n_k}. Over
/// Z/p^N the lattice is the preimage {x : d x = 0 mod p^N}, which always
/// contains p^N Z^{n_k} and is therefore full rank.
fn cycle_lattice(ksz: &KoszulComplex, k: usize) -> Result<Mat> {
    let n_k = ksz.chain_rank(k);
    let modulus = ksz.algebra().base().modulus();
    match ksz.differential(k) {
        None => Ok(Mat::identity(n_k)),
        Some(d) => match &modulus {
            None => Ok(kernel_basis(d)),
            Some(m) => {
                let aug = d.hcat(&scaled_identity(d.rows(), m))?;
                let ker = kernel_basis(&aug);
                Ok(column_lattice_basis(&ker.top_rows(n_k)))
            }
        },
    }
}

/// Generators of the degree-k boundaries (plus the base relations over
/// Z/p^N), as matrix columns in Z^{n_k}.
fn boundary_generators(ksz: &KoszulComplex, k: usize) -> Result<Mat> {
    let n_k = ksz.chain_rank(k);
    let modulus = ksz.algebra().base().modulus();
    let d_next = ksz.differential(k + 1);
    match (d_next, &modulus) {
        (None, None) => Ok(Mat::zero(n_k, 0)),
        (None, Some(m)) => Ok(scaled_identity(n_k, m)),
        (Some(d), None) => Ok(d.clone()),
        (Some(d), Some(m)) => d.hcat(&scaled_identity(n_k, m)),
    }
}

/// H_k = ker d_k / im d_{k+1} as a base module.
pub fn homology(ksz: &KoszulComplex, k: usize) -> Result<HomologyGroup> {
    if k > ksz.len() {
        return Ok(HomologyGroup::trivial());
    }
    let cycles = cycle_lattice(ksz, k)?;
    if cycles.cols() == 0 {
        return Ok(HomologyGroup::trivial());
    }
    let bounds = boundary_generators(ksz, k)?;
    if bounds.cols() == 0 {
        return Ok(HomologyGroup {
            free_rank: cycles.cols(),
            torsion: Vec::new(),
        });
    }
    // boundaries are cycles (d^2 = 0 was checked at build), so the solve
    // cannot leave the lattice
    let coords = solve_exact(&cycles, &bounds)?;
    let factors = smith_normal_form(&coords);
    let free_rank = cycles.cols() - factors.len();
    let torsion = factors.into_iter().filter(|f| !f.is_one()).collect();
    Ok(HomologyGroup { free_rank, torsion })
}

/// All homology groups H_0 .. H_m.
pub fn homology_all(ksz: &KoszulComplex) -> Result<Vec<HomologyGroup>> {
    (0..=ksz.len()).map(|k| homology(ksz, k)).collect()
}

/// A/(a_1..a_m) as a base module, presented directly from the
/// multiplication table: relations are a_i * b_l over all i, l. This is
/// the independent oracle for H_0.
pub fn quotient_module(algebra: &FinAlgebra, seq: &[Coords]) -> Result<HomologyGroup> {
    let r = algebra.rank();
    let mut cols: Vec<Mat> = seq.iter().map(|a| algebra.mult_matrix(a)).collect();
    if let Some(m) = algebra.base().modulus() {
        cols.push(scaled_identity(r, &m));
    }
    let mut rel = Mat::zero(r, 0);
    for c in &cols {
        rel = rel.hcat(c)?;
    }
    let factors = smith_normal_form(&rel);
    Ok(HomologyGroup {
        free_rank: r - factors.len(),
        torsion: factors.into_iter().filter(|f| !f.is_one()).collect(),
    })
}

fn binom(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let mut v = 1usize;
    for i in 0..k {
        v = v * (m - i) / (i + 1);
    }
    v
}

#[derive(Clone, Debug)]
pub struct CollapseReport {
    pub homology: Vec<HomologyGroup>,
    /// H_0 agrees with the directly presented quotient A/(seq).
    pub h0_matches_quotient: bool,
    /// H_k = 0 for all k >= 1 (the resolution situation).
    pub positive_degrees_vanish: bool,
    /// Every sequence element is zero in A.
    pub zero_sequence: bool,
    /// Expected chain ranks (m choose k) * rank(A) of the exterior
    /// algebra on m generators.
    pub exterior_ranks: Vec<usize>,
    /// Whether homology is exactly the free exterior algebra on the
    /// predicted ranks; only claimed when the sequence is zero.
    pub exterior_match: Option<bool>,
}

/// The two collapse phenomena in one report: a regular sequence collapses
/// homology onto the quotient in degree zero, and a zero sequence leaves
/// the underlying exterior algebra untouched.
pub fn collapse_check(ksz: &KoszulComplex) -> Result<CollapseReport> {
    let homology = homology_all(ksz)?;
    let quotient = quotient_module(ksz.algebra(), ksz.seq())?;
    let h0_matches_quotient = homology[0] == quotient;
    let positive_degrees_vanish = homology.iter().skip(1).all(|g| g.is_trivial());
    let zero_sequence = ksz.seq().iter().all(|a| ksz.algebra().is_zero(a));
    let m = ksz.len();
    let r = ksz.algebra().rank();
    let exterior_ranks: Vec<usize> = (0..=m).map(|k| binom(m, k) * r).collect();
    let exterior_match = zero_sequence.then(|| {
        homology.iter().zip(&exterior_ranks).all(|(g, &want)| {
            match ksz.algebra().base() {
                Base::Int => g.free_rank == want && g.torsion.is_empty(),
                Base::ZmodPow { .. } => {
                    let modulus = ksz.algebra().base().modulus().unwrap();
                    g.free_rank == 0
                        && g.torsion.len() == want
                        && g.torsion.iter().all(|t| *t == modulus)
                }
            }
        })
    });
    Ok(CollapseReport {
        homology,
        h0_matches_quotient,
        positive_degrees_vanish,
        zero_sequence,
        exterior_ranks,
        exterior_match,
    })
}

#[derive(Clone, Debug)]
pub struct CollapseVariants {
    pub zero_variant: Vec<HomologyGroup>,
    pub ideal_variant: Vec<HomologyGroup>,
    /// Every sequence element lies in the principal ideal (g).
    pub sequence_in_ideal: bool,
    pub variants_agree: bool,
}

/// Base change can send the sequence coefficients to literal zero or
/// merely into a principal ideal (g); the two readings give different
/// complexes. Both homologies are computed side by side and reported
/// without guessing which one a caller wants.
pub fn collapse_variants(
    algebra: &FinAlgebra,
    ideal_gen: &Coords,
    seq: &[Coords],
) -> Result<CollapseVariants> {
    let r = algebra.rank();
    let mut targets = Mat::zero(r, seq.len());
    for (j, a) in seq.iter().enumerate() {
        for (i, c) in a.iter().enumerate() {
            targets.set(i, j, c.clone());
        }
    }
    let ideal = column_lattice_basis(&algebra.mult_matrix(ideal_gen));
    let sequence_in_ideal = if ideal.cols() == 0 {
        seq.iter().all(|a| algebra.is_zero(a))
    } else {
        crate::koszul::snf::solve_in_lattice(&ideal, &targets)?.is_some()
    };
    let zero_seq = vec![algebra.zero(); seq.len()];
    let zero_variant = homology_all(&KoszulComplex::build(algebra.clone(), zero_seq)?)?;
    let ideal_variant = homology_all(&KoszulComplex::build(algebra.clone(), seq.to_vec())?)?;
    let variants_agree = zero_variant == ideal_variant;
    Ok(CollapseVariants {
        zero_variant,
        ideal_variant,
        sequence_in_ideal,
        variants_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::algebra::{make_monomial_algebra, make_quadratic, MonomialQuotient};
    use num_traits::Zero;

    fn groups(ksz: &KoszulComplex) -> Vec<String> {
        homology_all(ksz).unwrap().iter().map(|g| g.describe()).collect()
    }

    #[test]
    fn eisenstein_quadratic_is_resolved() {
        // A = Z[pi]/(pi^2-5), seq (pi): H_0 = Z/5, H_1 = 0
        let a = make_quadratic(Base::Int, "pi", &BigInt::from(5), &BigInt::zero()).unwrap();
        let pi = a.basis_elem(1);
        let ksz = KoszulComplex::build(a, vec![pi]).unwrap();
        assert_eq!(groups(&ksz), vec!["Z/5", "0"]);
        let rep = collapse_check(&ksz).unwrap();
        assert!(rep.h0_matches_quotient);
        assert!(rep.positive_degrees_vanish);
        assert!(!rep.zero_sequence);
    }

    #[test]
    fn nilpotent_annihilator_shows_up() {
        // A = Z[x]/(x^3), seq (x): H_0 = Z, H_1 = ann(x) = (x^2) = Z
        let a = make_monomial_algebra(
            Base::Int,
            &MonomialQuotient {
                vars: vec!["x".into()],
                bounds: vec![3],
                total: None,
            },
        )
        .unwrap();
        let x = a.basis_elem(1);
        let ksz = KoszulComplex::build(a, vec![x]).unwrap();
        assert_eq!(groups(&ksz), vec!["Z", "Z"]);
    }

    #[test]
    fn zero_sequence_keeps_the_exterior_algebra() {
        // rank-1 A, two zero elements: ranks 1, 2, 1
        let a = make_monomial_algebra(
            Base::Int,
            &MonomialQuotient {
                vars: vec![],
                bounds: vec![],
                total: None,
            },
        )
        .unwrap();
        assert_eq!(a.rank(), 1);
        let ksz = KoszulComplex::build(a.clone(), vec![a.zero(), a.zero()]).unwrap();
        let h = homology_all(&ksz).unwrap();
        assert_eq!(
            h.iter().map(|g| g.free_rank).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        let rep = collapse_check(&ksz).unwrap();
        assert!(rep.zero_sequence);
        assert_eq!(rep.exterior_match, Some(true));
        assert_eq!(rep.exterior_ranks, vec![1, 2, 1]);
    }

    #[test]
    fn zero_sequence_over_zmod_pow() {
        // same collapse over Z/5^2: groups are (Z/25)^{ranks}
        let a = make_monomial_algebra(
            Base::ZmodPow { p: 5, n: 2 },
            &MonomialQuotient {
                vars: vec![],
                bounds: vec![],
                total: None,
            },
        )
        .unwrap();
        let ksz = KoszulComplex::build(a.clone(), vec![a.zero(), a.zero()]).unwrap();
        let h = homology_all(&ksz).unwrap();
        assert_eq!(h[1].torsion, vec![BigInt::from(25), BigInt::from(25)]);
        assert_eq!(h[1].free_rank, 0);
        let rep = collapse_check(&ksz).unwrap();
        assert_eq!(rep.exterior_match, Some(true));
    }

    #[test]
    fn bigraded_truncation_has_obstructions() {
        // A = Z[x,y]/(x^3,y^3), seq (x,y): H_1 nonzero
        let a = make_monomial_algebra(
            Base::Int,
            &MonomialQuotient {
                vars: vec!["x".into(), "y".into()],
                bounds: vec![3, 3],
                total: None,
            },
        )
        .unwrap();
        let seq = vec![a.basis_elem(1), a.basis_elem(2)];
        let ksz = KoszulComplex::build(a, seq).unwrap();
        let h = homology_all(&ksz).unwrap();
        // H_0 = A/(x,y) = Z
        assert_eq!(h[0].describe(), "Z");
        assert!(!h[1].is_trivial(), "H_1 = {}", h[1].describe());
        let rep = collapse_check(&ksz).unwrap();
        assert!(rep.h0_matches_quotient);
        assert!(!rep.positive_degrees_vanish);
    }

    #[test]
    fn euler_characteristic_vanishes_over_int() {
        // alternating sum of free ranks = alternating sum of chain ranks = 0
        for seq_len in 1..=3usize {
            let a = make_monomial_algebra(
                Base::Int,
                &MonomialQuotient {
                    vars: vec!["x".into()],
                    bounds: vec![4],
                    total: None,
                },
            )
            .unwrap();
            let x = a.basis_elem(1);
            let seq: Vec<Coords> = (0..seq_len)
                .map(|i| if i % 2 == 0 { x.clone() } else { a.mul(&x, &x) })
                .collect();
            let ksz = KoszulComplex::build(a, seq).unwrap();
            let h = homology_all(&ksz).unwrap();
            let euler: i64 = h
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let s = if k % 2 == 0 { 1 } else { -1 };
                    s * g.free_rank as i64
                })
                .sum();
            assert_eq!(euler, 0, "sequence length {seq_len}");
        }
    }

    #[test]
    fn honest_zmod_module_structure() {
        // A = (Z/5^2)[x]/(x^2), seq (x): multiplication by x has kernel
        // (x) + 25-torsion; H_0 = A/(x) = Z/25, H_1 = ann(x) = Z/25
        let a = make_monomial_algebra(
            Base::ZmodPow { p: 5, n: 2 },
            &MonomialQuotient {
                vars: vec!["x".into()],
                bounds: vec![2],
                total: None,
            },
        )
        .unwrap();
        let x = a.basis_elem(1);
        let ksz = KoszulComplex::build(a, vec![x]).unwrap();
        let h = homology_all(&ksz).unwrap();
        assert_eq!(h[0].describe(), "Z/25");
        assert_eq!(h[1].describe(), "Z/25");
        // and with seq (5x) the annihilator grows to Z/25 + Z/5
        let a2 = make_monomial_algebra(
            Base::ZmodPow { p: 5, n: 2 },
            &MonomialQuotient {
                vars: vec!["x".into()],
                bounds: vec![2],
                total: None,
            },
        )
        .unwrap();
        let fivex = a2.scale(&BigInt::from(5), &a2.basis_elem(1));
        let ksz2 = KoszulComplex::build(a2, vec![fivex]).unwrap();
        let h2 = homology_all(&ksz2).unwrap();
        assert_eq!(h2[0].describe(), "Z/5 + Z/25");
        assert_eq!(h2[1].describe(), "Z/5 + Z/25");
    }

    #[test]
    fn ideal_variant_differs_from_zero_variant() {
        // over Z[pi]/(pi^2-5) the sequence (pi, pi) lies in (pi) but its
        // homology is all 5-torsion, while the zero sequence keeps the
        // free exterior algebra; the ambiguity is real and both sides
        // are reported
        let a = make_quadratic(Base::Int, "pi", &BigInt::from(5), &BigInt::zero()).unwrap();
        let pi = a.basis_elem(1);
        let rep = collapse_variants(&a, &pi, &[pi.clone(), pi.clone()]).unwrap();
        assert!(rep.sequence_in_ideal);
        assert!(!rep.variants_agree);
        assert_eq!(
            rep.zero_variant.iter().map(|g| g.free_rank).collect::<Vec<_>>(),
            vec![2, 4, 2]
        );
        let ideal: Vec<String> = rep.ideal_variant.iter().map(|g| g.describe()).collect();
        assert_eq!(ideal, vec!["Z/5", "Z/5", "0"]);
        // a unit is outside (pi)
        let rep2 = collapse_variants(&a, &pi, &[a.unit()]).unwrap();
        assert!(!rep2.sequence_in_ideal);
        // and the literal zero sequence trivially agrees with itself
        let rep3 = collapse_variants(&a, &pi, &[a.zero(), a.zero()]).unwrap();
        assert!(rep3.sequence_in_ideal);
        assert!(rep3.variants_agree);
    }

    #[test]
    fn mixed_zero_and_regular_element_matches_kunneth() {
        // seq (0, pi) on Z[pi]/(pi^2-5): the complex is Ksz(0) tensor
        // Ksz(pi), and Ksz(0) has zero differential, so the total complex
        // is Ksz(pi) plus a shifted copy: H_0 = Z/5, H_1 = Z/5, H_2 = 0
        let a = make_quadratic(Base::Int, "pi", &BigInt::from(5), &BigInt::zero()).unwrap();
        let pi = a.basis_elem(1);
        let ksz = KoszulComplex::build(a.clone(), vec![a.zero(), pi]).unwrap();
        assert_eq!(groups(&ksz), vec!["Z/5", "Z/5", "0"]);
    }

    #[test]
    fn adjoining_a_unit_kills_homology() {
        let a = make_monomial_algebra(
            Base::Int,
            &MonomialQuotient {
                vars: vec!["x".into()],
                bounds: vec![3],
                total: None,
            },
        )
        .unwrap();
        let x = a.basis_elem(1);
        let ksz = KoszulComplex::build(a.clone(), vec![x.clone(), a.unit()]).unwrap();
        let h = homology_all(&ksz).unwrap();
        assert!(h.iter().all(|g| g.is_trivial()));
    }

    #[test]
    fn permutation_and_unit_scaling_invariance() {
        let a = make_monomial_algebra(
            Base::Int,
            &MonomialQuotient {
                vars: vec!["x".into(), "y".into()],
                bounds: vec![2, 3],
                total: None,
            },
        )
        .unwrap();
        let x = a.basis_elem(1);
        let y = a.basis_elem(2);
        let h1 = homology_all(&KoszulComplex::build(a.clone(), vec![x.clone(), y.clone()]).unwrap())
            .unwrap();
        let h2 = homology_all(&KoszulComplex::build(a.clone(), vec![y.clone(), x.clone()]).unwrap())
            .unwrap();
        assert_eq!(h1, h2);
        // -x is a unit multiple of x
        let h3 = homology_all(&KoszulComplex::build(a.clone(), vec![a.neg(&x), y]).unwrap())
            .unwrap();
        assert_eq!(h1, h3);
    }
}
