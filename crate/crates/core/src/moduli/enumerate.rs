//! Complete enumerations of buds and coordinate changes. The bud search
//! prunes degree by degree: a partial assignment that breaks
//! associativity at total degree n is dead no matter how it is extended,
//! so each level only keeps survivors. Orders are index-lexicographic
//! throughout, which makes every listing deterministic.

use crate::error::{Error, Result};
use crate::moduli::{check_degree, coeff_slots, Bud, CoordChange, MIN_DEG};
use crate::ring::SmallRing;

pub(crate) const SEARCH_GUARD: u128 = 10_000_000;

fn guard(count: u128) -> Result<()> {
    if count > SEARCH_GUARD {
        return Err(Error::SearchSpaceTooLarge(count));
    }
    Ok(())
}

fn pow(base: u128, exp: usize) -> u128 {
    let mut v = 1u128;
    for _ in 0..exp {
        v = v.saturating_mul(base);
    }
    v
}

/// All tuples of the given length over 0..size, lexicographic.
fn tuples(size: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * size as usize);
        for t in &out {
            for v in 0..size {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Every degree-d bud over the ring: complete, duplicate-free, sorted by
/// coefficient indices. Unit and commutativity hold by construction; the
/// associativity constraints are solved by propagation.
pub fn enumerate_buds(ring: &SmallRing, d: usize) -> Result<Vec<Bud>> {
    check_degree(d)?;
    let slots = coeff_slots(d);
    guard(pow(ring.size() as u128, slots.len()))?;

    let mut partial: Vec<Vec<u32>> = vec![vec![]];
    for n in MIN_DEG..=d {
        let level = slots.iter().filter(|&&(i, j)| i + j == n).count();
        let exts = tuples(ring.size(), level);
        let mut next = Vec::new();
        for p in &partial {
            for e in &exts {
                let mut coeffs = p.clone();
                coeffs.extend_from_slice(e);
                let bud = Bud::new(ring, n, coeffs)?;
                if bud
                    .to_law(ring)?
                    .verify_axioms()?
                    .associative
                    .is_pass()
                {
                    next.push(bud.coeffs);
                }
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|coeffs| Bud::new(ring, d, coeffs))
        .collect()
}

/// Every coordinate change of degree d: t_0 over the units in index
/// order, the rest over the whole ring, lexicographic.
pub fn enumerate_coordchanges(ring: &SmallRing, d: usize) -> Result<Vec<CoordChange>> {
    check_degree(d)?;
    let units = ring.units();
    guard(units.len() as u128 * pow(ring.size() as u128, d - 1))?;
    let mut out = Vec::new();
    for &t0 in &units {
        for rest in tuples(ring.size(), d - 1) {
            let mut coeffs = vec![t0];
            coeffs.extend_from_slice(&rest);
            out.push(CoordChange::new(ring, d, coeffs)?);
        }
    }
    Ok(out)
}
