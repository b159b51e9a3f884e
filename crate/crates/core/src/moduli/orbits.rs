//! The coordinate-change action on buds, orbits and stabilizers, and the
//! groupoid report. The action is the conjugation F^t = t^{-1}(F(t(X),
//! t(Y))) truncated at the working degree, computed through the series
//! module; all bookkeeping below is exhaustive table work on top of it.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moduli::{enumerate_buds, enumerate_coordchanges, Bud, CoordChange};
use crate::ring::{Ring, SmallRing};

/// Work cap for the act table of a groupoid report.
const REPORT_GUARD: usize = 1_000_000;
/// Above this many (bud, t, s) triples the compatibility check samples
/// instead of sweeping; the sample is seeded and therefore reproducible.
const EXHAUSTIVE_TRIPLES: usize = 200_000;
const SAMPLED_TRIPLES: usize = 20_000;
const SAMPLE_SEED: u64 = 0x6d6f_6475;

/// F^t at the bud's degree. The result of conjugating a valid bud is
/// again a valid bud, so extraction cannot fail on enumerated inputs.
pub fn act(ring: &SmallRing, t: &CoordChange, f: &Bud) -> Result<Bud> {
    if t.d != f.d {
        return Err(Error::Invalid(format!(
            "degree mismatch: change has {}, bud has {}",
            t.d, f.d
        )));
    }
    let conj = f.to_law(ring)?.conjugate(&t.to_series(ring)?)?;
    Bud::from_series(conj.series(), f.d)
}

#[derive(Clone, Debug)]
pub struct OrbitStab {
    /// Sorted, duplicate-free.
    pub orbit: Vec<Bud>,
    /// In enumeration order of the full group.
    pub stabilizer: Vec<CoordChange>,
}

pub fn orbit_and_stabilizer(ring: &SmallRing, f: &Bud) -> Result<OrbitStab> {
    let gamma = enumerate_coordchanges(ring, f.d)?;
    let mut orbit = Vec::new();
    let mut stabilizer = Vec::new();
    for t in &gamma {
        let g = act(ring, t, f)?;
        if g == *f {
            stabilizer.push(t.clone());
        }
        orbit.push(g);
    }
    orbit.sort();
    orbit.dedup();
    Ok(OrbitStab { orbit, stabilizer })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct OrbitSummary {
    pub size: usize,
    pub stabilizer_order: usize,
    pub representative: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct GroupoidChecks {
    pub identity_acts_trivially: bool,
    /// act(s, act(t, F)) = act(t∘s, F); this one identity is both the
    /// action axiom and the morphism-composition closure law.
    pub composition_compatible: bool,
    pub inverses_present: bool,
    pub stabilizers_are_subgroups: bool,
    pub orbit_stabilizer_products: bool,
    pub morphism_counts_constant: bool,
    pub morphisms_empty_across_orbits: bool,
}

impl GroupoidChecks {
    pub fn all(&self) -> bool {
        self.identity_acts_trivially
            && self.composition_compatible
            && self.inverses_present
            && self.stabilizers_are_subgroups
            && self.orbit_stabilizer_products
            && self.morphism_counts_constant
            && self.morphisms_empty_across_orbits
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub struct GroupoidReport {
    pub ring: String,
    pub degree: usize,
    pub bud_count: usize,
    pub group_order: usize,
    pub orbits: Vec<OrbitSummary>,
    /// "exhaustive" or "sampled", for the compatibility sweep.
    pub compatibility_mode: String,
    pub checks: GroupoidChecks,
    pub all_passed: bool,
}

/// Enumerates everything at (ring, d) and verifies the groupoid story:
/// the action axioms, orbit-stabilizer products, constancy of morphism
/// counts within orbits and emptiness across them.
pub fn groupoid_report(ring: &SmallRing, d: usize) -> Result<GroupoidReport> {
    let buds = enumerate_buds(ring, d)?;
    let gamma = enumerate_coordchanges(ring, d)?;
    let nb = buds.len();
    let ng = gamma.len();
    if nb.saturating_mul(ng) > REPORT_GUARD {
        return Err(Error::SearchSpaceTooLarge(nb as u128 * ng as u128));
    }

    let bud_index: HashMap<&Bud, usize> = buds.iter().zip(0..).collect();
    let gamma_index: HashMap<&CoordChange, usize> = gamma.iter().zip(0..).collect();
    let identity = CoordChange::identity(ring, d)?;
    let id_idx = *gamma_index
        .get(&identity)
        .ok_or_else(|| Error::Invalid("identity missing from the group listing".into()))?;

    // the whole action as one table: table[f][t] = index of F^t
    let mut table = vec![vec![0usize; ng]; nb];
    for (fi, f) in buds.iter().enumerate() {
        for (ti, t) in gamma.iter().enumerate() {
            let g = act(ring, t, f)?;
            let gi = *bud_index.get(&g).ok_or_else(|| {
                Error::Invalid("action left the enumerated bud set; enumeration bug".into())
            })?;
            table[fi][ti] = gi;
        }
    }

    let identity_acts_trivially = (0..nb).all(|fi| table[fi][id_idx] == fi);

    // orbit id = least reachable bud index
    let orbit_id: Vec<usize> = (0..nb)
        .map(|fi| table[fi].iter().copied().min().unwrap_or(fi))
        .collect();
    let mut orbit_reps: Vec<usize> = orbit_id.clone();
    orbit_reps.sort_unstable();
    orbit_reps.dedup();

    let stab_count: Vec<usize> = (0..nb)
        .map(|fi| table[fi].iter().filter(|&&gi| gi == fi).count())
        .collect();
    let orbit_size =
        |rep: usize| -> usize { orbit_id.iter().filter(|&&o| o == rep).count() };
    let orbit_stabilizer_products = (0..nb).all(|fi| {
        stab_count[fi] * orbit_size(orbit_id[fi]) == ng
    });

    // mor(f, g) sizes by one sweep per source bud
    let mut morphism_counts_constant = true;
    let mut morphisms_empty_across_orbits = true;
    for fi in 0..nb {
        let mut counts = vec![0usize; nb];
        for &gi in &table[fi] {
            counts[gi] += 1;
        }
        for gi in 0..nb {
            if orbit_id[fi] == orbit_id[gi] {
                if counts[gi] != stab_count[fi] {
                    morphism_counts_constant = false;
                }
            } else if counts[gi] != 0 {
                morphisms_empty_across_orbits = false;
            }
        }
    }

    let mut inverses_present = true;
    for t in &gamma {
        let tinv = t.inverse(ring)?;
        if !gamma_index.contains_key(&tinv)
            || t.compose(&tinv, ring)? != identity
            || tinv.compose(t, ring)? != identity
        {
            inverses_present = false;
            break;
        }
    }

    let mut stabilizers_are_subgroups = true;
    'reps: for &rep in &orbit_reps {
        let stab: Vec<usize> = (0..ng).filter(|&ti| table[rep][ti] == rep).collect();
        if !stab.contains(&id_idx) {
            stabilizers_are_subgroups = false;
            break;
        }
        for &a in &stab {
            let ainv = gamma[a].inverse(ring)?;
            let ainv_idx = *gamma_index
                .get(&ainv)
                .ok_or_else(|| Error::Invalid("inverse left the group listing".into()))?;
            if !stab.contains(&ainv_idx) {
                stabilizers_are_subgroups = false;
                break 'reps;
            }
            for &b in &stab {
                let ab = gamma[a].compose(&gamma[b], ring)?;
                let ab_idx = *gamma_index
                    .get(&ab)
                    .ok_or_else(|| Error::Invalid("composite left the group listing".into()))?;
                if !stab.contains(&ab_idx) {
                    stabilizers_are_subgroups = false;
                    break 'reps;
                }
            }
        }
    }

    let triples = nb.saturating_mul(ng).saturating_mul(ng);
    let exhaustive = triples <= EXHAUSTIVE_TRIPLES;
    let mut composition_compatible = true;
    let check_triple = |fi: usize, ti: usize, si: usize| -> Result<bool> {
        let comp = gamma[ti].compose(&gamma[si], ring)?;
        let ci = *gamma_index
            .get(&comp)
            .ok_or_else(|| Error::Invalid("composite left the group listing".into()))?;
        Ok(table[table[fi][ti]][si] == table[fi][ci])
    };
    if exhaustive {
        'sweep: for fi in 0..nb {
            for ti in 0..ng {
                for si in 0..ng {
                    if !check_triple(fi, ti, si)? {
                        composition_compatible = false;
                        break 'sweep;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..SAMPLED_TRIPLES {
            let fi = rng.gen_range(0..nb);
            let ti = rng.gen_range(0..ng);
            let si = rng.gen_range(0..ng);
            if !check_triple(fi, ti, si)? {
                composition_compatible = false;
                break;
            }
        }
    }

    let orbits: Vec<OrbitSummary> = orbit_reps
        .iter()
        .map(|&rep| {
            Ok(OrbitSummary {
                size: orbit_size(rep),
                stabilizer_order: stab_count[rep],
                representative: buds[rep].display(ring)?,
            })
        })
        .collect::<Result<_>>()?;

    let checks = GroupoidChecks {
        identity_acts_trivially,
        composition_compatible,
        inverses_present,
        stabilizers_are_subgroups,
        orbit_stabilizer_products,
        morphism_counts_constant,
        morphisms_empty_across_orbits,
    };
    let all_passed = checks.all();
    Ok(GroupoidReport {
        ring: ring.name(),
        degree: d,
        bud_count: nb,
        group_order: ng,
        orbits,
        compatibility_mode: if exhaustive { "exhaustive" } else { "sampled" }.into(),
        checks,
        all_passed,
    })
}
