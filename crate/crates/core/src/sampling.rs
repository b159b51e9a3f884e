//! Seeded samplers for randomized checks. Every draw comes from a caller
//! supplied ChaCha8 stream, so a fixed seed replays the identical case list
//! on any platform. Nothing here touches a global rng.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::koszul::{make_monomial_algebra, Base, Coords, FinAlgebra, MonomialQuotient};
use crate::local::{LocalField, LocalNum, Ord};
use crate::ring::IntegerRing;
use crate::series::TruncSeries;

/// Uniform integer with `digits` base-p digits, 0 <= n < p^digits.
fn digit_int(rng: &mut ChaCha8Rng, p: u64, digits: u32) -> BigInt {
    let base = BigInt::from(p);
    let mut acc = BigInt::from(0);
    for _ in 0..digits {
        acc = acc * &base + BigInt::from(rng.gen_range(0..p));
    }
    acc
}

/// Integral element with uniformly random w-pi coordinates at the field's
/// working precision.
pub fn random_integral(field: &LocalField, rng: &mut ChaCha8Rng) -> LocalNum {
    let digits = field.base().precision();
    let rows: Vec<Vec<BigInt>> = (0..field.e())
        .map(|_| {
            (0..field.f())
                .map(|_| digit_int(rng, field.p(), digits))
                .collect()
        })
        .collect();
    field
        .from_coord_rows(&rows)
        .expect("sampled coordinate block matches the field shape")
}

/// Integral unit, by rejection on ord = 0. Each attempt fails with
/// probability about 1/q, so the loop is short.
pub fn random_unit(field: &LocalField, rng: &mut ChaCha8Rng) -> LocalNum {
    loop {
        let a = random_integral(field, rng);
        if a.ord() == Ord::Exact(0) {
            return a;
        }
    }
}

/// One-variable integer series with every coefficient up to the cap drawn
/// uniformly from -bound..=bound (constant term included).
pub fn random_int_series(
    var: &str,
    cap: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> Result<TruncSeries<IntegerRing>> {
    let mut s = TruncSeries::new(IntegerRing, &[var], cap)?;
    for k in 0..=cap {
        s.set_coeff(&[k], BigInt::from(rng.gen_range(-bound..=bound)));
    }
    Ok(s)
}

/// One-variable series over o_L with random integral coefficients.
pub fn random_local_series(
    field: &LocalField,
    var: &str,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<TruncSeries<LocalField>> {
    let mut s = TruncSeries::new(field.clone(), &[var], cap)?;
    for k in 0..=cap {
        s.set_coeff(&[k], random_integral(field, rng));
    }
    Ok(s)
}

/// Coordinate vector with entries uniform in -bound..=bound.
pub fn random_coords(rank: usize, bound: i64, rng: &mut ChaCha8Rng) -> Coords {
    (0..rank)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

/// A random truncated monomial algebra of rank at most 16 together with a
/// sequence of at most `max_seq` random elements, the raw material for
/// differential and homology smoke checks.
pub fn random_monomial_complex(
    base: Base,
    max_seq: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(FinAlgebra, Vec<Coords>)> {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    let algebra = loop {
        let nvars = rng.gen_range(1..=3usize);
        let bounds: Vec<usize> = (0..nvars).map(|_| rng.gen_range(2..=4usize)).collect();
        if bounds.iter().product::<usize>() > 16 {
            continue;
        }
        let total = if rng.gen_range(0..4u8) == 0 {
            Some(rng.gen_range(2..=5usize))
        } else {
            None
        };
        let mq = MonomialQuotient {
            vars: NAMES[..nvars].iter().map(|s| s.to_string()).collect(),
            bounds,
            total,
        };
        break make_monomial_algebra(base, &mq)?;
    };
    let m = rng.gen_range(1..=max_seq);
    let seq = (0..m)
        .map(|_| random_coords(algebra.rank(), 3, rng))
        .collect();
    Ok((algebra, seq))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng as _;

    use super::*;
    use crate::koszul::KoszulComplex;

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let field = LocalField::unramified(5, 2, 12).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = random_integral(&field, &mut r1);
            let b = random_integral(&field, &mut r2);
            assert!(field.eq_to_prec(&a, &b));
        }
    }

    #[test]
    fn units_are_units() {
        let field = LocalField::unramified(2, 3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let u = random_unit(&field, &mut rng);
            assert_eq!(u.ord(), Ord::Exact(0));
            field.inv_elem(&u).unwrap();
        }
    }

    #[test]
    fn sampled_series_respect_their_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_int_series("T", 6, 9, &mut rng).unwrap();
        assert_eq!(s.cap(), 6);
        assert!(s.iter().all(|(m, _)| m.deg() <= 6));
        for (_, c) in s.iter() {
            assert!(*c >= BigInt::from(-9) && *c <= BigInt::from(9));
        }
    }

    #[test]
    fn sampled_complexes_build() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for i in 0..25 {
            let base = if i % 2 == 0 {
                Base::Int
            } else {
                Base::ZmodPow { p: 3, n: 2 }
            };
            let (algebra, seq) = random_monomial_complex(base, 4, &mut rng).unwrap();
            assert!(algebra.rank() <= 16);
            assert!(seq.len() <= 4);
            KoszulComplex::build(algebra, seq).unwrap();
        }
    }
}
