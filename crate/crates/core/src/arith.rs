//! Small integer and F_p[x] helpers shared across modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Remainder of monic division a mod b over F_p. Polynomials are coefficient
/// vectors, lowest degree first, not necessarily trimmed.
fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let deg = |v: &[u64]| v.iter().rposition(|c| *c != 0);
    let mut r: Vec<u64> = a.to_vec();
    let db = deg(b).expect("division by zero polynomial");
    let lead_inv = inv_mod_p(b[db], p);
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] % p * lead_inv % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - factor * b[i] % p) % p;
        }
    }
    r.truncate(db);
    r.resize(db, 0);
    r
}

pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    // p is prime and small enough that Fermat is fine.
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let f = poly.len() - 1;
    // Trial division by every monic polynomial of degree 1..=f/2.
    for d in 1..=f / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut divisor = vec![0u64; d + 1];
            let mut c = code;
            for item in divisor.iter_mut().take(d) {
                *item = c % p;
                c /= p;
            }
            divisor[d] = 1;
            if poly_rem_mod_p(poly, &divisor, p).iter().all(|x| *x == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `f` over F_p whose
/// non-leading coefficient vector (c_{f-1}, ..., c_1, c_0) is smallest in
/// lexicographic order, equivalently whose base-p encoding is smallest.
/// Coefficients are returned lowest degree first, lifted to {0, ..., p-1},
/// without the leading 1.
pub fn smallest_irreducible(p: u64, f: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if f == 0 || f > 8 {
        return Err(Error::Invalid(format!("degree {f} out of range 1..=8")));
    }
    if p.checked_pow((f / 2) as u32).is_none_or(|c| c > 2_000_000) {
        return Err(Error::SearchSpaceTooLarge(
            (p as u128).pow((f / 2) as u32),
        ));
    }
    let total = (p as u128).pow(f as u32);
    let mut code: u128 = 0;
    while code < total {
        let mut poly = vec![0u64; f + 1];
        let mut c = code;
        // code digits are read so that smaller code means lexicographically
        // smaller (c_{f-1}, ..., c_0): c_0 sits in the least significant digit.
        for coef in poly.iter_mut().take(f) {
            *coef = (c % p as u128) as u64;
            c /= p as u128;
        }
        poly[f] = 1;
        if is_irreducible(&poly, p) {
            poly.truncate(f);
            return Ok(poly);
        }
        code += 1;
    }
    Err(Error::IrreduciblePolyNotFound { p, degree: f })
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn bigint_pow(base: &BigInt, exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}
