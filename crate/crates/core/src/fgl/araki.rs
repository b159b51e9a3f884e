//! p-typical coordinates: the Araki generators v_i of a p-typical law,
//! related to the logarithm coefficients l_k by
//!
//!   p l_k = sum_{0 <= i <= k} l_i (v_{k-i})^{p^i},  l_0 = 1, v_0 = p,
//!
//! equivalently [p](T) = F-sum of v_i T^{p^i}. Both descriptions are
//! implemented; tests play them against each other.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fgl::log::{endo, law_from_log, Logarithm};
use crate::fgl::{FormalGroupLaw, Provenance};
use crate::local::{LocalField, LocalNum};
use crate::ring::Ring;
use crate::series::TruncSeries;

/// Largest k with p^k <= cap.
fn reach(p: u64, cap: usize) -> u32 {
    let mut k = 0u32;
    let mut pk = p as u128;
    while pk <= cap as u128 {
        k += 1;
        pk *= p as u128;
    }
    k
}

/// Builds the logarithm of the p-typical law with the given Araki generators
/// (v_list[0] is v_1), solving the Araki relation for l_k.
pub fn log_from_araki(
    field: &LocalField,
    vlist: &[LocalNum],
    cap: usize,
) -> Result<Logarithm<LocalField>> {
    let p = field.p();
    let kmax = reach(p, cap);
    let v = |i: usize| -> LocalNum {
        if i == 0 {
            field.from_int(&BigInt::from(p))
        } else {
            vlist
                .get(i - 1)
                .cloned()
                .unwrap_or_else(|| field.zero_elem())
        }
    };
    let p_elem = field.from_int(&BigInt::from(p));
    let mut l: Vec<LocalNum> = vec![field.one()];
    for k in 1..=kmax as usize {
        // l_k = [sum_{0 <= i < k} l_i (v_{k-i})^{p^i}] / (p - p^{p^k})
        let mut num = field.zero_elem();
        for i in 0..k {
            let vq = field.pow_elem(&v(k - i), (p as u64).pow(i as u32));
            num = field.add_elems(&num, &field.mul_elems(&l[i], &vq));
        }
        let ppk = field.pow_elem(&p_elem, (p as u64).pow(k as u32));
        let den = field.sub_elems(&p_elem, &ppk);
        l.push(field.div_elems(&num, &den)?);
    }
    let mut log = TruncSeries::new(field.clone(), &["T"], cap)?;
    let mut pk = 1usize;
    for lk in l.iter() {
        log.set_coeff(&[pk], lk.clone());
        pk = match pk.checked_mul(p as usize) {
            Some(n) => n,
            None => break,
        };
        if pk > cap {
            break;
        }
    }
    Logarithm::from_series(log)
}

/// The p-typical law with the given Araki generators, certified integral.
pub fn ptypical_from_araki(
    field: &LocalField,
    vlist: &[LocalNum],
    cap: usize,
) -> Result<FormalGroupLaw<LocalField>> {
    let lg = log_from_araki(field, vlist, cap)?;
    let law = law_from_log(&lg, cap)?;
    super::check_integral(law.series())?;
    Ok(FormalGroupLaw::from_series(
        law.series().clone(),
        Provenance::FromAraki,
    )?)
}

/// Reads the logarithm coefficients l_k (k-th entry multiplies T^{p^k});
/// fails with the offending degree when a coefficient away from the p-power
/// slots is not zero.
pub fn ptypical_log_coeffs(lg: &Logarithm<LocalField>) -> Result<Vec<LocalNum>> {
    let field = lg.ring().clone();
    let p = field.p();
    for (m, c) in lg.log().iter() {
        let d = m.deg();
        if !is_p_power(d, p) && !field.is_zero(c) {
            return Err(Error::NotPTypical(d));
        }
    }
    let kmax = reach(p, lg.cap());
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut pk = 1usize;
    for _ in 0..=kmax {
        out.push(lg.log().coeff(&[pk]));
        pk = pk.saturating_mul(p as usize);
    }
    Ok(out)
}

fn is_p_power(mut d: usize, p: u64) -> bool {
    if d == 0 {
        return false;
    }
    while d % p as usize == 0 {
        d /= p as usize;
    }
    d == 1
}

/// Extracts the Araki generators from a p-typical law by peeling the
/// [p]-series: [p] = F-sum of v_i T^{p^i}. Returns v_1, v_2, ... up to the
/// cap's reach. The peel runs through the formal difference, so it does not
/// presume the Araki relation it is tested against.
pub fn araki_from_ptypical(
    law: &FormalGroupLaw<LocalField>,
    lg: &Logarithm<LocalField>,
) -> Result<Vec<LocalNum>> {
    let field = law.ring().clone();
    let p = field.p();
    // reject non-p-typical logs up front
    ptypical_log_coeffs(lg)?;
    let cap = law.cap().min(lg.cap());
    let p_series = endo(lg, &field.from_int(&BigInt::from(p)))?.truncate(cap);
    super::check_integral(&p_series)?;

    let kmax = reach(p, cap);
    let mut vs = Vec::new();
    // residual starts as [p] with the v_0 part removed: R = [p] -_F pT
    let pt = TruncSeries::var(field.clone(), &["T"], cap, "T")?
        .scale(&field.from_int(&BigInt::from(p)));
    let mut residual = law.formal_diff(&p_series, &pt)?;
    let mut pk = p as usize;
    for _ in 1..=kmax {
        // everything below T^{p^k} must already be gone
        if let Some((m, _)) = residual.first_failing(|c| field.is_zero(c)) {
            if m.deg() < pk {
                return Err(Error::NotPTypical(m.deg()));
            }
        }
        let vk = residual.coeff(&[pk]);
        vs.push(vk.clone());
        let term = {
            let mut t = TruncSeries::new(field.clone(), &["T"], cap)?;
            t.set_coeff(&[pk], vk);
            t
        };
        residual = law.formal_diff(&residual, &term)?;
        pk = pk.saturating_mul(p as usize);
    }
    if let Some((m, c)) = residual.first_failing(|c| field.is_zero(c)) {
        if m.deg() <= cap && !is_p_power(m.deg(), p) {
            let _ = c;
            return Err(Error::NotPTypical(m.deg()));
        }
    }
    Ok(vs)
}

/// (m+1) times the coefficient of T^{m+1} in the logarithm: the image of the
/// m-th projective-space class under the classifying homomorphism.
pub fn classifying_value(lg: &Logarithm<LocalField>, m: usize) -> Result<LocalNum> {
    if m + 1 > lg.cap() {
        return Err(Error::DegreeCapTooSmall {
            cap: lg.cap(),
            need: m + 1,
        });
    }
    let field = lg.ring().clone();
    let c = lg.log().coeff(&[m + 1]);
    Ok(field.mul_elems(&field.from_int(&BigInt::from((m + 1) as i64)), &c))
}
