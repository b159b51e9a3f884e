//! The Frobenius-polynomial construction: the unique law F over o_L with
//! F(f(X), f(Y)) = f(F(X, Y)) for f(T) = pi T + T^q, built degree by degree
//! from X + Y. The defect at each degree is homogeneous and is absorbed by
//! dividing by pi^d - pi, an exact order-one division.

use crate::error::{Error, Result};
use crate::fgl::{FormalGroupLaw, Provenance};
use crate::local::LocalField;
use crate::ring::Ring;
use crate::series::TruncSeries;

/// f(T) = pi T + T^q.
pub fn standard_frobenius(field: &LocalField, cap: usize) -> Result<TruncSeries<LocalField>> {
    let q = (field.p() as u128).pow(field.f() as u32);
    if (q as usize) > cap {
        return Err(Error::DegreeCapTooSmall {
            cap,
            need: q as usize,
        });
    }
    let mut f = TruncSeries::new(field.clone(), &["T"], cap)?;
    f.set_coeff(&[1], field.pi());
    f.set_coeff(&[q as usize], field.one());
    Ok(f)
}

/// Checks that f is a Frobenius polynomial for the field: f(0) = 0,
/// f'(0) = pi exactly, and f(T) congruent to T^q mod pi.
fn validate_frobenius(field: &LocalField, f: &TruncSeries<LocalField>) -> Result<()> {
    if f.nvars() != 1 {
        return Err(Error::Invalid("Frobenius series needs one variable".into()));
    }
    if !f.has_zero_constant_term() {
        return Err(Error::NonzeroConstantTerm);
    }
    if !field.eq_to_prec(&f.coeff(&[1]), &field.pi()) {
        return Err(Error::Invalid(
            "Frobenius series must start pi*T + higher".into(),
        ));
    }
    let q = (field.p() as u128).pow(field.f() as u32) as usize;
    for (m, c) in f.iter() {
        let r = field.residue(c)?;
        let expect_one = m.deg() == q;
        let is_one = r.first().copied() == Some(1) && r.iter().skip(1).all(|&x| x == 0);
        let is_zero = r.iter().all(|&x| x == 0);
        if expect_one && !is_one {
            return Err(Error::Invalid(format!(
                "Frobenius series must reduce to T^{q} mod pi; coefficient of T^{q} is not 1"
            )));
        }
        if !expect_one && !is_zero {
            return Err(Error::Invalid(format!(
                "Frobenius series must reduce to T^{q} mod pi; degree {} survives",
                m.deg()
            )));
        }
    }
    Ok(())
}

/// Lubin-Tate construction for a caller-supplied Frobenius polynomial.
pub fn lubin_tate_with_frobenius(
    field: &LocalField,
    f: &TruncSeries<LocalField>,
    cap: usize,
) -> Result<FormalGroupLaw<LocalField>> {
    validate_frobenius(field, f)?;
    let q = (field.p() as u128).pow(field.f() as u32) as usize;
    if cap < q {
        return Err(Error::DegreeCapTooSmall { cap, need: q });
    }
    let f = f.truncate(cap);
    let pi = field.pi();

    let mut law = {
        let mut s = TruncSeries::new(field.clone(), &["X", "Y"], cap)?;
        s.set_coeff(&[1, 0], field.one());
        s.set_coeff(&[0, 1], field.one());
        s
    };

    for d in 2..=cap {
        let fd = f.truncate(d);
        let lawd = law.truncate(d);
        let fx = fd.embed(&["X", "Y"], &[0])?;
        let fy = fd.embed(&["X", "Y"], &[1])?;
        let lhs = fd.substitute(&[&lawd])?;
        let rhs = lawd.substitute(&[&fx, &fy])?;
        let defect = lhs.sub(&rhs)?;

        // The relation holds below degree d by induction; anything else is a
        // uniqueness/bookkeeping failure.
        if defect
            .iter()
            .any(|(m, c)| m.deg() < d && !field.is_zero(c))
        {
            return Err(Error::NonUniqueSolution(d));
        }
        let divisor = field.sub_elems(&field.pow_elem(&pi, d as u64), &pi);
        let divisor_inv = field.inv_elem(&divisor)?;
        let mut touched = false;
        for (m, c) in defect.iter() {
            if m.deg() != d || field.is_zero(c) {
                continue;
            }
            let corr = field.mul_elems(c, &divisor_inv);
            let prev = law.coeff_mono(m);
            law.set_coeff_mono(*m, field.add_elems(&prev, &corr));
            touched = true;
        }
        let _ = touched;
    }

    super::check_integral(&law)?;
    FormalGroupLaw::from_series(law, Provenance::FromFrobenius)
}

/// Lubin-Tate construction with the standard f(T) = pi T + T^q; returns the
/// law together with f, which is its [pi]-endomorphism.
pub fn lubin_tate_from_frobenius(
    field: &LocalField,
    cap: usize,
) -> Result<(FormalGroupLaw<LocalField>, TruncSeries<LocalField>)> {
    let f = standard_frobenius(field, cap)?;
    let law = lubin_tate_with_frobenius(field, &f, cap)?;
    Ok((law, f))
}

/// Verifies the defining equivariance f(F(X,Y)) = F(f(X), f(Y)) to the cap.
pub fn frobenius_equivariance(
    law: &FormalGroupLaw<LocalField>,
    f: &TruncSeries<LocalField>,
) -> Result<bool> {
    let fx = f.embed(&["X", "Y"], &[0])?;
    let fy = f.embed(&["X", "Y"], &[1])?;
    let lhs = f.substitute(&[law.series()])?;
    let rhs = law.series().substitute(&[&fx, &fy])?;
    lhs.eq_to_cap(&rhs)
}
