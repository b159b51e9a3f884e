//! Human-readable series format: `1 + 3*X^2*Y - X*Y + O(deg 5)`.
//!
//! Coefficients print through the ring; when the printed form is not a bare
//! atom it is parenthesized. The parser accepts what the printer emits plus
//! reasonable variations (whitespace, explicit `1*`, reordered factors).

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::{Mono, TruncSeries};

impl<R: Ring> TruncSeries<R> {
    pub fn to_text(&self) -> String {
        let mut terms = Vec::new();
        for (m, c) in self.iter() {
            if self.ring().is_exact() && self.ring().is_zero(c) {
                continue;
            }
            let mono = self.fmt_mono(m);
            let coef = self.ring().fmt_elem(c);
            let coef = if needs_parens(&coef) {
                format!("({coef})")
            } else {
                coef
            };
            terms.push(match (mono.as_str(), coef.as_str()) {
                (_, "1") if !mono.is_empty() => mono,
                ("", _) => coef,
                _ => format!("{coef}*{mono}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        format!("{body} + O(deg {})", self.cap() + 1)
    }

    fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, v) in self.vars().iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(v.clone()),
                e => parts.push(format!("{v}^{e}")),
            }
        }
        parts.join("*")
    }

    /// Parses a series in the given context. The optional trailing
    /// `+ O(deg N)` is checked against the context cap when present.
    pub fn parse(ring: R, vars: &[&str], cap: usize, text: &str) -> Result<TruncSeries<R>> {
        if text.trim().is_empty() {
            return Err(Error::Invalid("empty series text".into()));
        }
        let mut out = TruncSeries::new(ring.clone(), vars, cap)?;
        for (sign, term) in split_terms(text)? {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Invalid("empty term".into()));
            }
            if let Some(rest) = term.strip_prefix("O(") {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Invalid(format!("unclosed O-term {term:?}")))?;
                let n: usize = inner
                    .trim()
                    .strip_prefix("deg")
                    .ok_or_else(|| Error::Invalid(format!("bad O-term {term:?}")))?
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad O-term {term:?}")))?;
                if n != cap + 1 {
                    return Err(Error::Invalid(format!(
                        "O(deg {n}) does not match cap {cap}"
                    )));
                }
                continue;
            }
            let (mono, coef) = parse_term(&ring, vars, term)?;
            if mono.deg() > cap {
                return Err(Error::Invalid(format!(
                    "term {term:?} exceeds degree cap {cap}"
                )));
            }
            let coef = if sign < 0 { ring.neg(&coef) } else { coef };
            let prev = out.coeff_mono(&mono);
            out.set_coeff_mono(mono, ring.add(&prev, &coef));
        }
        Ok(out)
    }
}

fn needs_parens(s: &str) -> bool {
    if s.starts_with('(') && s.ends_with(')') || s.starts_with('[') && s.ends_with(']') {
        return false;
    }
    s.contains('+') || s.contains(' ') || s.contains('*') || (s.len() > 1 && s[1..].contains('-'))
}

/// Splits on top-level + and -, honoring (), [] nesting. Returns the sign of
/// each term.
fn split_terms(text: &str) -> Result<Vec<(i32, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut sign = 1i32;
    for ch in text.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Invalid("unbalanced brackets".into()));
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() && ch == '-' && out.is_empty() {
                    // leading minus
                    sign = -sign;
                } else if cur.trim().is_empty() && ch == '-' {
                    // consecutive operator like "+ -x"
                    sign = -sign;
                } else if cur.trim().is_empty() {
                    // leading or doubled plus: no-op
                } else {
                    out.push((sign, std::mem::take(&mut cur)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Invalid("unbalanced brackets".into()));
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur));
    }
    Ok(out)
}

fn split_factors(term: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in term.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '*' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    Ok(out)
}

fn parse_term<R: Ring>(ring: &R, vars: &[&str], term: &str) -> Result<(Mono, R::Elem)> {
    let mut exps = vec![0usize; vars.len()];
    let mut coef = ring.one();
    for factor in split_factors(term)? {
        let f = factor.trim();
        if f.is_empty() {
            return Err(Error::Invalid(format!("empty factor in {term:?}")));
        }
        let (base, exp) = match f.split_once('^') {
            Some((b, e)) => {
                let e: usize = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad exponent in {f:?}")))?;
                (b.trim(), e)
            }
            None => (f, 1),
        };
        if let Some(axis) = vars.iter().position(|v| *v == base) {
            exps[axis] += exp;
        } else {
            // a coefficient literal, possibly parenthesized
            let lit = base
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(base);
            let c = ring.parse_elem(lit)?;
            for _ in 0..exp {
                coef = ring.mul(&coef, &c);
            }
        }
    }
    Ok((Mono::from_exps(&exps), coef))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntegerRing, SmallRing};
    use num_bigint::BigInt;

    #[test]
    fn print_parse_roundtrip_integers() {
        let mut f = TruncSeries::new(IntegerRing, &["X", "Y"], 4).unwrap();
        f.set_coeff(&[1, 0], BigInt::from(1));
        f.set_coeff(&[0, 1], BigInt::from(-2));
        f.set_coeff(&[2, 1], BigInt::from(7));
        let text = f.to_text();
        assert_eq!(text, "X + -2*Y + 7*X^2*Y + O(deg 5)");
        let g = TruncSeries::parse(IntegerRing, &["X", "Y"], 4, &text).unwrap();
        assert!(f.eq_to_cap(&g).unwrap());
    }

    #[test]
    fn parse_handles_signs_and_whitespace() {
        let f = TruncSeries::parse(IntegerRing, &["X", "Y"], 3, "- X + 3 * X * Y - 2*Y^2")
            .unwrap();
        assert_eq!(f.coeff(&[1, 0]), BigInt::from(-1));
        assert_eq!(f.coeff(&[1, 1]), BigInt::from(3));
        assert_eq!(f.coeff(&[0, 2]), BigInt::from(-2));
    }

    #[test]
    fn parse_combines_repeated_monomials() {
        let f = TruncSeries::parse(IntegerRing, &["T"], 3, "T + T + 2*T^2 - T^2").unwrap();
        assert_eq!(f.coeff(&[1]), BigInt::from(2));
        assert_eq!(f.coeff(&[2]), BigInt::from(1));
    }

    #[test]
    fn parse_checks_o_term_and_cap() {
        assert!(TruncSeries::parse(IntegerRing, &["T"], 3, "T + O(deg 4)").is_ok());
        assert!(TruncSeries::parse(IntegerRing, &["T"], 3, "T + O(deg 5)").is_err());
        assert!(TruncSeries::parse(IntegerRing, &["T"], 3, "T^4").is_err());
    }

    #[test]
    fn roundtrip_over_gf() {
        let r = SmallRing::gf(9).unwrap();
        let mut f = TruncSeries::new(r.clone(), &["X", "Y"], 3).unwrap();
        // element [1,2] = 1 + 2w
        let e = r.from_coords(&[1, 2]).unwrap();
        f.set_coeff(&[1, 1], e);
        f.set_coeff(&[1, 0], crate::ring::Ring::one(&r));
        let text = f.to_text();
        let g = TruncSeries::parse(r, &["X", "Y"], 3, &text).unwrap();
        assert!(f.eq_to_cap(&g).unwrap());
    }

    #[test]
    fn zero_series_prints_and_parses() {
        let f = TruncSeries::<IntegerRing>::new(IntegerRing, &["T"], 2).unwrap();
        assert_eq!(f.to_text(), "0 + O(deg 3)");
        let g = TruncSeries::parse(IntegerRing, &["T"], 2, "0 + O(deg 3)").unwrap();
        assert!(g.is_zero());
    }
}
