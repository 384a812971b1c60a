use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::MultiLaurentPoly;
use super::rat::BigRat;
use super::var::{Monomial, Var};
use crate::error::{QckError, Result};

type Terms = Vec<(Monomial, BigRat)>;

/// Exact quotient `num / den` in the Laurent ring, or `None` when `den` does
/// not divide `num`.
pub fn exact_divide(num: &MultiLaurentPoly, den: &MultiLaurentPoly) -> Result<Option<MultiLaurentPoly>> {
    if num.ring() != den.ring() {
        return Err(QckError::RingMismatch { left: num.ring(), right: den.ring() });
    }
    if den.is_zero() {
        return Err(QckError::DivisionByZero);
    }
    let ring = num.ring();
    if num.is_zero() {
        return Ok(Some(MultiLaurentPoly::zero(ring)));
    }
    if den.len() == 1 {
        let (m, c) = &den.terms()[0];
        return Ok(Some(num.mul_term(&m.inv(), &c.recip())));
    }

    // Strip the monomial content of both sides. The shifted divisor has no
    // monomial factor, so Laurent divisibility reduces to polynomial divisibility.
    let sn = num.min_monomial();
    let sd = den.min_monomial();
    let n: Terms = num.terms().iter().map(|(m, c)| (m.div(&sn), c.clone())).collect();
    let d: Terms = den.terms().iter().map(|(m, c)| (m.div(&sd), c.clone())).collect();
    let shift = sn.div(&sd);

    let quotient = match univariate_var(&n, &d) {
        Some(v) => divide_dense(&n, &d, v),
        None => divide_sparse(&n, &d),
    };
    let Some(qt) = quotient else { return Ok(None) };
    let qt: Terms = qt.into_iter().map(|(m, c)| (m.mul(&shift), c)).collect();
    let q = MultiLaurentPoly::from_sorted_unchecked(ring, qt);
    debug_assert_eq!(&(&q * den), num);
    Ok(Some(q))
}

fn univariate_var(a: &Terms, b: &Terms) -> Option<Var> {
    let mut var = None;
    for (m, _) in a.iter().chain(b.iter()) {
        for (v, _) in m.support() {
            match var {
                None => var = Some(v),
                Some(w) if w == v => {}
                Some(_) => return None,
            }
        }
    }
    Some(var.unwrap_or(Var::Q))
}

fn divide_dense(n: &Terms, d: &Terms, v: Var) -> Option<Terms> {
    let deg_n = n.last()?.0.exp(v) as usize;
    let deg_d = d.last()?.0.exp(v) as usize;
    if deg_d > deg_n {
        return None;
    }
    let mut rem = vec![BigRat::ZERO; deg_n + 1];
    for (m, c) in n {
        rem[m.exp(v) as usize] = c.clone();
    }
    let lead_inv = d.last().unwrap().1.recip();
    let dd: Vec<(usize, BigRat)> = d.iter().map(|(m, c)| (m.exp(v) as usize, c.clone())).collect();
    let mut quot = vec![BigRat::ZERO; deg_n - deg_d + 1];
    for k in (0..=deg_n - deg_d).rev() {
        let top = &rem[k + deg_d];
        if top.is_zero() {
            continue;
        }
        let f = top * &lead_inv;
        for (e, c) in &dd {
            let prod = &f * c;
            rem[k + e] -= &prod;
        }
        quot[k] = f;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(
        quot.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(v, i as i32), c))
            .collect(),
    )
}

fn divide_sparse(n: &Terms, d: &Terms) -> Option<Terms> {
    let (lead_m, lead_c) = d.last().unwrap();
    let lead_inv = lead_c.recip();
    let mut rem: BTreeMap<Monomial, BigRat> = n.iter().cloned().collect();
    let mut quot: Terms = Vec::new();
    // When `d` divides the running remainder, so does its leading term divide
    // the remainder's leading term; the first failure is therefore final.
    while let Some((m, c)) = rem.pop_last() {
        let qm = m.div(lead_m);
        if !qm.is_polynomial() {
            return None;
        }
        let f = &c * &lead_inv;
        for (dm, dc) in &d[..d.len() - 1] {
            let key = dm.mul(&qm);
            let prod = &f * dc;
            let entry = rem.entry(key).or_default();
            *entry -= &prod;
            if entry.is_zero() {
                rem.remove(&key);
            }
        }
        quot.push((qm, f));
    }
    quot.reverse();
    Some(quot)
}

/// Quotient and remainder of `a` by a monic `m`, both integer polynomials in
/// `q` alone with non-negative exponents.
pub fn divrem_in_q(a: &MultiLaurentPoly, m: &MultiLaurentPoly) -> Result<(MultiLaurentPoly, MultiLaurentPoly)> {
    let av = dense_int_q(a)?;
    let mv = dense_int_q(m)?;
    if mv.is_empty() {
        return Err(QckError::DivisionByZero);
    }
    if !mv.last().unwrap().is_one() {
        return Err(QckError::NonMonic);
    }
    let dm = mv.len() - 1;
    let mut rem = av;
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dm)];
    for k in (0..quot.len()).rev() {
        let f = std::mem::take(&mut rem[k + dm]);
        if f.is_zero() {
            continue;
        }
        for (e, c) in mv[..dm].iter().enumerate() {
            if !c.is_zero() {
                rem[k + e] -= &f * c;
            }
        }
        quot[k] = f;
    }
    rem.truncate(dm.min(rem.len()));
    Ok((from_dense(quot, a), from_dense(rem, a)))
}

fn dense_int_q(p: &MultiLaurentPoly) -> Result<Vec<BigInt>> {
    if !p.is_univariate_q() {
        return Err(QckError::ExtraVariables(p.to_string()));
    }
    let Some((lo, hi)) = p.degree_range(Var::Q) else { return Ok(Vec::new()) };
    if lo < 0 {
        return Err(QckError::InvalidParams(format!("negative power of q in `{p}`")));
    }
    let mut out = vec![BigInt::zero(); hi as usize + 1];
    for (mono, c) in p.terms() {
        out[mono.exp(Var::Q) as usize] = c.to_bigint().ok_or_else(|| QckError::NonInteger(p.to_string()))?;
    }
    Ok(out)
}

fn from_dense(coeffs: Vec<BigInt>, like: &MultiLaurentPoly) -> MultiLaurentPoly {
    let terms: Terms = coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (Monomial::var(Var::Q, i as i32), BigRat::from_bigint(c)))
        .collect();
    MultiLaurentPoly::from_sorted_unchecked(like.ring(), terms)
}

/// Content of an integer polynomial: gcd of its coefficients.
pub fn integer_content(p: &MultiLaurentPoly) -> Option<BigInt> {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(&c.to_bigint()?);
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Ring;

    fn p(s: &str) -> MultiLaurentPoly {
        MultiLaurentPoly::parse_in(s, Ring::new(&[Var::A, Var::X])).unwrap()
    }

    #[test]
    fn exact_quotients() {
        assert_eq!(exact_divide(&p("1 - q^3"), &p("1 - q")).unwrap(), Some(p("1 + q + q^2")));
        assert_eq!(exact_divide(&p("q^-2 - q"), &p("q^-1 - q^2")).unwrap(), Some(p("q^-1")));
        let prod = &p("1 - a*x") * &p("2 + q*x^-1 - a");
        assert_eq!(exact_divide(&prod, &p("1 - a*x")).unwrap(), Some(p("2 + q*x^-1 - a")));
        assert_eq!(exact_divide(&prod, &p("2*q^5 + q^6*x^-1 - a*q^5")).unwrap(), Some(p("q^-5 - a*q^-5*x")));
    }

    #[test]
    fn non_divisible() {
        assert_eq!(exact_divide(&p("1 + q"), &p("1 - q")).unwrap(), None);
        assert_eq!(exact_divide(&p("1 + a"), &p("1 + x")).unwrap(), None);
        assert_eq!(exact_divide(&p("1"), &p("1 - a")).unwrap(), None);
    }

    #[test]
    fn division_errors() {
        assert!(matches!(exact_divide(&p("q"), &p("0")), Err(QckError::DivisionByZero)));
        let r = Ring::q_only();
        let a = MultiLaurentPoly::parse_in("1 + q", r).unwrap();
        assert!(matches!(exact_divide(&a, &p("q")), Err(QckError::RingMismatch { .. })));
    }

    #[test]
    fn divrem_examples() {
        let r = Ring::q_only();
        let q = |s: &str| MultiLaurentPoly::parse_in(s, r).unwrap();
        let (quo, rem) = divrem_in_q(&q("q^3"), &q("1 + q + q^2")).unwrap();
        assert_eq!(rem, q("1"));
        assert_eq!(quo, q("q - 1"));
        let (_, rem) = divrem_in_q(&q("1 + q"), &q("1 + q + q^2")).unwrap();
        assert_eq!(rem, q("1 + q"));
        assert!(matches!(divrem_in_q(&q("q"), &q("2*q + 1")), Err(QckError::NonMonic)));
        assert!(matches!(divrem_in_q(&q("1/2*q"), &q("q + 1")), Err(QckError::NonInteger(_))));
        assert!(matches!(
            divrem_in_q(&p("a"), &q("q + 1").embed(p("a").ring()).unwrap()),
            Err(QckError::ExtraVariables(_))
        ));
    }
}
