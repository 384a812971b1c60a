//! Congruences of Laurent polynomials in `q` modulo `[p]` and `[p]^2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::delannoy::{dq, dq_inverse, minus_one_poch, minus_q_poch};
use crate::error::{QckError, Result};
use crate::exactalg::{divrem_in_q, exact_divide, BigRat, Monomial, MultiLaurentPoly, Ring, Var};
use crate::qkit::{qbinomial, qbinomial_factored, Factored, Frac, QBracket, Term};
use crate::report::{Checker, VerificationReport};

/// Largest prime accepted by trial division.
pub const MAX_PRIME: u64 = 10_000;

pub fn is_odd_prime(p: u64) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `[p]` and `[p]^2` for an odd prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketModulus {
    p: u64,
    bracket: QBracket,
    bracket_sq: MultiLaurentPoly,
}

impl BracketModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_odd_prime(p) {
            return Err(QckError::NotOddPrime(p));
        }
        let bracket = QBracket::new(p as u32)?;
        let bracket_sq = bracket.poly() * bracket.poly();
        Ok(BracketModulus { p, bracket, bracket_sq })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn bracket(&self) -> &MultiLaurentPoly {
        self.bracket.poly()
    }

    pub fn bracket_sq(&self) -> &MultiLaurentPoly {
        &self.bracket_sq
    }

    /// `Y` with `q Y = [p]^2 - 1`, so `-Y` inverts `q` modulo `[p]^2`.
    pub fn q_inverse_witness(&self) -> MultiLaurentPoly {
        let one = MultiLaurentPoly::one(Ring::q_only());
        (&self.bracket_sq - &one).mul_term(&Monomial::var(Var::Q, -1), &BigRat::ONE)
    }

    fn modulus(&self, square: bool) -> &MultiLaurentPoly {
        if square {
            &self.bracket_sq
        } else {
            self.bracket.poly()
        }
    }
}

/// `q^N (u - v)` reduced modulo `[p]` (or `[p]^2`), `N` the least shift
/// making it a polynomial.
pub fn laurent_residue(
    u: &MultiLaurentPoly,
    v: &MultiLaurentPoly,
    modulus: &BracketModulus,
    square: bool,
) -> Result<MultiLaurentPoly> {
    let d = u.try_sub(v)?;
    if d.is_zero() {
        return Ok(d);
    }
    let shift = d.degree_range(Var::Q).map_or(0, |(lo, _)| lo.min(0));
    let cleared = d.mul_term(&Monomial::var(Var::Q, -shift), &BigRat::ONE);
    Ok(divrem_in_q(&cleared, modulus.modulus(square))?.1)
}

/// Whether `u ≡ v` modulo `[p]` (or `[p]^2`) after clearing negative powers
/// of `q`, which is a unit modulo both.
pub fn laurent_congruent(
    u: &MultiLaurentPoly,
    v: &MultiLaurentPoly,
    modulus: &BracketModulus,
    square: bool,
) -> Result<bool> {
    Ok(laurent_residue(u, v, modulus, square)?.is_zero())
}

fn q_only(s: &str) -> MultiLaurentPoly {
    MultiLaurentPoly::parse_in(s, Ring::q_only()).expect("static polynomial")
}

fn qpow(e: i64) -> Monomial {
    Monomial::var(Var::Q, e as i32)
}

fn bracket_n(n: i64) -> MultiLaurentPoly {
    let terms = (0..n).map(|i| (qpow(i), BigRat::ONE));
    MultiLaurentPoly::from_terms(Ring::q_only(), terms).expect("q-only terms")
}

/// `(-q;q)_(p-1) ≡ 1 (mod [p])`.
pub fn verify_minus_q_pochhammer(p: u64) -> Result<VerificationReport> {
    let modulus = BracketModulus::new(p)?;
    let mut ck = Checker::new("minus_q_pochhammer", &[("p", p as i64)], &[]);
    let r = laurent_residue(&minus_q_poch(p as i64 - 1), &q_only("1"), &modulus, false)?;
    ck.zero("(-q;q)_(p-1) - 1 mod [p]", &r);
    Ok(ck.finish())
}

/// `sum_{k=j}^{n-1} (1-q^(2k+1)) [k+j;2j] q^(-(j+1)k)` against
/// `(1-q^n)(1-q^(n-j)) / (1-q^(j+1)) [n+j;2j] q^(-(j+1)(n-1))`.
pub fn verify_qidentity(n: i64, j: i64) -> Result<VerificationReport> {
    if j < 0 || j >= n {
        return Err(QckError::InvalidParams(format!("need 0 <= j <= n - 1, got n={n}, j={j}")));
    }
    let mut ck = Checker::new("qidentity", &[("n", n), ("j", j)], &[]);
    let ring = Ring::q_only();
    let om = |e: i64| Factored::one_minus(&crate::exactalg::ParamExpr::q_pow(e as i32));
    let qf = |e: i64| Factored::var_pow(Var::Q, e as i32);
    let lhs: Vec<Term> = (j..n)
        .map(|k| Term::new(om(2 * k + 1).mul(&qbinomial_factored(k + j, 2 * j)).mul(&qf(-(j + 1) * k))))
        .collect();
    let rhs = &om(n).mul(&om(n - j)).mul(&qbinomial_factored(n + j, 2 * j)).mul(&qf(-(j + 1) * (n - 1))) / &om(j + 1);
    let built = Frac::sum(ring, &lhs).and_then(|l| Ok((l, Frac::sum(ring, &[Term::new(rhs)])?)));
    if let Some((l, r)) = ck.require("build", built) {
        if let Some(d) = ck.require("clear", l.difference(&r)) {
            ck.zero("telescoping sum", &d);
        }
    }
    Ok(ck.finish())
}

fn check_thm2_params(p: u64, m: i64) -> Result<()> {
    if p > MAX_PRIME || !is_odd_prime(p) {
        return Err(QckError::NotOddPrime(p));
    }
    if m < 1 {
        return Err(QckError::InvalidParams(format!("need m >= 1, got {m}")));
    }
    Ok(())
}

/// `sum_{k<p} (1-q^(2k+1))/(1-q) D_q(m,k) D_(1/q)(m,k) q^-k` from the
/// Delannoy polynomials.
pub fn thm2_lhs_direct(p: u64, m: i64) -> Result<MultiLaurentPoly> {
    check_thm2_params(p, m)?;
    let terms: Vec<MultiLaurentPoly> = (0..p as i64)
        .map(|k| (&(&bracket_n(2 * k + 1) * &dq(m, k)) * &dq_inverse(m, k)).mul_term(&qpow(-k), &BigRat::ONE))
        .collect();
    Ok(MultiLaurentPoly::sum(Ring::q_only(), &terms))
}

/// The same sum after applying the product formula and summing over `k`
/// first: a single sum over `j < p`.
pub fn thm2_lhs_single_sum(p: u64, m: i64) -> Result<MultiLaurentPoly> {
    check_thm2_params(p, m)?;
    let p = p as i64;
    let ring = Ring::q_only();
    let om = |e: i64| Factored::one_minus(&crate::exactalg::ParamExpr::q_pow(e as i32));
    let mut terms = Vec::new();
    for j in 0..p {
        let f = &om(p)
            .mul(&om(p - j))
            .mul(&qbinomial_factored(p + j, 2 * j))
            .mul(&Factored::var_pow(Var::Q, (j * j - m * j - (j + 1) * (p - 1)) as i32))
            / &om(1).mul(&om(j + 1));
        let extra = &(&(&qbinomial(m, j) * &qbinomial(m + j, j)) * &minus_one_poch(j)) * &minus_q_poch(j);
        terms.push(Term::with_poly(f, extra));
    }
    Frac::sum(ring, &terms)?.to_poly()?.ok_or_else(|| QckError::NotDivisible(format!("single sum at p={p}, m={m}")))
}

/// The left side computed both ways; disagreement is an error.
pub fn thm2_lhs(p: u64, m: i64) -> Result<MultiLaurentPoly> {
    let direct = thm2_lhs_direct(p, m)?;
    let single = thm2_lhs_single_sum(p, m)?;
    if direct != single {
        return Err(QckError::Mismatch(format!("p={p}, m={m}: {direct} vs {single}")));
    }
    Ok(direct)
}

/// Which residue class of `m` modulo `p` selects the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thm2Case {
    Zero,
    MinusOne,
    Other,
}

impl Thm2Case {
    pub fn of(p: u64, m: i64) -> Self {
        match m.rem_euclid(p as i64) {
            0 => Thm2Case::Zero,
            r if r == p as i64 - 1 => Thm2Case::MinusOne,
            _ => Thm2Case::Other,
        }
    }
}

impl fmt::Display for Thm2Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Thm2Case::Zero => "zero",
            Thm2Case::MinusOne => "minus_one",
            Thm2Case::Other => "other",
        })
    }
}

/// `q(1-q^(-2m))/(1-q^2)`, `q(1-q^(2m+2))/(1-q^2)` or `0`, as a Laurent
/// polynomial.
pub fn thm2_target(p: u64, m: i64) -> Result<MultiLaurentPoly> {
    let ring = Ring::q_only();
    let num = match Thm2Case::of(p, m) {
        Thm2Case::Zero => {
            MultiLaurentPoly::from_terms(ring, [(qpow(1), BigRat::ONE), (qpow(1 - 2 * m), BigRat::from(-1))])?
        }
        Thm2Case::MinusOne => {
            MultiLaurentPoly::from_terms(ring, [(qpow(1), BigRat::ONE), (qpow(2 * m + 3), BigRat::from(-1))])?
        }
        Thm2Case::Other => return Ok(MultiLaurentPoly::zero(ring)),
    };
    exact_divide(&num, &q_only("1 - q^2"))?.ok_or_else(|| QckError::NotDivisible(format!("target at p={p}, m={m}")))
}

/// The three-case congruence modulo `[p]^2`.
pub fn verify_thm2(p: u64, m: i64) -> Result<VerificationReport> {
    check_thm2_params(p, m)?;
    let modulus = BracketModulus::new(p)?;
    let case = Thm2Case::of(p, m);
    let mut ck = Checker::new("thm2", &[("p", p as i64), ("m", m)], &[]);
    ck.note(format!("case={case}"));
    if let (Some(lhs), Some(target)) =
        (ck.require("left side", thm2_lhs(p, m)), ck.require("target", thm2_target(p, m)))
    {
        if let Some(r) = ck.require("reduce", laurent_residue(&lhs, &target, &modulus, true)) {
            ck.zero("congruence mod [p]^2", &r);
        }
    }
    Ok(ck.finish())
}

/// `(1-q^(p-j))(1-q^(j+1)) / ((1-q)(1-q^p)) [p+j;2j][m+1;j+1][m+j;j+1]`,
/// exactly divided; `None` when the division leaves a remainder.
pub fn divisibility_quotient(p: u64, j: i64, m: i64) -> Result<Option<MultiLaurentPoly>> {
    let p = p as i64;
    let om = |e: i64| Factored::one_minus(&crate::exactalg::ParamExpr::q_pow(e as i32));
    let f = &om(p - j).mul(&om(j + 1)) / &om(1).mul(&om(p));
    let binoms = &(&qbinomial(p + j, 2 * j) * &qbinomial(m + 1, j + 1)) * &qbinomial(m + j, j + 1);
    Frac::sum(Ring::q_only(), &[Term::with_poly(f, binoms)])?.to_poly()
}

/// The divisibility fact for `0 <= j <= p-1`: each quotient is a polynomial
/// with non-negative integer coefficients.
pub fn verify_divisibility_fact(p: u64, m: i64) -> Result<VerificationReport> {
    check_thm2_params(p, m)?;
    let mut ck = Checker::new("divisibility_fact", &[("p", p as i64), ("m", m)], &[]);
    for j in 0..p as i64 {
        if let Some(q) = ck.require(&format!("j={j}"), divisibility_quotient(p, j, m)) {
            let ok = q.as_ref().is_some_and(|q| q.is_nonneg_integer_laurent().unwrap_or(false));
            ck.holds(&format!("j={j} quotient is a non-negative integer polynomial"), ok, || format!("{q:?}"));
        }
    }
    Ok(ck.finish())
}
