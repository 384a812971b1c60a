//! Laurent polynomials built from `D_q(m,k) D_(1/q)(m,k)` whose coefficients
//! are non-negative integers, and the linearization of products of the
//! basis `[n+k;2k][2k;k] q^(-nk)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::delannoy::{delannoy, dq, dq_inverse, minus_one_poch, minus_q_poch};
use crate::error::{QckError, Result};
use crate::exactalg::{exact_divide, BigRat, Monomial, MultiLaurentPoly, ParamExpr, Ring, Var, MAX_XI};
use crate::qkit::{qbinomial, qbinomial_factored, Factored, Frac, Term};
use crate::report::{Checker, VerificationReport};

fn q_ring() -> Ring {
    Ring::q_only()
}

fn qpow(e: i64) -> Monomial {
    Monomial::var(Var::Q, e as i32)
}

fn shift(p: &MultiLaurentPoly, e: i64) -> MultiLaurentPoly {
    p.mul_term(&qpow(e), &BigRat::ONE)
}

fn one_minus(e: i64) -> MultiLaurentPoly {
    MultiLaurentPoly::from_terms(q_ring(), [(Monomial::ONE, BigRat::ONE), (qpow(e), BigRat::from(-1))])
        .expect("q-only terms")
}

fn om(e: i64) -> Factored {
    Factored::one_minus(&ParamExpr::q_pow(e as i32))
}

fn c2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// `[n+k;2k][2k;k] q^(-nk)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnBasisElement {
    pub n: i64,
    pub k: i64,
    pub value: MultiLaurentPoly,
}

impl SnBasisElement {
    pub fn new(n: i64, k: i64) -> Self {
        let value = shift(&(&qbinomial(n + k, 2 * k) * &qbinomial(2 * k, k)), -n * k);
        SnBasisElement { n, k, value }
    }
}

/// `S_n = sum_k [n+k;2k][2k;k] q^(-nk) x_k` for given `x_0, ..., x_n`.
pub fn s_n(values: &[MultiLaurentPoly], n: i64) -> Result<MultiLaurentPoly> {
    if n < 0 || values.len() != n as usize + 1 {
        return Err(QckError::InvalidParams(format!("S_{n} needs {} values, got {}", n + 1, values.len())));
    }
    let ring = values.iter().fold(q_ring(), |r, v| r.union(v.ring()));
    let terms = values
        .iter()
        .enumerate()
        .map(|(k, x)| SnBasisElement::new(n, k as i64).value.embed(ring)?.try_mul(&x.embed(ring)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiLaurentPoly::sum(ring, &terms))
}

/// `[k+i;2i][2i;i][k+j;2j][2j;j] = sum_s [i+j;i][j;s-i][s;j][k+s;2s][2s;s] q^((i+j-s)(k-s))`.
pub fn verify_schmidt(k: i64, i: i64, j: i64) -> Result<VerificationReport> {
    if i < 0 || j < 0 || i > k || j > k {
        return Err(QckError::InvalidParams(format!("need 0 <= i, j <= k, got k={k}, i={i}, j={j}")));
    }
    let mut ck = Checker::new("schmidt", &[("k", k), ("i", i), ("j", j)], &[]);
    let t = |i: i64| &qbinomial(k + i, 2 * i) * &qbinomial(2 * i, i);
    let lhs = &t(i) * &t(j);
    let terms: Vec<_> = (i..=i + j)
        .map(|s| {
            let c = &(&qbinomial(i + j, i) * &qbinomial(j, s - i)) * &qbinomial(s, j);
            shift(&(&c * &t(s)), (i + j - s) * (k - s))
        })
        .collect();
    ck.equal("linearization", &lhs, &MultiLaurentPoly::sum(q_ring(), &terms));
    Ok(ck.finish())
}

/// `P(i,j,s) = [i+j;i][j;s-i][s;j] q^(-s(i+j-s))`, the coefficient of the
/// basis element `s` in the product of basis elements `i` and `j`.
pub fn structure_constant(i: i64, j: i64, s: i64) -> MultiLaurentPoly {
    let c = &(&qbinomial(i + j, i) * &qbinomial(j, s - i)) * &qbinomial(s, j);
    shift(&c, -s * (i + j - s))
}

/// Structure constants `P(i,j,s)` for `i, j <= max`, `i <= s <= i+j`.
#[derive(Clone, Debug)]
pub struct LinearizationTable {
    pub max: i64,
    pub entries: BTreeMap<(i64, i64), Vec<(i64, MultiLaurentPoly)>>,
}

impl LinearizationTable {
    pub fn build(max: i64) -> Self {
        let mut entries = BTreeMap::new();
        for i in 0..=max {
            for j in 0..=max {
                entries.insert((i, j), (i..=i + j).map(|s| (s, structure_constant(i, j, s))).collect());
            }
        }
        LinearizationTable { max, entries }
    }

    /// Whether every constant has non-negative integer coefficients.
    pub fn all_nonneg(&self) -> bool {
        self.entries.values().flatten().all(|(_, p)| p.has_nonneg_integer_coeffs())
    }
}

/// Coefficients `P(i_1, ..., i_r, s)` of the product of basis elements
/// `i_1, ..., i_r`, by repeated linearization.
pub fn linearize(indices: &[i64]) -> BTreeMap<i64, MultiLaurentPoly> {
    let mut acc = BTreeMap::new();
    let Some((&first, rest)) = indices.split_first() else {
        acc.insert(0, MultiLaurentPoly::one(q_ring()));
        return acc;
    };
    acc.insert(first, MultiLaurentPoly::one(q_ring()));
    for &j in rest {
        let mut next: BTreeMap<i64, MultiLaurentPoly> = BTreeMap::new();
        for (i, c) in &acc {
            for s in *i..=i + j {
                let t = c * &structure_constant(*i, j, s);
                let slot = next.entry(s).or_insert_with(|| MultiLaurentPoly::zero(q_ring()));
                *slot = &*slot + &t;
            }
        }
        acc = next;
    }
    acc
}

/// `x_k = [m+k;2k] (-1;q)_k (-q;q)_k q^(k^2-mk)`
pub fn xk_weights(m: i64, k: i64) -> MultiLaurentPoly {
    let p = &(&qbinomial(m + k, 2 * k) * &minus_one_poch(k)) * &minus_q_poch(k);
    shift(&p, k * k - m * k)
}

/// `S_n(x_0, ..., x_n) = D_q(m,n) D_(1/q)(m,n)` with the weights above.
pub fn verify_xk_expansion(m: i64, n: i64) -> Result<VerificationReport> {
    let mut ck = Checker::new("xk_expansion", &[("m", m), ("n", n)], &[]);
    let xs: Vec<_> = (0..=n).map(|k| xk_weights(m, k)).collect();
    if let Some(s) = ck.require("S_n", s_n(&xs, n)) {
        ck.equal("S_n = D_q D_(1/q)", &s, &(&dq(m, n) * &dq_inverse(m, n)));
    }
    for (k, x) in xs.iter().enumerate() {
        ck.holds(&format!("x_{k} non-negative"), x.has_nonneg_integer_coeffs(), || x.to_string());
    }
    Ok(ck.finish())
}

/// `sum_{k=s}^{n-1} (-1)^(n-k-1) (1-q^(2k+1)) [k+s;2s][2s;s] q^(C(k,2)-sk)`
/// against `(1-q^n) [n-1;s][n+s;s] q^(C(n,2)-sn)`; also
/// `(1-q^(n-s))/(1-q^(s+1)) [n+s;2s][2s;s] = [n+s;s][n;s+1]`.
pub fn verify_alternating_sum(n: i64, s: i64) -> Result<VerificationReport> {
    if s < 0 || s >= n {
        return Err(QckError::InvalidParams(format!("need 0 <= s <= n - 1, got n={n}, s={s}")));
    }
    let mut ck = Checker::new("alternating_sum", &[("n", n), ("s", s)], &[]);
    let terms: Vec<_> = (s..n)
        .map(|k| {
            let b = &(&one_minus(2 * k + 1) * &qbinomial(k + s, 2 * s)) * &qbinomial(2 * s, s);
            let sign = if (n - k - 1) % 2 == 0 { BigRat::ONE } else { BigRat::from(-1) };
            b.mul_term(&qpow(c2(k) - s * k), &sign)
        })
        .collect();
    let rhs = shift(&(&(&one_minus(n) * &qbinomial(n - 1, s)) * &qbinomial(n + s, s)), c2(n) - s * n);
    ck.equal("alternating sum", &MultiLaurentPoly::sum(q_ring(), &terms), &rhs);
    let left = &(&one_minus(n - s) * &qbinomial(n + s, 2 * s)) * &qbinomial(2 * s, s);
    let right = &(&one_minus(s + 1) * &qbinomial(n + s, s)) * &qbinomial(n, s + 1);
    ck.equal("binomial reduction", &left, &right);
    Ok(ck.finish())
}

fn check_positive(name: &str, v: i64) -> Result<()> {
    if v < 1 {
        return Err(QckError::InvalidParams(format!("need {name} >= 1, got {v}")));
    }
    Ok(())
}

fn delannoy_product(m: i64, k: i64, r: u32) -> MultiLaurentPoly {
    (&dq(m, k) * &dq_inverse(m, k)).pow(r)
}

/// First claim, summed directly over the double factor `(1-q^n)^2`.
pub fn thm3_poly1_direct(m: i64, n: i64) -> Result<Option<MultiLaurentPoly>> {
    check_positive("m", m)?;
    check_positive("n", n)?;
    let pre = &om(m).mul(&om(m + 1)) / &om(2).mul(&om(n).pow(2));
    let terms: Vec<Term> =
        (0..n).map(|k| Term::with_poly(pre.mul(&om(2 * k + 1)), shift(&delannoy_product(m, k, 1), -k))).collect();
    Frac::sum(q_ring(), &terms)?.to_poly()
}

/// First claim after the product formula, as a single sum over `j < n`.
pub fn thm3_poly1_single_sum(m: i64, n: i64) -> Result<Option<MultiLaurentPoly>> {
    check_positive("m", m)?;
    check_positive("n", n)?;
    let terms: Vec<Term> = (0..n)
        .map(|j| {
            let f = &om(m).mul(&om(m + 1)).mul(&om(n - j)).mul(&qbinomial_factored(n + j, 2 * j))
                / &om(2).mul(&om(n)).mul(&om(j + 1));
            let f = f.mul(&Factored::var_pow(Var::Q, (j * j - m * j - (j + 1) * (n - 1)) as i32));
            let rest = &(&(&qbinomial(m, j) * &qbinomial(m + j, j)) * &minus_one_poch(j)) * &minus_q_poch(j);
            Term::with_poly(f, rest)
        })
        .collect();
    Frac::sum(q_ring(), &terms)?.to_poly()
}

fn divisible(what: &str, m: i64, n: i64, r: u32, p: Option<MultiLaurentPoly>) -> Result<MultiLaurentPoly> {
    p.ok_or_else(|| QckError::NotDivisible(format!("{what} at m={m}, n={n}, r={r}")))
}

/// `sum_{k<n} (1-q^m)(1-q^(m+1))(1-q^(2k+1)) / ((1-q^2)(1-q^n)^2) D_q(m,k) D_(1/q)(m,k) q^-k`,
/// computed both directly and through the single sum.
pub fn thm3_poly1(m: i64, n: i64) -> Result<MultiLaurentPoly> {
    let direct = divisible("thm3-1", m, n, 1, thm3_poly1_direct(m, n)?)?;
    let single = divisible("thm3-1 single sum", m, n, 1, thm3_poly1_single_sum(m, n)?)?;
    if direct != single {
        return Err(QckError::Mismatch(format!("thm3-1 at m={m}, n={n}: {direct} vs {single}")));
    }
    Ok(direct)
}

fn numerator(m: i64, n: i64, r: u32, alternating: bool) -> MultiLaurentPoly {
    let terms: Vec<_> = (0..n)
        .map(|k| {
            let p = &one_minus(2 * k + 1) * &delannoy_product(m, k, r);
            if alternating {
                let sign = if (n - k - 1) % 2 == 0 { BigRat::ONE } else { BigRat::from(-1) };
                p.mul_term(&qpow(c2(k)), &sign)
            } else {
                shift(&p, -k)
            }
        })
        .collect();
    MultiLaurentPoly::sum(q_ring(), &terms)
}

/// `sum_{k<n} (1-q^(2k+1))/(1-q^n) (D_q(m,k) D_(1/q)(m,k))^r q^-k`
pub fn thm3_poly2(m: i64, n: i64, r: u32) -> Result<MultiLaurentPoly> {
    check_positive("m", m)?;
    check_positive("n", n)?;
    check_positive("r", r as i64)?;
    divisible("thm3-2", m, n, r, exact_divide(&numerator(m, n, r, false), &one_minus(n))?)
}

/// `sum_{k<n} (-1)^(n-k-1) (1-q^(2k+1))/(1-q^n) (D_q(m,k) D_(1/q)(m,k))^r q^C(k,2)`
pub fn thm3_poly3(m: i64, n: i64, r: u32) -> Result<MultiLaurentPoly> {
    check_positive("m", m)?;
    check_positive("n", n)?;
    check_positive("r", r as i64)?;
    divisible("thm3-3", m, n, r, exact_divide(&numerator(m, n, r, true), &one_minus(n))?)
}

/// Which of the three claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Thm3Claim {
    #[serde(rename = "thm3-1")]
    First,
    #[serde(rename = "thm3-2")]
    Second,
    #[serde(rename = "thm3-3")]
    Third,
}

impl Thm3Claim {
    pub const ALL: [Thm3Claim; 3] = [Thm3Claim::First, Thm3Claim::Second, Thm3Claim::Third];
}

impl fmt::Display for Thm3Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Thm3Claim::First => "thm3-1",
            Thm3Claim::Second => "thm3-2",
            Thm3Claim::Third => "thm3-3",
        })
    }
}

/// Outcome of one positivity cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityRecord {
    pub m: i64,
    pub n: i64,
    pub r: u32,
    pub claim: Thm3Claim,
    pub divisible: bool,
    pub nonneg: bool,
    pub min_coeff: Option<String>,
    pub degree_range: Option<(i32, i32)>,
}

impl PositivityRecord {
    pub fn passed(&self) -> bool {
        self.divisible && self.nonneg
    }
}

/// Builds the polynomial for `claim` (the first claim ignores `r`) and
/// records divisibility and the sign of its coefficients. A remainder is
/// recorded, not raised.
pub fn positivity_record(claim: Thm3Claim, m: i64, n: i64, r: u32) -> Result<PositivityRecord> {
    let built = match claim {
        Thm3Claim::First => thm3_poly1(m, n),
        Thm3Claim::Second => thm3_poly2(m, n, r),
        Thm3Claim::Third => thm3_poly3(m, n, r),
    };
    let r = if claim == Thm3Claim::First { 1 } else { r };
    let poly = match built {
        Ok(p) => Some(p),
        Err(QckError::NotDivisible(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PositivityRecord {
        m,
        n,
        r,
        claim,
        divisible: poly.is_some(),
        nonneg: poly.as_ref().is_some_and(|p| p.has_nonneg_integer_coeffs()),
        min_coeff: poly.as_ref().and_then(|p| p.min_coeff()).map(|c| c.to_string()),
        degree_range: poly.as_ref().and_then(|p| p.degree_range(Var::Q)),
    })
}

/// One positivity cell as a report; at `r = 1` the second claim is also
/// compared with its integer value at `q = 1`.
pub fn verify_thm3(claim: Thm3Claim, m: i64, n: i64, r: u32) -> Result<VerificationReport> {
    let rec = positivity_record(claim, m, n, r)?;
    let name = claim.to_string().replace('-', "_");
    let mut ck = Checker::new(&name, &[("m", m), ("n", n), ("r", rec.r as i64)], &[]);
    ck.holds("exact division", rec.divisible, String::new);
    ck.holds("non-negative integer coefficients", rec.nonneg, || format!("min {:?}", rec.min_coeff));
    if claim == Thm3Claim::Second && r == 1 && rec.divisible {
        let sum: num_bigint::BigInt = (0..n).map(|k| (2 * k + 1) * delannoy(m, k).pow(2)).sum();
        let expect = BigRat::from_bigint(sum) * BigRat::new(1, n);
        let at_one = thm3_poly2(m, n, 1)?.at_q_one();
        ck.holds("value at q = 1", at_one == MultiLaurentPoly::constant(expect.clone(), q_ring()), || {
            format!("{at_one} vs {expect}")
        });
    }
    Ok(ck.finish())
}

/// Splits a polynomial by its monomial in the variables other than `q`.
fn by_x_monomial(p: &MultiLaurentPoly) -> BTreeMap<Monomial, MultiLaurentPoly> {
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, BigRat)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut x = *m;
        x.set_exp(Var::Q, 0);
        groups.entry(x).or_default().push((Monomial::var(Var::Q, m.exp(Var::Q)), c.clone()));
    }
    groups.into_iter().map(|(x, ts)| (x, MultiLaurentPoly::from_terms(q_ring(), ts).expect("q-only terms"))).collect()
}

type ClosedForm<'a> = &'a dyn Fn(i64) -> MultiLaurentPoly;

/// Both sums of `r`-th powers of `S_k` with symbolic `x_0, ..., x_(n-1)`:
/// every coefficient of every monomial in the `x_i` is checked to be exactly
/// divisible by `1-q^n` with non-negative integer quotient, and the quotients
/// are compared with the prediction from the linearization coefficients.
pub fn lemma41_generic(n: i64, r: u32) -> Result<VerificationReport> {
    if n < 1 || n as usize > MAX_XI + 1 || r < 1 {
        return Err(QckError::InvalidParams(format!("need 1 <= n <= {}, r >= 1; got n={n}, r={r}", MAX_XI + 1)));
    }
    let mut ck = Checker::new("lemma41", &[("n", n), ("r", r as i64)], &[]);
    let xs: Vec<Var> = (0..n as usize).map(Var::xi).collect();
    let ring = Ring::new(&xs);
    let sk = |k: i64| -> Result<MultiLaurentPoly> {
        let vals: Vec<_> = (0..=k).map(|i| MultiLaurentPoly::var(xs[i as usize], ring)).collect();
        Ok(s_n(&vals, k)?.embed(ring)?.pow(r))
    };
    let mut first = Vec::new();
    let mut second = Vec::new();
    for k in 0..n {
        let Some(p) = ck.require(&format!("S_{k}^r"), sk(k)) else {
            return Ok(ck.finish());
        };
        let p = p.try_mul(&one_minus(2 * k + 1).embed(ring)?)?;
        let sign = if (n - k - 1) % 2 == 0 { BigRat::ONE } else { BigRat::from(-1) };
        second.push(p.mul_term(&qpow(c2(k)), &sign));
        first.push(shift(&p, -k));
    }
    let den = one_minus(n);
    let closed_first = |s: i64| shift(&(&qbinomial(n + s, s) * &qbinomial(n, s + 1)), -(s + 1) * (n - 1));
    let closed_second = |s: i64| shift(&(&qbinomial(n - 1, s) * &qbinomial(n + s, s)), c2(n) - s * n);
    let displays: [(&str, Vec<MultiLaurentPoly>, ClosedForm); 2] =
        [("first", first, &closed_first), ("second", second, &closed_second)];
    for (label, parts, closed) in displays {
        let total = MultiLaurentPoly::sum(ring, &parts);
        let mut quotient = Vec::new();
        for (x, coeff) in by_x_monomial(&total) {
            match exact_divide(&coeff, &den)? {
                Some(c) => {
                    ck.holds(
                        &format!("{label}: coefficient of {x} non-negative"),
                        c.has_nonneg_integer_coeffs(),
                        || c.to_string(),
                    );
                    quotient.push(c.embed(ring)?.mul_term(&x, &BigRat::ONE));
                }
                None => ck.holds(&format!("{label}: coefficient of {x} divisible"), false, || coeff.to_string()),
            }
        }
        let quotient = MultiLaurentPoly::sum(ring, &quotient);
        let mut predicted = Vec::new();
        for tuple in tuples(n, r) {
            let mono = tuple.iter().fold(Monomial::ONE, |acc, &i| acc.mul(&Monomial::var(xs[i as usize], 1)));
            for (s, p) in linearize(&tuple) {
                predicted.push((&p * &closed(s)).embed(ring)?.mul_term(&mono, &BigRat::ONE));
            }
        }
        ck.equal(&format!("{label}: linearization prediction"), &quotient, &MultiLaurentPoly::sum(ring, &predicted));
    }
    Ok(ck.finish())
}

/// All `r`-tuples over `0..n`.
fn tuples(n: i64, r: u32) -> Vec<Vec<i64>> {
    (0..r).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> MultiLaurentPoly {
        MultiLaurentPoly::parse_in(s, q_ring()).unwrap()
    }

    #[test]
    fn basis_and_s_n() {
        assert_eq!(s_n(&[q("1"), q("0")], 1).unwrap(), q("1"));
        assert_eq!(s_n(&[q("1"), q("1")], 1).unwrap(), q("2 + q^-1"));
        assert!(s_n(&[q("1")], 1).is_err());
        assert_eq!(SnBasisElement::new(3, 4).value, q("0"));
    }

    #[test]
    fn weights() {
        assert!(xk_weights(3, 0).is_one());
        assert_eq!(xk_weights(1, 1), q("2 + 2*q"));
        for m in 1..=4 {
            for n in 0..=4 {
                assert!(verify_xk_expansion(m, n).unwrap().passed);
            }
        }
    }

    #[test]
    fn schmidt_and_table() {
        for k in 0..=4 {
            for i in 0..=k {
                for j in 0..=k {
                    assert!(verify_schmidt(k, i, j).unwrap().passed, "{k} {i} {j}");
                }
            }
        }
        assert!(LinearizationTable::build(4).all_nonneg());
        assert!(verify_schmidt(1, 2, 0).is_err());
    }

    #[test]
    fn alternating() {
        for n in 1..=5 {
            for s in 0..n {
                assert!(verify_alternating_sum(n, s).unwrap().passed, "{n} {s}");
            }
        }
        assert!(verify_alternating_sum(3, 3).is_err());
    }

    #[test]
    fn small_claims() {
        assert!(thm3_poly1(1, 1).unwrap().is_one());
        assert!(thm3_poly2(1, 1, 1).unwrap().is_one());
        assert!(thm3_poly3(1, 1, 1).unwrap().is_one());
        for m in 1..=3 {
            for n in 1..=3 {
                for claim in Thm3Claim::ALL {
                    let r = verify_thm3(claim, m, n, 2).unwrap();
                    assert!(r.passed, "{r:?}");
                }
                let r = verify_thm3(Thm3Claim::Second, m, n, 1).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
        assert!(thm3_poly2(0, 1, 1).is_err());
    }

    #[test]
    fn lemma41() {
        for n in 1..=3 {
            for r in 1..=2 {
                let rep = lemma41_generic(n, r).unwrap();
                assert!(rep.passed, "{rep:?}");
            }
        }
        assert!(lemma41_generic(MAX_XI as i64 + 1, 1).unwrap().passed);
        assert!(lemma41_generic(MAX_XI as i64 + 2, 1).is_err());
    }
}
