use std::cell::RefCell;

use rustc_hash::FxHashMap;

use crate::error::{QckError, Result};
use crate::exactalg::{BigRat, Monomial, MultiLaurentPoly, ParamExpr, Ring, Var};
use crate::report::{Checker, VerificationReport};

use super::factored::Factored;
use super::frac::{Frac, Term};

/// `(a; base)_n` in factored form.
pub fn poch(a: &ParamExpr, base: &ParamExpr, n: i64) -> Result<Factored> {
    if n < 0 {
        return Err(QckError::NegativeOrder(n));
    }
    Ok((0..n as i32).map(|i| Factored::one_minus(&a.mul(&base.pow(i)))).product())
}

/// `(a; q)_n` in factored form.
pub fn qpoch(a: &ParamExpr, n: i64) -> Result<Factored> {
    poch(a, &ParamExpr::var(Var::Q), n)
}

/// `(a; q)_n` expanded, in the ring of `q` and the variables of `a`.
pub fn qpochhammer(a: &ParamExpr, n: i64) -> Result<MultiLaurentPoly> {
    let ring = Ring::new(&a.mono().support().map(|(v, _)| v).collect::<Vec<_>>());
    qpoch(a, n)?.expand(ring)
}

/// `(q;q)_n` in factored form.
pub fn qfactorial(n: i64) -> Factored {
    qpoch(&ParamExpr::var(Var::Q), n).expect("non-negative order")
}

/// Gaussian binomial `[n; k]` in factored form; zero outside `0 <= k <= n`.
pub fn qbinomial_factored(n: i64, k: i64) -> Factored {
    if k < 0 || k > n {
        return Factored::zero();
    }
    &qfactorial(n) / &(&qfactorial(k) * &qfactorial(n - k))
}

thread_local! {
    static QBINOMIALS: RefCell<FxHashMap<(i64, i64), MultiLaurentPoly>> = RefCell::new(FxHashMap::default());
}

/// Gaussian binomial `[n; k]` as a polynomial in `q`; zero outside `0 <= k <= n`.
pub fn qbinomial(n: i64, k: i64) -> MultiLaurentPoly {
    if k < 0 || k > n {
        return MultiLaurentPoly::zero(Ring::q_only());
    }
    if let Some(p) = QBINOMIALS.with(|c| c.borrow().get(&(n, k)).cloned()) {
        return p;
    }
    let p = qbinomial_factored(n, k).expand(Ring::q_only()).expect("q-binomials are polynomials");
    QBINOMIALS.with(|c| c.borrow_mut().insert((n, k), p.clone()));
    p
}

/// `[n; k]` embedded in `ring`.
pub fn qbinomial_in(n: i64, k: i64, ring: Ring) -> MultiLaurentPoly {
    qbinomial(n, k).embed(ring).expect("q is in every ring")
}

/// `[p] = 1 + q + ... + q^(p-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBracket {
    p: u32,
    poly: MultiLaurentPoly,
}

impl QBracket {
    pub fn new(p: u32) -> Result<Self> {
        if p == 0 {
            return Err(QckError::InvalidParams("[0] is empty".into()));
        }
        let terms = (0..p as i32).map(|i| (Monomial::var(Var::Q, i), BigRat::ONE));
        Ok(QBracket { p, poly: MultiLaurentPoly::from_terms(Ring::q_only(), terms)? })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn poly(&self) -> &MultiLaurentPoly {
        &self.poly
    }
}

fn binom2(k: i64) -> i32 {
    (k * (k - 1) / 2) as i32
}

/// Sum of `(-1)^k [n;k] q^C(k,2) x^k` against `(x;q)_n`.
pub fn check_qbinomial_theorem(n: i64) -> VerificationReport {
    let mut ck = Checker::new("qbinomial_theorem", &[("n", n)], &[Var::X]);
    let ring = Ring::new(&[Var::X]);
    let mut lhs = MultiLaurentPoly::zero(ring);
    for k in 0..=n {
        let sign = if k % 2 == 0 { BigRat::ONE } else { BigRat::from(-1) };
        let mono = Monomial::from_pairs(&[(Var::Q, binom2(k)), (Var::X, k as i32)]);
        lhs = &lhs + &qbinomial_in(n, k, ring).mul_term(&mono, &sign);
    }
    if let Some(rhs) = ck.require("expand (x;q)_n", qpoch(&ParamExpr::var(Var::X), n).and_then(|f| f.expand(ring))) {
        ck.equal("q-binomial theorem", &lhs, &rhs);
    }
    ck.finish()
}

/// `2phi1[a, q^-n; c; q, q] = (c/a;q)_n a^n / (c;q)_n`, compared over the
/// common factored denominator.
pub fn check_qchu_vandermonde(n: i64) -> VerificationReport {
    let mut ck = Checker::new("qchu_vandermonde", &[("n", n)], &[Var::A, Var::C]);
    let ring = Ring::new(&[Var::A, Var::C]);
    let a = ParamExpr::var(Var::A);
    let c = ParamExpr::var(Var::C);
    let qn = ParamExpr::q_pow(-(n as i32));
    let built = (|| -> Result<(Frac, Frac)> {
        let mut terms = Vec::new();
        for k in 0..=n {
            let f = &(&qpoch(&a, k)? * &qpoch(&qn, k)?) / &(&qfactorial(k) * &qpoch(&c, k)?);
            terms.push(Term::new(f.mul(&Factored::var_pow(Var::Q, k as i32))));
        }
        let lhs = Frac::sum(ring, &terms)?;
        let rhs = &(&qpoch(&c.div(&a), n)? * &Factored::var_pow(Var::A, n as i32)) / &qpoch(&c, n)?;
        Ok((lhs, Frac::sum(ring, &[Term::new(rhs)])?))
    })();
    if let Some((lhs, rhs)) = ck.require("build sides", built) {
        if let Some(d) = ck.require("clear denominators", lhs.difference(&rhs)) {
            ck.zero("q-Chu-Vandermonde", &d);
        }
    }
    ck.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> MultiLaurentPoly {
        MultiLaurentPoly::parse_in(s, Ring::q_only()).unwrap()
    }

    fn pascal(n: i64, k: i64) -> MultiLaurentPoly {
        if k < 0 || k > n {
            return q("0");
        }
        if k == 0 || k == n {
            return q("1");
        }
        &pascal(n - 1, k) + &pascal(n - 1, k - 1).mul_term(&Monomial::var(Var::Q, (n - k) as i32), &BigRat::ONE)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(qpochhammer(&ParamExpr::var(Var::X), 0).unwrap().to_string(), "1");
        assert_eq!(qpochhammer(&ParamExpr::q_pow(1), 2).unwrap(), q("1 - q - q^2 + q^3"));
        let m1 = qpochhammer(&ParamExpr::constant(-1), 1).unwrap();
        let mq = qpochhammer(&ParamExpr::q_pow(1).neg(), 1).unwrap();
        assert_eq!(&m1 * &mq, q("2 + 2*q"));
        assert!(matches!(qpoch(&ParamExpr::one(), -1), Err(QckError::NegativeOrder(-1))));
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(qbinomial(4, 2), q("1 + q + 2*q^2 + q^3 + q^4"));
        assert!(qbinomial(3, 5).is_zero());
        assert!(qbinomial(3, -1).is_zero());
        for n in 0..=10 {
            assert!(qbinomial(n, 0).is_one());
        }
    }

    #[test]
    fn qbinomial_matches_pascal_and_binomial() {
        for n in 0..=12i64 {
            let mut classical = 1i64;
            for k in 0..=n {
                let b = qbinomial(n, k);
                assert_eq!(b, pascal(n, k), "[{n};{k}]");
                assert_eq!(b.at_q_one(), q(&classical.to_string()));
                assert!(b.is_nonneg_integer_laurent().unwrap());
                assert_eq!(b.degree_range(Var::Q).unwrap().1 as i64, k * (n - k));
                classical = classical * (n - k) / (k + 1);
            }
        }
    }

    #[test]
    fn pochhammer_splits() {
        let ring = Ring::new(&[Var::A]);
        let a = ParamExpr::var(Var::A);
        for m in 0..=8 {
            for n in 0..=8 {
                let whole = qpoch(&a, m + n).unwrap().expand(ring).unwrap();
                let parts = &qpoch(&a, m).unwrap() * &qpoch(&a.times_q(m as i32), n).unwrap();
                assert_eq!(whole, parts.expand(ring).unwrap());
            }
        }
    }

    #[test]
    fn even_odd_split() {
        let ring = Ring::new(&[Var::D]);
        let d2 = ParamExpr::var_pow(Var::D, 2);
        let q2 = ParamExpr::q_pow(2);
        for k in 0..=6 {
            let whole = qpoch(&d2, 2 * k).unwrap().expand(ring).unwrap();
            let split = &poch(&d2, &q2, k).unwrap() * &poch(&d2.times_q(1), &q2, k).unwrap();
            assert_eq!(whole, split.expand(ring).unwrap());
        }
    }

    #[test]
    fn summation_theorems() {
        for n in 0..=8 {
            let r = check_qbinomial_theorem(n);
            assert!(r.passed, "{r:?}");
            let r = check_qchu_vandermonde(n);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn bracket() {
        let b = QBracket::new(3).unwrap();
        assert_eq!(b.poly(), &q("1 + q + q^2"));
        assert_eq!(b.poly().at_q_one(), q("3"));
        assert!(QBracket::new(0).is_err());
    }
}
