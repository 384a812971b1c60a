//! Product formulas for terminating series and the lemmas behind them, each
//! checked as an exact polynomial identity after clearing denominators.

mod clausen;
mod lemmas;
mod special;

pub use clausen::{
    verify_clausen_orr, verify_clausen_orr_radical, verify_final_square, verify_general_s, verify_sqrt_corollary,
};
pub use lemmas::{b_poly, connection_coefficients, verify_lem_important2, verify_lemma_am2, verify_lemma_last};
pub use special::{verify_special1, verify_special2, verify_special222, verify_special3, verify_special3_shifted};

use crate::error::Result;
use crate::exactalg::{BigRat, Monomial, MultiLaurentPoly, ParamExpr, Ring, Var};
use crate::qkit::{poch, qfactorial, qpoch, Factored, Frac, Term};
use crate::report::Checker;

pub(crate) fn qp(e: i64) -> ParamExpr {
    ParamExpr::q_pow(e as i32)
}

pub(crate) fn var(v: Var) -> ParamExpr {
    ParamExpr::var(v)
}

/// `(a;q)_k`
pub(crate) fn pq(a: &ParamExpr, k: i64) -> Factored {
    qpoch(a, k).expect("non-negative order")
}

/// `(a;base)_k`
pub(crate) fn pb(a: &ParamExpr, base: &ParamExpr, k: i64) -> Factored {
    poch(a, base, k).expect("non-negative order")
}

/// `(q;q)_k`
pub(crate) fn qq(k: i64) -> Factored {
    qfactorial(k)
}

pub(crate) fn qpow(e: i64) -> Factored {
    Factored::var_pow(Var::Q, e as i32)
}

pub(crate) fn sign(e: i64) -> Factored {
    Factored::constant(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

pub(crate) fn fm(p: &ParamExpr) -> Factored {
    Factored::monomial(p)
}

pub(crate) fn mono(pairs: &[(Var, i64)]) -> Factored {
    let pairs: Vec<(Var, i32)> = pairs.iter().map(|&(v, e)| (v, e as i32)).collect();
    Factored::monomial(&ParamExpr::new(BigRat::ONE, Monomial::from_pairs(&pairs)))
}

pub(crate) fn ratio<const N: usize, const D: usize>(num: [Factored; N], den: [Factored; D]) -> Factored {
    let n: Factored = num.into_iter().product();
    let d: Factored = den.into_iter().product();
    &n / &d
}

pub(crate) fn series(ring: Ring, terms: impl IntoIterator<Item = Factored>) -> Result<Frac> {
    let terms: Vec<Term> = terms.into_iter().map(Term::new).collect();
    Frac::sum(ring, &terms)
}

pub(crate) fn c2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Records `a - b` (cleared) as a zero check.
pub(crate) fn check_same(ck: &mut Checker, label: &str, a: &Frac, b: &Frac) {
    if let Some(d) = ck.require(label, a.difference(b)) {
        ck.zero(label, &d);
    }
}

/// Records a built identity `(lhs, rhs)` as a zero check.
pub(crate) fn check_sides(ck: &mut Checker, label: &str, sides: Result<(Frac, Frac)>) -> Option<(Frac, Frac)> {
    let (lhs, rhs) = ck.require(label, sides)?;
    check_same(ck, label, &lhs, &rhs);
    Some((lhs, rhs))
}

/// Records `n1/d1 = n2/d2` by cross multiplication.
pub(crate) fn check_cross(
    ck: &mut Checker,
    label: &str,
    (n1, d1): &(MultiLaurentPoly, MultiLaurentPoly),
    (n2, d2): &(MultiLaurentPoly, MultiLaurentPoly),
) {
    if let Some(d) = ck.require(label, n1.try_mul(d2).and_then(|l| l.try_sub(&n2.try_mul(d1)?))) {
        ck.zero(label, &d);
    }
}
