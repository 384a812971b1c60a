//! Delannoy numbers and their two q-analogues.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactalg::{BigRat, Monomial, MultiLaurentPoly, ParamExpr, Ring, Var};
use crate::qkit::{qbinomial, qbinomial_in, qpoch};
use crate::report::{Checker, VerificationReport};

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `D(m, n)`, computed by both binomial sums, which must agree.
pub fn delannoy(m: i64, n: i64) -> BigInt {
    let first: BigInt = (0..=n).map(|k| binomial(n, k) * binomial(n + m - k, n)).sum();
    let second: BigInt = (0..=n).map(|k| binomial(n, k) * binomial(m, k) * (BigInt::one() << k)).sum();
    assert_eq!(first, second, "the two Delannoy sums disagree at ({m}, {n})");
    first
}

/// Path-count recurrence `D(m,n) = D(m-1,n) + D(m,n-1) + D(m-1,n-1)`, memoized.
pub fn delannoy_recurrence(m: i64, n: i64) -> BigInt {
    fn go(m: i64, n: i64, memo: &mut HashMap<(i64, i64), BigInt>) -> BigInt {
        if m == 0 || n == 0 {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&(m, n)) {
            return v.clone();
        }
        let v = go(m - 1, n, memo) + go(m, n - 1, memo) + go(m - 1, n - 1, memo);
        memo.insert((m, n), v.clone());
        v
    }
    go(m, n, &mut HashMap::new())
}

fn q_pow(e: i64) -> Monomial {
    Monomial::var(Var::Q, e as i32)
}

fn shifted(p: &MultiLaurentPoly, e: i64) -> MultiLaurentPoly {
    p.mul_term(&q_pow(e), &BigRat::ONE)
}

fn poch_q(a: ParamExpr, k: i64) -> MultiLaurentPoly {
    qpoch(&a, k).and_then(|f| f.expand(Ring::q_only())).expect("q-only Pochhammer")
}

/// `(-1;q)_k`
pub fn minus_one_poch(k: i64) -> MultiLaurentPoly {
    poch_q(ParamExpr::constant(-1), k)
}

/// `(-q;q)_k`
pub fn minus_q_poch(k: i64) -> MultiLaurentPoly {
    poch_q(ParamExpr::q_pow(1).neg(), k)
}

fn sum_q(items: impl Iterator<Item = MultiLaurentPoly>) -> MultiLaurentPoly {
    let items: Vec<_> = items.collect();
    MultiLaurentPoly::sum(Ring::q_only(), &items)
}

/// `D_q(m,n) = sum_k q^C(k,2) [n;k][n+m-k;n]`
pub fn dq(m: i64, n: i64) -> MultiLaurentPoly {
    sum_q((0..=n).map(|k| shifted(&(&qbinomial(n, k) * &qbinomial(n + m - k, n)), k * (k - 1) / 2)))
}

/// `D*_q(m,n) = sum_k q^C(k+1,2) [n;k][n+m-k;n]`
pub fn dq_star(m: i64, n: i64) -> MultiLaurentPoly {
    sum_q((0..=n).map(|k| shifted(&(&qbinomial(n, k) * &qbinomial(n + m - k, n)), k * (k + 1) / 2)))
}

fn alt_sum(m: i64, n: i64, poch: fn(i64) -> MultiLaurentPoly) -> MultiLaurentPoly {
    sum_q((0..=m).map(|k| shifted(&(&(&qbinomial(m, k) * &qbinomial(n, k)) * &poch(k)), (m - k) * (n - k))))
}

/// `sum_{k<=m} q^((m-k)(n-k)) [m;k][n;k] (-1;q)_k`, which equals `D_q(m,n)`.
pub fn dq_alt(m: i64, n: i64) -> MultiLaurentPoly {
    alt_sum(m, n, minus_one_poch)
}

/// `sum_{k<=m} q^((m-k)(n-k)) [m;k][n;k] (-q;q)_k`, which equals `D*_q(n,m)`
/// (note the swapped arguments).
pub fn dq_star_alt(m: i64, n: i64) -> MultiLaurentPoly {
    alt_sum(m, n, minus_q_poch)
}

/// `D_{q^-1}(m,n)`
pub fn dq_inverse(m: i64, n: i64) -> MultiLaurentPoly {
    dq(m, n).subs(Var::Q, ParamExpr::q_pow(-1)).expect("q -> 1/q stays in the ring")
}

/// Right side of the product formula:
/// `sum_k q^((m-k)(n-k)) [n+k;2k][m;k][m+k;k] (-1;q)_k (-q;q)_k`.
pub fn product_rhs(m: i64, n: i64) -> MultiLaurentPoly {
    sum_q((0..=n).map(|k| {
        let b = &(&qbinomial(n + k, 2 * k) * &qbinomial(m, k)) * &qbinomial(m + k, k);
        shifted(&(&(&b * &minus_one_poch(k)) * &minus_q_poch(k)), (m - k) * (n - k))
    }))
}

/// Both sides of
/// `sum_k q^((m-k)(n-k)) [m;k][n;k] (x;q)_k = sum_i q^C(i,2) [n;i][n+m-i;n] (-x)^i`
/// in the ring of `q, x`.
pub fn general_x_expansion(m: i64, n: i64) -> (MultiLaurentPoly, MultiLaurentPoly) {
    let ring = Ring::new(&[Var::X]);
    let mut lhs = Vec::new();
    for k in 0..=m {
        let poch = qpoch(&ParamExpr::var(Var::X), k).and_then(|f| f.expand(ring)).expect("(x;q)_k");
        let b = &qbinomial_in(m, k, ring) * &qbinomial_in(n, k, ring);
        lhs.push(shifted(&(&b * &poch), (m - k) * (n - k)));
    }
    let mut rhs = Vec::new();
    for i in 0..=n {
        let b = &qbinomial_in(n, i, ring) * &qbinomial_in(n + m - i, n, ring);
        let sign = if i % 2 == 0 { BigRat::ONE } else { BigRat::from(-1) };
        let mono = Monomial::from_pairs(&[(Var::Q, (i * (i - 1) / 2) as i32), (Var::X, i as i32)]);
        rhs.push(b.mul_term(&mono, &sign));
    }
    (MultiLaurentPoly::sum(ring, &lhs), MultiLaurentPoly::sum(ring, &rhs))
}

/// `D_q(m,n) D*_q(m,n)` against the single-sum product formula.
pub fn product_expansion(m: i64, n: i64) -> VerificationReport {
    let mut ck = Checker::new("delannoy_product", &[("m", m), ("n", n)], &[]);
    ck.equal("D_q * D*_q", &(&dq(m, n) * &dq_star(m, n)), &product_rhs(m, n));
    ck.finish()
}

/// Whether `D_q(m,n) = D_q(n,m)`. Reported, not asserted.
pub fn dq_is_symmetric(m: i64, n: i64) -> bool {
    dq(m, n) == dq(n, m)
}

/// All single-value claims at `(m, n)`: the alternative sums, the reciprocal
/// relation, the values at `q = 1` and non-negativity.
pub fn verify_delannoy(m: i64, n: i64) -> VerificationReport {
    let mut ck = Checker::new("delannoy", &[("m", m), ("n", n)], &[]);
    let d = dq(m, n);
    let ds = dq_star(m, n);
    ck.equal("D_q = first alternative sum", &d, &dq_alt(m, n));
    ck.equal("D*_q(n,m) = second alternative sum", &dq_star(n, m), &dq_star_alt(m, n));
    ck.equal("D*_q = q^(mn) D_(1/q)", &ds, &shifted(&dq_inverse(m, n), m * n));
    let (lhs, rhs) = general_x_expansion(m, n);
    ck.equal("x-expansion", &lhs, &rhs);
    let oracle = delannoy_recurrence(m, n);
    ck.holds("binomial sums = recurrence", delannoy(m, n) == oracle, || format!("{} != {oracle}", delannoy(m, n)));
    let target = MultiLaurentPoly::constant(BigRat::from_bigint(oracle), Ring::q_only());
    ck.equal("D_q at q=1", &d.at_q_one(), &target);
    ck.equal("D*_q at q=1", &ds.at_q_one(), &target);
    ck.holds("D_q non-negative", d.has_nonneg_integer_coeffs(), || d.to_string());
    ck.holds("D*_q non-negative", ds.has_nonneg_integer_coeffs(), || ds.to_string());
    if !dq_is_symmetric(m, n) {
        ck.note("D_q(m,n) != D_q(n,m)");
    }
    ck.finish()
}

/// Which table `DelannoyTable` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Analogue {
    Plain,
    Dq,
    DqStar,
    Product,
}

/// Entries `(m, n)` for `0 <= m <= max_m`, `0 <= n <= max_n`.
#[derive(Clone, Debug)]
pub struct DelannoyTable {
    pub kind: Analogue,
    pub max_m: i64,
    pub max_n: i64,
    pub entries: Vec<Vec<MultiLaurentPoly>>,
}

impl DelannoyTable {
    pub fn build(kind: Analogue, max_m: i64, max_n: i64) -> Self {
        let entries = (0..=max_m)
            .map(|m| {
                (0..=max_n)
                    .map(|n| match kind {
                        Analogue::Plain => {
                            MultiLaurentPoly::constant(BigRat::from_bigint(delannoy(m, n)), Ring::q_only())
                        }
                        Analogue::Dq => dq(m, n),
                        Analogue::DqStar => dq_star(m, n),
                        Analogue::Product => product_rhs(m, n),
                    })
                    .collect()
            })
            .collect();
        DelannoyTable { kind, max_m, max_n, entries }
    }

    pub fn get(&self, m: i64, n: i64) -> &MultiLaurentPoly {
        &self.entries[m as usize][n as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> MultiLaurentPoly {
        MultiLaurentPoly::parse_in(s, Ring::q_only()).unwrap()
    }

    #[test]
    fn classical_values() {
        assert_eq!(delannoy(1, 1), BigInt::from(3));
        assert_eq!(delannoy(2, 2), BigInt::from(13));
        assert_eq!(delannoy(3, 3), BigInt::from(63));
        for n in 0..6 {
            assert_eq!(delannoy(0, n), BigInt::one());
        }
        for m in 0..=8 {
            for n in 0..=8 {
                assert_eq!(delannoy(m, n), delannoy_recurrence(m, n));
            }
        }
    }

    #[test]
    fn q_values() {
        assert_eq!(dq(1, 1), q("2 + q"));
        assert_eq!(dq_star(1, 1), q("1 + 2*q"));
        assert_eq!(dq_alt(1, 1), q("2 + q"));
        assert_eq!(dq_star_alt(1, 1), q("1 + 2*q"));
        assert!(dq(4, 0).is_one());
        assert!(dq_star(0, 5).is_one());
        assert_eq!(&dq(1, 1) * &dq_star(1, 1), q("2 + 5*q + 2*q^2"));
    }

    #[test]
    fn x_expansion_specializations() {
        let (lhs, rhs) = general_x_expansion(2, 3);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.subs(Var::X, -1).unwrap(), dq(2, 3).embed(lhs.ring()).unwrap());
        let minus_q = lhs.subs(Var::X, ParamExpr::q_pow(1).neg()).unwrap();
        assert_eq!(minus_q, dq_star(3, 2).embed(lhs.ring()).unwrap());
        assert_eq!(lhs.subs(Var::X, 0).unwrap(), qbinomial_in(5, 3, lhs.ring()));
    }

    #[test]
    fn grid() {
        for m in 0..=5 {
            for n in 0..=5 {
                let r = verify_delannoy(m, n);
                assert!(r.passed, "{r:?}");
                assert!(product_expansion(m, n).passed);
                assert!(dq_is_symmetric(m, n));
            }
        }
    }
}
