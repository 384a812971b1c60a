use crate::error::{QckError, Result};
use crate::exactalg::{MultiLaurentPoly, ParamExpr, Ring, Var};
use crate::qkit::{qbinomial_factored, Factored, Frac, Term};
use crate::report::{Checker, VerificationReport};

use super::{c2, check_same, check_sides, fm, mono, pq, qp, qpow, qq, ratio, series, sign, var};

fn one_minus_q(e: i64) -> Factored {
    Factored::one_minus(&qp(e))
}

fn check_lemma_params(n: i64, m: i64, h: i64) -> Result<()> {
    if n < 1 || h < 1 || m < 0 || h > n - m {
        return Err(QckError::InvalidParams(format!("need n, h >= 1, m >= 0, h <= n - m; got n={n}, m={m}, h={h}")));
    }
    Ok(())
}

/// Summand `(j, k)` of the double sum with the two `(q^(i-m-h+1);q)_(h-1)`
/// factors.
fn last_lem_term(n: i64, m: i64, h: i64, j: i64, k: i64) -> Factored {
    let (x, c) = (var(Var::X), var(Var::C));
    let qn = qp(-n);
    ratio(
        [
            pq(&qn, j),
            pq(&qn, k),
            pq(&x, j),
            pq(&x, k),
            pq(&qp(j - m - h + 1), h - 1),
            pq(&qp(k - m - h + 1), h - 1),
            one_minus_q(k - j),
            qpow(2 * j + k),
        ],
        [qq(j), qq(k), pq(&c, j), pq(&c, k)],
    )
}

/// The double sum with a `(1 - q^(k-j))` factor against its closed product
/// form, in `x, c`. Also audits that both sides have degree `m + n` in `x`
/// with the same leading coefficient, and that the block `j, k <= m`
/// cancels on its own.
pub fn verify_lemma_last(n: i64, m: i64, h: i64) -> Result<VerificationReport> {
    check_lemma_params(n, m, h)?;
    let mut ck = Checker::new("lemma_last", &[("n", n), ("m", m), ("h", h)], &[Var::X, Var::C]);
    let ring = Ring::new(&[Var::X, Var::C]);
    let (x, c) = (var(Var::X), var(Var::C));
    let built = (|| -> Result<(Frac, Frac)> {
        let lhs = series(ring, (0..=m).flat_map(|j| (0..=n).map(move |k| last_lem_term(n, m, h, j, k))))?;
        let rhs = series(
            ring,
            [ratio(
                [
                    sign(m - 1),
                    qq(n),
                    qq(h - 1),
                    pq(&x, m + h),
                    pq(&c.div(&x), n - h),
                    mono(&[(Var::X, n - h)]),
                    qpow((m * m + 3 * m) / 2 - m * n - m * h - h * h + h),
                ],
                [qq(m), pq(&c, m), pq(&c, n), qq(n - m - h)],
            )],
        )?;
        Ok((lhs, rhs))
    })();
    if let Some((lhs, rhs)) = check_sides(&mut ck, "double sum", built) {
        let l = lhs.den.lcm(&rhs.den);
        if let (Some(left), Some(right)) =
            (ck.require("clear left", lhs.cleared(&l)), ck.require("clear right", rhs.cleared(&l)))
        {
            let top = |p: &MultiLaurentPoly| p.degree_range(Var::X).map(|(_, d)| d as i64);
            let (dl, dr) = (top(&left), top(&right));
            ck.holds("degree m + n in x", dl == Some(m + n) && dr == Some(m + n), || format!("{dl:?} and {dr:?}"));
            let lead = |p: &MultiLaurentPoly| p.coefficients_in(Var::X).remove(&((m + n) as i32));
            ck.holds("equal leading coefficients", lead(&left) == lead(&right), String::new);
        }
    }
    let block = series(ring, (0..=m).flat_map(|j| (0..=m).map(move |k| last_lem_term(n, m, h, j, k))));
    if let Some(block) = ck.require("block j, k <= m", block) {
        ck.zero("block j, k <= m cancels", &block.num);
    }
    Ok(ck.finish())
}

/// The double sum weighted by `[k-m-1; h-1][m+h-j-1; h-1]` over
/// `j <= m < m+h <= k`, in `a, c`; together with the rewriting of that
/// binomial pair as a product of two `(q^(i-m-h+1);q)_(h-1)`.
pub fn verify_lemma_am2(n: i64, m: i64, h: i64) -> Result<VerificationReport> {
    check_lemma_params(n, m, h)?;
    let mut ck = Checker::new("lemma_am2", &[("n", n), ("m", m), ("h", h)], &[Var::A, Var::C]);
    let ring = Ring::new(&[Var::A, Var::C]);
    let (a, c) = (var(Var::A), var(Var::C));
    let qn = qp(-n);
    let built = (|| -> Result<(Frac, Frac)> {
        let lhs = series(
            ring,
            (0..=m).flat_map(|j| {
                let (a, c, qn) = (a.clone(), c.clone(), qn.clone());
                (m + h..=n).map(move |k| {
                    ratio(
                        [
                            pq(&qn, j),
                            pq(&qn, k),
                            pq(&a, j),
                            pq(&a, k),
                            one_minus_q(k - j),
                            qpow(j + k + j * h),
                            qbinomial_factored(k - m - 1, h - 1),
                            qbinomial_factored(m + h - j - 1, h - 1),
                        ],
                        [qq(j), qq(k), pq(&c, j), pq(&c, k)],
                    )
                })
            }),
        )?;
        let rhs = series(
            ring,
            [ratio(
                [
                    sign(m - h),
                    qq(n),
                    pq(&a, m + h),
                    pq(&c.div(&a), n - h),
                    fm(&a.pow((n - h) as i32)),
                    qpow((m * m + m - h * h + h) / 2 - m * n),
                ],
                [qq(m), pq(&c, m), pq(&c, n), qq(h - 1), qq(n - m - h)],
            )],
        )?;
        Ok((lhs, rhs))
    })();
    check_sides(&mut ck, "double sum", built);
    let gap_vanishes = (m + 1..m + h).all(|k| qbinomial_factored(k - m - 1, h - 1).is_zero());
    ck.holds("k-range may start at m + 1", gap_vanishes, String::new);
    let q_only = Ring::q_only();
    for j in 0..=m {
        for k in m + 1..=n {
            let pair = qbinomial_factored(k - m - 1, h - 1).mul(&qbinomial_factored(m + h - j - 1, h - 1));
            let product = ratio(
                [
                    pq(&qp(j - m - h + 1), h - 1),
                    pq(&qp(k - m - h + 1), h - 1),
                    qpow((m - j) * (h - 1) + c2(h)),
                    sign(h - 1),
                ],
                [qq(h - 1).pow(2)],
            );
            if let (Some(p), Some(r)) = (
                ck.require("binomial pair", series(q_only, [pair])),
                ck.require("product form", series(q_only, [product])),
            ) {
                check_same(&mut ck, &format!("binomial pair as product at j={j}, k={k}"), &p, &r);
            }
        }
    }
    Ok(ck.finish())
}

/// `B_{n,k}(a) = (1-q^n) sum_{h=1}^{n-k} (-1)^h [n-k-1;h-1][k+h-1;h-1] q^(C(h,2)+kh) a^h / (1-q^h)`
/// in the ring of `q, a`; zero when `k >= n`.
pub fn b_poly(n: i64, k: i64) -> MultiLaurentPoly {
    let ring = Ring::new(&[Var::A]);
    if k >= n {
        return MultiLaurentPoly::zero(ring);
    }
    let terms = (1..=n - k).map(|h| {
        ratio(
            [
                one_minus_q(n),
                sign(h),
                qbinomial_factored(n - k - 1, h - 1),
                qbinomial_factored(k + h - 1, h - 1),
                qpow(c2(h) + k * h),
                mono(&[(Var::A, h)]),
            ],
            [one_minus_q(h)],
        )
    });
    series(ring, terms).and_then(|f| f.to_poly()).expect("finite sum of products").expect("B_{n,k} is a polynomial")
}

/// `(x;q)_n + (a/x;q)_n = (x;q)_n (a/x;q)_n + (a;q)_n + sum_k (x;q)_k (a/x;q)_k B_{n,k}(a)`
/// in the Laurent ring of `a, x`.
pub fn verify_lem_important2(n: i64) -> Result<VerificationReport> {
    if n < 1 {
        return Err(QckError::InvalidParams(format!("need n >= 1, got {n}")));
    }
    let mut ck = Checker::new("lem_important2", &[("n", n)], &[Var::A, Var::X]);
    let ring = Ring::new(&[Var::A, Var::X]);
    let (a, x) = (var(Var::A), var(Var::X));
    let a_x = a.div(&x);
    let built = (|| -> Result<(MultiLaurentPoly, MultiLaurentPoly)> {
        let p = |y: &ParamExpr, k: i64| pq(y, k).expand(ring);
        let lhs = p(&x, n)?.try_add(&p(&a_x, n)?)?;
        let mut rhs = p(&x, n)?.try_mul(&p(&a_x, n)?)?.try_add(&p(&a, n)?)?;
        for k in 1..n {
            let t = p(&x, k)?.try_mul(&p(&a_x, k)?)?.try_mul(&b_poly(n, k).embed(ring)?)?;
            rhs = rhs.try_add(&t)?;
        }
        Ok((lhs, rhs))
    })();
    if let Some((lhs, rhs)) = ck.require("expand", built) {
        ck.equal("expansion", &lhs, &rhs);
    }
    Ok(ck.finish())
}

/// The coefficient `alpha_m` of `(x;q)_m (c/x;q)_m` in the expanded product
/// of the two `3phi2` series, computed from its double-sum definition and
/// compared with the `2phi1` evaluation of the diagonal part, the single sum
/// over `h`, the closed product, and the coefficient in the single-sum side
/// of the product formula.
pub fn connection_coefficients(n: i64, m: i64) -> Result<VerificationReport> {
    if m < 0 || m > n {
        return Err(QckError::InvalidParams(format!("need 0 <= m <= n, got n={n}, m={m}")));
    }
    let mut ck = Checker::new("connection_coefficients", &[("n", n), ("m", m)], &[Var::A, Var::C]);
    let ring = Ring::new(&[Var::A, Var::C]);
    let (a, c) = (var(Var::A), var(Var::C));
    let qn = qp(-n);
    let t = |j: i64| ratio([pq(&qn, j), pq(&a, j), qpow(j)], [qq(j), pq(&c, j)]);
    let c_a = c.div(&a);
    let an = fm(&a.pow(n as i32));
    let head =
        |rest: Factored| ratio([sign(m), qq(n), qpow((m * m + m) / 2 - m * n), rest], [qq(m), pq(&c, m), pq(&c, n)]);
    let built = (|| -> Result<Vec<(&'static str, Frac)>> {
        let mut cross = Vec::new();
        for j in 0..=m {
            for k in m + 1..=n {
                let b = b_poly(k - j, m - j).embed(ring)?.subs(Var::A, c.times_q(2 * j as i32))?;
                cross.push(Term::with_poly(t(j).mul(&t(k)), b));
            }
        }
        let diagonal: Vec<Term> = (0..=n).map(|j| Term::new(t(j).mul(&t(m)))).collect();
        let am1 = head(ratio([pq(&a, m), pq(&c_a, n), an.clone()], [qq(n - m)]));
        let fin1 = (0..=n - m).map(|h| {
            head(ratio(
                [pq(&a, m + h), pq(&c_a, n - h), fm(&a.pow((n - h) as i32)), qpow(m * h), fm(&c.pow(h as i32))],
                [qq(h), qq(n - m - h)],
            ))
        });
        let fin2 = head(ratio([pq(&a, m), pq(&c_a, m), pq(&c.times_q(2 * m as i32), n - m), an.clone()], [qq(n - m)]));
        let coeff = ratio(
            [an.clone(), pq(&qn, m), pq(&c.times_q(n as i32), m), pq(&a, m), pq(&c_a, m), qpow(m)],
            [qq(m), pq(&c, m), pq(&c, 2 * m)],
        );
        Ok(vec![
            ("diagonal sum", Frac::sum(ring, &diagonal)?),
            ("2phi1 evaluation", series(ring, [am1.clone()])?),
            ("double-sum definition", Frac::sum(ring, &[diagonal, cross.clone()].concat())?),
            ("with 2phi1 evaluation", Frac::sum(ring, &[cross, vec![Term::new(am1)]].concat())?),
            ("sum over h", series(ring, fin1)?),
            ("closed product", series(ring, [fin2])?),
            ("coefficient in single sum", series(ring, [coeff])?),
        ])
    })();
    if let Some(forms) = ck.require("build", built) {
        check_same(&mut ck, "diagonal sum = 2phi1 evaluation", &forms[0].1, &forms[1].1);
        for w in forms[2..].windows(2) {
            check_same(&mut ck, &format!("{} = {}", w[0].0, w[1].0), &w[0].1, &w[1].1);
        }
    }
    Ok(ck.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{exact_divide, BigRat};

    fn parse(s: &str) -> MultiLaurentPoly {
        MultiLaurentPoly::parse_in(s, Ring::new(&[Var::A])).unwrap()
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_poly(1, 0), parse("-a"));
        assert_eq!(b_poly(2, 1), parse("-q*a - q^2*a"));
        assert!(b_poly(3, 3).is_zero());
        assert!(b_poly(3, 5).is_zero());
    }

    #[test]
    fn b_coefficient_signs() {
        let ring = Ring::new(&[Var::A]);
        for n in 1..=7 {
            for k in 0..n {
                for (h, coeff) in b_poly(n, k).coefficients_in(Var::A) {
                    let times = coeff.try_mul(&one_minus_q(h as i64).expand(ring).unwrap()).unwrap();
                    let core = exact_divide(&times, &one_minus_q(n).expand(ring).unwrap()).unwrap().unwrap();
                    let signed = core.scale(&BigRat::from(if h % 2 == 0 { 1 } else { -1 }));
                    assert!(signed.has_nonneg_integer_coeffs(), "B_{n},{k} at a^{h}");
                }
            }
        }
    }

    #[test]
    fn lemmas_small() {
        for n in 1..=4 {
            for m in 0..n {
                for h in 1..=n - m {
                    let r = verify_lemma_last(n, m, h).unwrap();
                    assert!(r.passed, "{r:?}");
                    let r = verify_lemma_am2(n, m, h).unwrap();
                    assert!(r.passed, "{r:?}");
                }
            }
        }
        assert!(verify_lemma_last(2, 1, 2).is_err());
        assert!(verify_lemma_am2(0, 0, 1).is_err());
    }

    #[test]
    fn expansion_and_coefficients() {
        for n in 1..=5 {
            let r = verify_lem_important2(n).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(verify_lem_important2(0).is_err());
        for n in 0..=3 {
            for m in 0..=n {
                let r = connection_coefficients(n, m).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }
}
