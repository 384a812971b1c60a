use crate::error::{QckError, Result};
use crate::exactalg::{Bindings, ParamExpr, Ring, Var};
use crate::hyperg::{hyper_term, Lower};
use crate::qkit::{Factored, Frac, Term};
use crate::report::{Checker, VerificationReport};

use super::{check_cross, check_same, check_sides, fm, pb, pq, qp, qpow, qq, ratio, series, sign, var};

/// Both sides of the product formula for general `a, x, c`.
pub(crate) fn clausen_sides(n: i64, a: &ParamExpr, x: &ParamExpr, c: &ParamExpr, ring: Ring) -> Result<(Frac, Frac)> {
    let qn = qp(-n);
    let c_x = c.div(x);
    let factor = |y: &ParamExpr| {
        series(ring, (0..=n).map(|k| ratio([pq(&qn, k), pq(a, k), pq(y, k), qpow(k)], [qq(k), pq(c, k)])))
    };
    let lhs = factor(x)?.mul(&factor(&c_x)?)?;
    let cqn = c.times_q(n as i32);
    let c_a = c.div(a);
    let rhs = series(
        ring,
        (0..=n).map(|k| {
            ratio(
                [fm(&a.pow(n as i32)), pq(&qn, k), pq(&cqn, k), pq(a, k), pq(&c_a, k), pq(x, k), pq(&c_x, k), qpow(k)],
                [qq(k), pq(c, k), pq(c, 2 * k)],
            )
        }),
    )?;
    Ok((lhs, rhs))
}

fn ax_ring() -> Ring {
    Ring::new(&[Var::A, Var::X])
}

/// The product of two terminating `3phi2` series with lower parameters
/// `c, 0` against `a^n` times a single sum, symbolically in `a, x, c`.
pub fn verify_clausen_orr(n: i64) -> VerificationReport {
    let mut ck = Checker::new("clausen_orr", &[("n", n)], &[Var::A, Var::X, Var::C]);
    let ring = Ring::new(&[Var::A, Var::X, Var::C]);
    check_sides(&mut ck, "product formula", clausen_sides(n, &var(Var::A), &var(Var::X), &var(Var::C), ring));
    ck.finish()
}

/// The same formula with the `6phi5` written over `c = d^2` and `q = t^2`,
/// so that its lower parameters `d, -d, dq^(1/2), -dq^(1/2)` are monomials.
pub fn verify_clausen_orr_radical(n: i64) -> VerificationReport {
    let mut ck = Checker::new("clausen_orr_radical", &[("n", n)], &[Var::A, Var::X, Var::D]);
    let ring = Ring::new(&[Var::T, Var::A, Var::X, Var::D]);
    let t = var(Var::T);
    let base = t.pow(2);
    let (a, x, d) = (var(Var::A), var(Var::X), var(Var::D));
    let c = d.pow(2);
    let qn = t.pow(-2 * n as i32);
    let built = (|| -> Result<(Frac, Frac)> {
        let side = |upper: Vec<ParamExpr>, lower: Vec<Lower>, pre: Factored, top: i64| -> Result<Frac> {
            let terms = (0..=top)
                .map(|k| Ok(Term::new(pre.mul(&hyper_term(&upper, &lower, &base, &base, k as u32)?))))
                .collect::<Result<Vec<_>>>()?;
            Frac::sum(ring, &terms)
        };
        let lower = vec![Lower::Mono(c.clone()), Lower::Zero];
        let f1 = side(vec![qn.clone(), a.clone(), x.clone()], lower.clone(), Factored::one(), n)?;
        let f2 = side(vec![qn.clone(), a.clone(), c.div(&x)], lower, Factored::one(), n)?;
        let upper = vec![qn.clone(), c.mul(&t.pow(2 * n as i32)), a.clone(), c.div(&a), x.clone(), c.div(&x)];
        let lower = [c.clone(), d.clone(), d.neg(), d.mul(&t), d.mul(&t).neg()].map(Lower::Mono).to_vec();
        let rhs = side(upper, lower, fm(&a.pow(n as i32)), n)?;
        Ok((f1.mul(&f2)?, rhs))
    })();
    check_sides(&mut ck, "product formula, radical form", built);
    ck.finish()
}

fn final_square_sides(n: i64) -> Result<(Frac, Frac)> {
    let ring = ax_ring();
    let (a, x) = (var(Var::A), var(Var::X));
    let x2 = x.pow(2);
    let qn = qp(-n);
    let f = series(ring, (0..=n).map(|k| ratio([pq(&qn, k), pq(&a, k), pq(&x, k), qpow(k)], [qq(k), pq(&x2, k)])))?;
    let x2qn = x2.times_q(n as i32);
    let x2_a = x2.div(&a);
    let rhs = series(
        ring,
        (0..=n).map(|k| {
            ratio(
                [fm(&a.pow(n as i32)), pq(&qn, k), pq(&x2qn, k), pq(&a, k), pq(&x2_a, k), pq(&x, k).pow(2), qpow(k)],
                [qq(k), pq(&x2, k), pq(&x2, 2 * k)],
            )
        }),
    )?;
    Ok((f.mul(&f)?, rhs))
}

/// The `c = x^2` corollary: a perfect square equal to `a^n` times a `5phi4`
/// whose lower parameters `-x, xq^(1/2), -xq^(1/2)` are grouped into
/// `(x^2;q)_2k / (x;q)_k`. Also compared against the general formula at
/// `c = x^2`.
pub fn verify_final_square(n: i64) -> VerificationReport {
    let mut ck = Checker::new("final_square", &[("n", n)], &[Var::A, Var::X]);
    if let Some((lhs, rhs)) = check_sides(&mut ck, "square formula", final_square_sides(n)) {
        let x = var(Var::X);
        if let Some((gl, gr)) =
            ck.require("general formula at c = x^2", clausen_sides(n, &var(Var::A), &x, &x.pow(2), ax_ring()))
        {
            check_same(&mut ck, "left sides agree at c = x^2", &lhs, &gl);
            check_same(&mut ck, "right sides agree at c = x^2", &rhs, &gr);
        }
    }
    ck.finish()
}

/// The square-root corollary for `n = 2m` in base `q = t^2`.
pub fn verify_sqrt_corollary(m: i64) -> VerificationReport {
    let mut ck = Checker::new("sqrt_corollary", &[("m", m)], &[Var::A, Var::X]);
    let ring = Ring::new(&[Var::T, Var::A, Var::X]);
    let t = var(Var::T);
    let base = t.pow(2);
    let (a, x) = (var(Var::A), var(Var::X));
    let built = (|| -> Result<(Frac, Frac)> {
        let lower = vec![Lower::Mono(x.pow(2)), Lower::Zero];
        let upper = vec![t.pow(-4 * m as i32), a.clone(), x.clone()];
        let lhs = (0..=2 * m)
            .map(|k| hyper_term(&upper, &lower, &base, &base, k as u32).map(Term::new))
            .collect::<Result<Vec<_>>>()?;
        let upper = vec![t.pow(-2 * m as i32), x.mul(&t.pow(2 * m as i32)), a.clone(), x.pow(2).div(&a)];
        let lower = [x.mul(&t), x.mul(&t).neg(), x.neg()].map(Lower::Mono).to_vec();
        let pre = fm(&a.pow(m as i32));
        let rhs = (0..=m)
            .map(|k| Ok(Term::new(pre.mul(&hyper_term(&upper, &lower, &base, &base, k as u32)?))))
            .collect::<Result<Vec<_>>>()?;
        Ok((Frac::sum(ring, &lhs)?, Frac::sum(ring, &rhs)?))
    })();
    if let Some((_, rhs)) = check_sides(&mut ck, "square-root formula", built) {
        let squared =
            ck.require("square the right side", rhs.mul(&rhs).and_then(|f| Ok((f.num.clone(), f.expand_den()?))));
        let mut to_t = Bindings::new();
        to_t.insert(Var::Q, t.pow(2).into());
        let full = final_square_sides(2 * m).and_then(|(_, r)| r.substitute(ring, &to_t));
        if let (Some(sq), Some(full)) = (squared, ck.require("square formula at n = 2m", full)) {
            check_cross(&mut ck, "squared right side = square formula at q = t^2", &sq, &full);
        }
    }
    ck.finish()
}

fn general_s_sides(n: i64, s: i64, a: &ParamExpr, ring: Ring) -> Result<(Frac, Frac)> {
    let x = var(Var::X);
    let q_x = x.inv().times_q(1);
    let qn = qp(-n);
    let factor = |y: &ParamExpr| {
        series(ring, (s..=n).map(|k| ratio([pq(&qn, k), pq(a, k), pq(y, k), qpow(k)], [qq(k - s), qq(k + s)])))
    };
    let lhs = factor(&x)?.mul(&factor(&q_x)?)?;
    let q_a = a.inv().times_q(1);
    let qn1 = qp(n + 1);
    let pre = ratio(
        [pq(&qn, s), pq(a, s), fm(&a.pow((n - s) as i32)), qpow((n + 1) * s - s * s)],
        [pq(&qn1, s), pq(&q_a, s)],
    );
    let rhs = series(
        ring,
        (s..=n).map(|k| {
            ratio(
                [pre.clone(), pq(&qn, k), pq(&qn1, k), pq(a, k), pq(&q_a, k), pq(&x, k), pq(&q_x, k), qpow(k)],
                [qq(k - s), qq(k + s), qq(2 * k)],
            )
        }),
    )?;
    Ok((lhs, rhs))
}

fn base_q2_sides(n: i64, s: i64) -> Result<(Frac, Frac)> {
    let ring = Ring::new(&[Var::X]);
    let x = var(Var::X);
    let q_x = x.inv().times_q(1);
    let q2 = qp(2);
    let q2n = qp(-2 * n);
    let factor = |y: &ParamExpr| {
        series(ring, (s..=n).map(|k| ratio([pb(&q2n, &q2, k), pq(y, k), qpow(k)], [qq(k - s), qq(k + s)])))
    };
    let lhs = factor(&x)?.mul(&factor(&q_x)?)?;
    let pre = ratio([sign(n), pb(&q2, &q2, n).pow(2), qpow(-n * n)], [pb(&q2, &q2, n - s), pb(&q2, &q2, n + s)]);
    let rhs = series(
        ring,
        (s..=n).map(|k| {
            ratio(
                [pre.clone(), sign(k), pb(&q2, &q2, n + k), pq(&x, k), pq(&q_x, k), qpow(k * k - 2 * n * k)],
                [pb(&q2, &q2, n - k), qq(k - s), qq(k + s), qq(2 * k)],
            )
        }),
    )?;
    Ok((lhs, rhs))
}

/// The shifted product formula in `a, x` for `0 <= s <= n`, the base-`q^2`
/// formula it specializes to at `a = -q^-n` (built from its own display),
/// and agreement of the two under that binding. At `s = 0` the shifted
/// sides are also compared with the general formula at `c = q`.
pub fn verify_general_s(n: i64, s: i64) -> Result<VerificationReport> {
    if s < 0 || s > n {
        return Err(QckError::InvalidParams(format!("need 0 <= s <= n, got n={n}, s={s}")));
    }
    let mut ck = Checker::new("general_s", &[("n", n), ("s", s)], &[Var::A, Var::X]);
    let a = var(Var::A);
    if let Some((lhs, rhs)) = check_sides(&mut ck, "shifted formula", general_s_sides(n, s, &a, ax_ring())) {
        if s == 0 {
            if let Some((gl, gr)) =
                ck.require("general formula at c = q", clausen_sides(n, &a, &var(Var::X), &qp(1), ax_ring()))
            {
                check_same(&mut ck, "left sides agree at s = 0", &lhs, &gl);
                check_same(&mut ck, "right sides agree at s = 0", &rhs, &gr);
            }
        }
    }
    if let Some((lhs, rhs)) = check_sides(&mut ck, "base q^2 formula", base_q2_sides(n, s)) {
        let minus = qp(-n).neg();
        if let Some((gl, gr)) =
            ck.require("shifted formula at a = -q^-n", general_s_sides(n, s, &minus, Ring::new(&[Var::X])))
        {
            check_same(&mut ck, "left sides agree at a = -q^-n", &lhs, &gl);
            check_same(&mut ck, "right sides agree at a = -q^-n", &rhs, &gr);
        }
    }
    Ok(ck.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        for n in 0..=3 {
            for r in [verify_clausen_orr(n), verify_final_square(n), verify_clausen_orr_radical(n)] {
                assert!(r.passed, "{r:?}");
            }
        }
        for m in 0..=1 {
            let r = verify_sqrt_corollary(m);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn shifted() {
        for n in 0..=3 {
            for s in 0..=n {
                let r = verify_general_s(n, s).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
        assert!(verify_general_s(2, 3).is_err());
    }

    #[test]
    fn corrupted_side_is_caught() {
        let ring = Ring::new(&[Var::A, Var::X, Var::C]);
        let (lhs, rhs) = clausen_sides(2, &var(Var::A), &var(Var::X), &var(Var::C), ring).unwrap();
        let bumped =
            Frac { num: &rhs.num + &rhs.expand_den().unwrap().scale(&crate::exactalg::BigRat::from(1)), den: rhs.den };
        assert!(!lhs.difference(&bumped).unwrap().is_zero());
    }
}
