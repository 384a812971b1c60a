use crate::error::{QckError, Result};
use crate::exactalg::{ParamExpr, Ring, Var};
use crate::qkit::Frac;
use crate::report::{Checker, VerificationReport};

use super::clausen::clausen_sides;
use super::{c2, check_same, check_sides, fm, mono, pb, pq, qp, qpow, qq, ratio, series, sign, var};

fn special3_sides(n: i64, c: &ParamExpr, ring: Ring) -> Result<(Frac, Frac)> {
    let x = var(Var::X);
    let q2 = qp(2);
    let qn = qp(-n);
    let f1 = series(ring, (0..=n).map(|k| ratio([pq(&qn, k), pb(&x, &q2, k), qpow(k)], [qq(k), pq(c, k)])))?;
    let f2 = series(
        ring,
        (0..=n).map(|k| {
            ratio(
                [pq(&qn, k), pb(&x, &q2, k), fm(&c.pow(k as i32)), qpow(n * k - c2(k))],
                [qq(k), pq(c, k), mono(&[(Var::X, k)])],
            )
        }),
    )?;
    let cqn = c.times_q(n as i32);
    let c2_x = c.pow(2).div(&x);
    let rhs = series(
        ring,
        (0..=n).map(|k| {
            ratio(
                [pq(&qn, k), pq(&cqn, k), pb(&x, &q2, k), pb(&c2_x, &q2, k), qpow(k)],
                [qq(k), pq(c, k), pq(c, 2 * k)],
            )
        }),
    )?;
    Ok((f1.mul(&f2)?, rhs))
}

/// Product of two sums carrying `(x;q^2)_k`, the second with weights
/// `c^k q^(nk - C(k,2)) / x^k`, symbolically in `x, c`.
pub fn verify_special3(n: i64) -> VerificationReport {
    let mut ck = Checker::new("special3", &[("n", n)], &[Var::X, Var::C]);
    check_sides(&mut ck, "product formula", special3_sides(n, &var(Var::C), Ring::new(&[Var::X, Var::C])));
    ck.finish()
}

/// The same identity at `c = q^(2s+1)`, `x -> xq^(2s)`, `n -> n - s`, as a
/// sum over `s <= k <= n`.
pub fn verify_special3_shifted(n: i64, s: i64) -> Result<VerificationReport> {
    if s < 0 || s > n {
        return Err(QckError::InvalidParams(format!("need 0 <= s <= n, got n={n}, s={s}")));
    }
    let mut ck = Checker::new("special3_shifted", &[("n", n), ("s", s)], &[Var::X]);
    let ring = Ring::new(&[Var::X]);
    let x = var(Var::X);
    let q2 = qp(2);
    let qn = qp(-n);
    let built = (|| -> Result<(Frac, Frac)> {
        let f1 = series(ring, (s..=n).map(|k| ratio([pq(&qn, k), pb(&x, &q2, k), qpow(k)], [qq(k - s), qq(k + s)])))?;
        let f2 = series(
            ring,
            (s..=n).map(|k| {
                ratio(
                    [pq(&qn, k), pb(&x, &q2, k), qpow((n + 1) * k - c2(k))],
                    [qq(k - s), qq(k + s), mono(&[(Var::X, k)])],
                )
            }),
        )?;
        let q2_x = x.inv().times_q(2);
        let pre = ratio(
            [sign(s), qq(n).pow(2), pb(&x, &q2, s), qpow(s)],
            [qq(n - s), qq(n + s), pb(&q2_x, &q2, s), mono(&[(Var::X, s)])],
        );
        let qn1 = qp(n + 1);
        let rhs = series(
            ring,
            (s..=n).map(|k| {
                ratio(
                    [pre.clone(), pq(&qn, k), pq(&qn1, k), pb(&x, &q2, k), pb(&q2_x, &q2, k), qpow(k)],
                    [qq(k - s), qq(k + s), qq(2 * k)],
                )
            }),
        )?;
        Ok((f1.mul(&f2)?, rhs))
    })();
    if let Some((lhs, rhs)) = check_sides(&mut ck, "shifted product formula", built) {
        if s == 0 {
            if let Some((gl, gr)) = ck.require("unshifted formula at c = q", special3_sides(n, &qp(1), ring)) {
                check_same(&mut ck, "left sides agree at s = 0", &lhs, &gl);
                check_same(&mut ck, "right sides agree at s = 0", &rhs, &gr);
            }
        }
    }
    Ok(ck.finish())
}

/// The `a = -x` case of the general product formula, with `(-x;q)_k (x;q)_k`
/// written as `(x^2;q^2)_k`; compared against the general formula bound at
/// `a = -x`.
pub fn verify_special1(n: i64) -> VerificationReport {
    let mut ck = Checker::new("special1", &[("n", n)], &[Var::X, Var::C]);
    let ring = Ring::new(&[Var::X, Var::C]);
    let (x, c) = (var(Var::X), var(Var::C));
    let q2 = qp(2);
    let qn = qp(-n);
    let x2 = x.pow(2);
    let built = (|| -> Result<(Frac, Frac)> {
        let f1 = series(ring, (0..=n).map(|k| ratio([pq(&qn, k), pb(&x2, &q2, k), qpow(k)], [qq(k), pq(&c, k)])))?;
        let c_x = c.div(&x);
        let f2 = series(
            ring,
            (0..=n).map(|k| ratio([pq(&qn, k), pq(&x.neg(), k), pq(&c_x, k), qpow(k)], [qq(k), pq(&c, k)])),
        )?;
        let cqn = c.times_q(n as i32);
        let c2_x2 = c.div(&x).pow(2);
        let rhs = series(
            ring,
            (0..=n).map(|k| {
                ratio(
                    [fm(&x.neg().pow(n as i32)), pq(&qn, k), pq(&cqn, k), pb(&x2, &q2, k), pb(&c2_x2, &q2, k), qpow(k)],
                    [qq(k), pq(&c, k), pq(&c, 2 * k)],
                )
            }),
        )?;
        Ok((f1.mul(&f2)?, rhs))
    })();
    if let Some((lhs, rhs)) = check_sides(&mut ck, "a = -x formula", built) {
        if let Some((gl, gr)) = ck.require("general formula at a = -x", clausen_sides(n, &x.neg(), &x, &c, ring)) {
            check_same(&mut ck, "left sides agree", &lhs, &gl);
            check_same(&mut ck, "right sides agree", &rhs, &gr);
        }
    }
    ck.finish()
}

fn special222_sides(n: i64, x: &ParamExpr, y: &ParamExpr, ring: Ring) -> Result<(Frac, Frac)> {
    let c = var(Var::C);
    let qn = qp(-n);
    let lhs = series(ring, (0..=n).map(|k| ratio([pq(&qn, k), pq(x, k), pq(y, k), qpow(k)], [qq(k), pq(&c, k)])))?;
    let c_y = c.div(y);
    let rhs = series(
        ring,
        (0..=n).map(|k| {
            ratio(
                [
                    sign(k),
                    pq(&qn, k),
                    pq(x, k),
                    pq(&c_y, k),
                    fm(&x.pow((n - k) as i32)),
                    fm(&y.pow(k as i32)),
                    qpow(n * k - c2(k)),
                ],
                [qq(k), pq(&c, k)],
            )
        }),
    )?;
    Ok((lhs, rhs))
}

fn special2_sides(n: i64, ring: Ring) -> Result<(Frac, Frac)> {
    let (x, c) = (var(Var::X), var(Var::C));
    let q2 = qp(2);
    let qn = qp(-n);
    let c_x = c.div(&x);
    let lhs =
        series(ring, (0..=n).map(|k| ratio([pq(&qn, k), pq(&x.neg(), k), pq(&c_x, k), qpow(k)], [qq(k), pq(&c, k)])))?;
    let x2 = x.pow(2);
    let rhs = series(
        ring,
        (0..=n).map(|k| {
            ratio(
                [fm(&x.neg().pow(n as i32)), pq(&qn, k), pb(&x2, &q2, k), fm(&c.pow(k as i32)), qpow(n * k - c2(k))],
                [qq(k), pq(&c, k), mono(&[(Var::X, 2 * k)])],
            )
        }),
    )?;
    Ok((lhs, rhs))
}

/// The transformation of a terminating `3phi2` with lower parameters `c, 0`
/// into a sum with `(c/y;q)_k`, symbolically in `x, y, c`; then bound at
/// `x -> -x, y -> c/x` and compared with its own specialized display.
pub fn verify_special222(n: i64) -> VerificationReport {
    let mut ck = Checker::new("special222", &[("n", n)], &[Var::X, Var::Y, Var::C]);
    let ring = Ring::new(&[Var::X, Var::Y, Var::C]);
    check_sides(&mut ck, "transformation", special222_sides(n, &var(Var::X), &var(Var::Y), ring));
    let ring = Ring::new(&[Var::X, Var::C]);
    let x = var(Var::X);
    let bound = special222_sides(n, &x.neg(), &var(Var::C).div(&x), ring);
    if let (Some((bl, br)), Some((sl, sr))) =
        (ck.require("bind x -> -x, y -> c/x", bound), ck.require("specialized display", special2_sides(n, ring)))
    {
        check_same(&mut ck, "left sides agree under binding", &bl, &sl);
        check_same(&mut ck, "right sides agree under binding", &br, &sr);
    }
    ck.finish()
}

/// The specialized transformation on its own.
pub fn verify_special2(n: i64) -> VerificationReport {
    let mut ck = Checker::new("special2", &[("n", n)], &[Var::X, Var::C]);
    check_sides(&mut ck, "transformation at x -> -x, y -> c/x", special2_sides(n, Ring::new(&[Var::X, Var::C])));
    ck.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        for n in 0..=3 {
            for r in [verify_special3(n), verify_special1(n), verify_special222(n), verify_special2(n)] {
                assert!(r.passed, "{r:?}");
            }
            for s in 0..=n {
                let r = verify_special3_shifted(n, s).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
        assert!(verify_special3_shifted(1, 2).is_err());
    }
}
