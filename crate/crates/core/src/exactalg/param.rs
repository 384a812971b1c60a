use std::fmt;

use super::rat::BigRat;
use super::var::{Monomial, Var};

/// A Laurent monomial with a nonzero rational coefficient, e.g. `q^-n`,
/// `c*q^n` or `c/x`. Used for series parameters and substitution images.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamExpr {
    coeff: BigRat,
    mono: Monomial,
}

impl ParamExpr {
    pub fn new(coeff: BigRat, mono: Monomial) -> Self {
        assert!(!coeff.is_zero(), "parameter coefficient must be nonzero");
        ParamExpr { coeff, mono }
    }

    pub fn one() -> Self {
        ParamExpr { coeff: BigRat::ONE, mono: Monomial::ONE }
    }

    pub fn constant(c: impl Into<BigRat>) -> Self {
        Self::new(c.into(), Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        ParamExpr { coeff: BigRat::ONE, mono: Monomial::var(v, 1) }
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        ParamExpr { coeff: BigRat::ONE, mono: Monomial::var(v, e) }
    }

    pub fn q_pow(e: i32) -> Self {
        Self::var_pow(Var::Q, e)
    }

    pub fn coeff(&self) -> &BigRat {
        &self.coeff
    }

    pub fn mono(&self) -> &Monomial {
        &self.mono
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.mono.is_one()
    }

    pub fn mul(&self, other: &ParamExpr) -> ParamExpr {
        ParamExpr { coeff: &self.coeff * &other.coeff, mono: self.mono.mul(&other.mono) }
    }

    pub fn div(&self, other: &ParamExpr) -> ParamExpr {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> ParamExpr {
        ParamExpr { coeff: self.coeff.recip(), mono: self.mono.inv() }
    }

    pub fn pow(&self, e: i32) -> ParamExpr {
        ParamExpr { coeff: self.coeff.pow(e), mono: self.mono.pow(e) }
    }

    pub fn neg(&self) -> ParamExpr {
        ParamExpr { coeff: -&self.coeff, mono: self.mono }
    }

    /// Multiply by `v^e`.
    pub fn times(&self, v: Var, e: i32) -> ParamExpr {
        ParamExpr { coeff: self.coeff.clone(), mono: self.mono.mul(&Monomial::var(v, e)) }
    }

    /// Multiply by `q^e`.
    pub fn times_q(&self, e: i32) -> ParamExpr {
        self.times(Var::Q, e)
    }

    /// If this is `q^-n` with `n >= 0`, return `n`.
    pub fn termination_order(&self) -> Option<u32> {
        if !self.coeff.is_one() {
            return None;
        }
        let e = self.mono.exp(Var::Q);
        let only_q = self.mono.support().all(|(v, _)| v == Var::Q);
        (only_q && e <= 0).then_some((-e) as u32)
    }
}

/// Prints in the series-spec grammar: `[RAT "*"] factor ("*" factor)*`.
impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            if self.coeff.is_one() {
                return f.write_str("q^0");
            }
            return write!(f, "{}*q^0", self.coeff);
        }
        if !self.coeff.is_one() {
            write!(f, "{}*", self.coeff)?;
        }
        write!(f, "{}", self.mono)
    }
}

impl fmt::Debug for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn termination_detection() {
        assert_eq!(ParamExpr::q_pow(-3).termination_order(), Some(3));
        assert_eq!(ParamExpr::q_pow(0).termination_order(), Some(0));
        assert_eq!(ParamExpr::q_pow(2).termination_order(), None);
        assert_eq!(ParamExpr::var(Var::C).times_q(-2).termination_order(), None);
        assert_eq!(ParamExpr::q_pow(-2).neg().termination_order(), None);
    }

    #[test]
    fn display() {
        assert_eq!(ParamExpr::q_pow(-2).to_string(), "q^-2");
        assert_eq!(ParamExpr::var(Var::C).times_q(3).to_string(), "q^3*c");
        assert_eq!(ParamExpr::one().to_string(), "q^0");
        assert_eq!(ParamExpr::var(Var::X).neg().to_string(), "-1*x");
    }
}
