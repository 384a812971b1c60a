use crate::error::Result;
use crate::exactalg::{exact_divide, Bindings, MultiLaurentPoly, Ring};

use super::factored::Factored;

/// One summand: a factored q-product, optionally times an expanded polynomial.
#[derive(Clone, Debug)]
pub struct Term {
    pub factor: Factored,
    pub poly: Option<MultiLaurentPoly>,
}

impl Term {
    pub fn new(factor: Factored) -> Self {
        Term { factor, poly: None }
    }

    pub fn with_poly(factor: Factored, poly: MultiLaurentPoly) -> Self {
        Term { factor, poly: Some(poly) }
    }
}

impl From<Factored> for Term {
    fn from(f: Factored) -> Self {
        Term::new(f)
    }
}

/// A polynomial over a factored denominator of pure atoms.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: MultiLaurentPoly,
    pub den: Factored,
}

impl Frac {
    pub fn from_poly(num: MultiLaurentPoly) -> Self {
        Frac { num, den: Factored::one() }
    }

    pub fn ring(&self) -> Ring {
        self.num.ring()
    }

    /// Sum of terms over the least common multiple of their denominators.
    pub fn sum(ring: Ring, terms: &[Term]) -> Result<Frac> {
        let parts: Vec<(Factored, Factored)> =
            terms.iter().filter(|t| !t.factor.is_zero()).map(|t| t.factor.split()).collect();
        let den = parts.iter().fold(Factored::one(), |l, (_, d)| l.lcm(d));
        let mut nums = Vec::with_capacity(parts.len());
        for (t, (n, d)) in terms.iter().filter(|t| !t.factor.is_zero()).zip(&parts) {
            let mut p = n.mul(&den.checked_div(d)?).expand(ring)?;
            if let Some(extra) = &t.poly {
                p = p.try_mul(extra)?;
            }
            nums.push(p);
        }
        Ok(Frac { num: MultiLaurentPoly::sum(ring, &nums), den })
    }

    pub fn mul(&self, other: &Frac) -> Result<Frac> {
        Ok(Frac { num: self.num.try_mul(&other.num)?, den: self.den.mul(&other.den) })
    }

    /// Multiply by a factored product, keeping its denominator factored.
    pub fn mul_factored(&self, f: &Factored) -> Result<Frac> {
        let (n, d) = f.split();
        let num = self.num.try_mul(&n.expand(self.ring())?)?;
        Ok(Frac { num, den: self.den.mul(&d) })
    }

    pub fn expand_den(&self) -> Result<MultiLaurentPoly> {
        self.den.expand(self.ring())
    }

    /// The cleared difference `a.num*(L/a.den) - b.num*(L/b.den)`, `L` the lcm
    /// of the two denominators. It vanishes exactly when `a == b`.
    pub fn difference(&self, other: &Frac) -> Result<MultiLaurentPoly> {
        let ring = self.ring();
        let l = self.den.lcm(&other.den);
        let left = self.num.try_mul(&l.checked_div(&self.den)?.expand(ring)?)?;
        let right = other.num.try_mul(&l.checked_div(&other.den)?.expand(ring)?)?;
        left.try_sub(&right)
    }

    /// The numerator over the multiple `l` of the denominator.
    pub fn cleared(&self, l: &Factored) -> Result<MultiLaurentPoly> {
        self.num.try_mul(&l.checked_div(&self.den)?.expand(self.ring())?)
    }

    /// Expanded numerator and denominator, embedded in `ring` and then
    /// substituted.
    pub fn substitute(&self, ring: Ring, bindings: &Bindings) -> Result<(MultiLaurentPoly, MultiLaurentPoly)> {
        let num = self.num.embed(ring)?.substitute(bindings)?;
        let den = self.den.expand(ring)?.substitute(bindings)?;
        Ok((num, den))
    }

    /// Cancel every denominator atom that divides the numerator.
    pub fn reduce(&self) -> Result<Frac> {
        let ring = self.ring();
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (atom, mult) in self.den.atoms() {
            let poly = atom.expand(ring)?;
            for _ in 0..*mult {
                match exact_divide(&num, &poly)? {
                    Some(quot) => {
                        num = quot;
                        den = den.checked_div(&Factored::atom(atom.clone()))?;
                    }
                    None => break,
                }
            }
        }
        Ok(Frac { num, den })
    }

    /// The exact quotient when the denominator divides out.
    pub fn to_poly(&self) -> Result<Option<MultiLaurentPoly>> {
        exact_divide(&self.num, &self.expand_den()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{BigRat, ParamExpr, Var};

    #[test]
    fn sum_over_common_denominator() {
        let ring = Ring::q_only();
        let one_minus = |e| Factored::one_minus(&ParamExpr::q_pow(e));
        // 1/(1-q) + q/(1-q^2) = (1 + 2q)/((1-q)(1+q))
        let terms =
            [Term::new(one_minus(1).pow(-1)), Term::new(Factored::var_pow(Var::Q, 1).mul(&one_minus(2).pow(-1)))];
        let f = Frac::sum(ring, &terms).unwrap();
        assert_eq!(f.num.to_string(), "1 + 2*q");
        assert_eq!(f.expand_den().unwrap().to_string(), "1 - q^2");
        let g = Frac { num: MultiLaurentPoly::parse_in("2 + 4*q", ring).unwrap(), den: one_minus(2).pow(2) };
        let g = g.mul_factored(&one_minus(2).scale(&BigRat::new(1, 2))).unwrap();
        assert!(f.difference(&g).unwrap().is_zero());
    }

    #[test]
    fn reduce_cancels_dividing_atoms() {
        let ring = Ring::q_only();
        let one_minus = |e| Factored::one_minus(&ParamExpr::q_pow(e));
        // (1 - q^2)/((1-q)^2 (1+q)) = 1/(1-q)
        let f =
            Frac { num: MultiLaurentPoly::parse_in("1 - q^2", ring).unwrap(), den: one_minus(1).mul(&one_minus(2)) };
        let r = f.reduce().unwrap();
        assert_eq!(r.num.to_string(), "1");
        assert_eq!(r.expand_den().unwrap().to_string(), "1 - q");
        assert!(f.difference(&r).unwrap().is_zero());
    }
}
