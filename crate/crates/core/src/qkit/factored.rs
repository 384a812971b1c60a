use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use rustc_hash::FxHashMap;

use crate::error::{QckError, Result};
use crate::exactalg::{BigRat, Monomial, MultiLaurentPoly, ParamExpr, Ring, Var};

/// An irreducible-ish building block of a q-product.
///
/// `z` and `w` are always primitive-or-power monomials whose first nonzero
/// exponent is positive, so each value has exactly one spelling.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// `1 - z` for `d = 1`, the `d`-th cyclotomic polynomial in `z` otherwise.
    Cyclotomic { d: u32, z: Monomial },
    /// `1 - c*w` with `c` different from `1` and `-1`.
    Binomial { c: BigRat, w: Monomial },
}

impl Atom {
    pub fn expand(&self, ring: Ring) -> Result<MultiLaurentPoly> {
        match self {
            Atom::Cyclotomic { d, z } => {
                let coeffs = psi(*d);
                let terms = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| (z.pow(i as i32), BigRat::from(*c)));
                MultiLaurentPoly::from_terms(ring, terms)
            }
            Atom::Binomial { c, w } => MultiLaurentPoly::from_terms(ring, [(Monomial::ONE, BigRat::ONE), (*w, -c)]),
        }
    }

    fn monomial(&self) -> &Monomial {
        match self {
            Atom::Cyclotomic { z, .. } => z,
            Atom::Binomial { w, .. } => w,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclotomic { d: 1, z } => write!(f, "(1 - {z})"),
            Atom::Cyclotomic { d, z } => write!(f, "Phi{d}({z})"),
            Atom::Binomial { c, w } => write!(f, "(1 - {c}*{w})"),
        }
    }
}

thread_local! {
    static CYCLOTOMIC: RefCell<FxHashMap<u32, Vec<i64>>> = RefCell::new(FxHashMap::default());
}

/// Dense coefficients of `1 - x` (d = 1) or of the cyclotomic polynomial `Phi_d`.
pub fn psi(d: u32) -> Vec<i64> {
    assert!(d >= 1);
    if d == 1 {
        return vec![1, -1];
    }
    if let Some(v) = CYCLOTOMIC.with(|c| c.borrow().get(&d).cloned()) {
        return v;
    }
    // x^d - 1 divided by Phi_e for every proper divisor e.
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        let div = if e == 1 { vec![-1, 1] } else { psi(e) };
        num = divide_monic(&num, &div);
    }
    CYCLOTOMIC.with(|c| c.borrow_mut().insert(d, num.clone()));
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let f = rem[k + dn];
        quot[k] = f;
        for (i, c) in den.iter().enumerate() {
            rem[k + i] -= f * c;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

/// Split `m = z^g` with `z` primitive and its first nonzero exponent positive.
fn primitive_part(m: &Monomial) -> (Monomial, i32) {
    let mut g = 0i32;
    let mut sign = 0i32;
    for (_, e) in m.support() {
        if sign == 0 {
            sign = e.signum();
        }
        g = gcd(g, e.abs());
    }
    let g = g * sign;
    let mut z = Monomial::ONE;
    for (v, e) in m.support() {
        z.set_exp(v, e / g);
    }
    (z, g)
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An exact product `coeff * unit * prod(atom^mult)` with signed multiplicities.
///
/// Zero is represented by a zero coefficient and no atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Factored {
    coeff: BigRat,
    unit: Monomial,
    atoms: BTreeMap<Atom, i32>,
}

impl Factored {
    pub fn one() -> Self {
        Factored { coeff: BigRat::ONE, unit: Monomial::ONE, atoms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Factored { coeff: BigRat::ZERO, unit: Monomial::ONE, atoms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<BigRat>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Factored { coeff: c, unit: Monomial::ONE, atoms: BTreeMap::new() }
    }

    pub fn monomial(p: &ParamExpr) -> Self {
        Factored { coeff: p.coeff().clone(), unit: *p.mono(), atoms: BTreeMap::new() }
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::monomial(&ParamExpr::var_pow(v, e))
    }

    pub fn atom(a: Atom) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(a, 1);
        Factored { coeff: BigRat::ONE, unit: Monomial::ONE, atoms }
    }

    /// The binomial `1 - p`.
    pub fn one_minus(p: &ParamExpr) -> Self {
        one_minus(p.coeff(), p.mono())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigRat {
        &self.coeff
    }

    pub fn unit(&self) -> &Monomial {
        &self.unit
    }

    pub fn atoms(&self) -> &BTreeMap<Atom, i32> {
        &self.atoms
    }

    /// True when no atom has a negative multiplicity.
    pub fn is_polynomial(&self) -> bool {
        self.atoms.values().all(|e| *e > 0)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        Factored { coeff: &self.coeff * c, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigRat::from(-1))
    }

    pub fn pow(&self, e: i32) -> Self {
        if e == 0 {
            return Self::one();
        }
        if self.is_zero() {
            assert!(e > 0, "zero raised to a negative power");
            return Self::zero();
        }
        Factored {
            coeff: self.coeff.pow(e),
            unit: self.unit.pow(e),
            atoms: self.atoms.iter().map(|(a, m)| (a.clone(), m * e)).collect(),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(QckError::DivisionByZero);
        }
        Ok(self.mul(&other.pow(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut atoms = self.atoms.clone();
        for (a, m) in &other.atoms {
            let e = atoms.entry(a.clone()).or_insert(0);
            *e += m;
            if *e == 0 {
                atoms.remove(a);
            }
        }
        Factored { coeff: &self.coeff * &other.coeff, unit: self.unit.mul(&other.unit), atoms }
    }

    /// `(numerator, denominator)`: the denominator holds the atoms of negative
    /// multiplicity (made positive) and nothing else.
    pub fn split(&self) -> (Factored, Factored) {
        let mut num = Factored { coeff: self.coeff.clone(), unit: self.unit, atoms: BTreeMap::new() };
        let mut den = Factored::one();
        for (a, m) in &self.atoms {
            if *m > 0 {
                num.atoms.insert(a.clone(), *m);
            } else {
                den.atoms.insert(a.clone(), -m);
            }
        }
        (num, den)
    }

    /// Atomwise maximum of two pure atom products (least common multiple).
    pub fn lcm(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for (a, m) in &other.atoms {
            let e = atoms.entry(a.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        Factored { coeff: BigRat::ONE, unit: Monomial::ONE, atoms }
    }

    /// Variables occurring anywhere in the product.
    pub fn ring(&self) -> Ring {
        let mut vars = Vec::new();
        for m in std::iter::once(&self.unit).chain(self.atoms.keys().map(Atom::monomial)) {
            vars.extend(m.support().map(|(v, _)| v));
        }
        Ring::new(&vars)
    }

    /// Multiply out. Fails with `NotDivisible` if an atom has negative multiplicity.
    pub fn expand(&self, ring: Ring) -> Result<MultiLaurentPoly> {
        if self.is_zero() {
            return Ok(MultiLaurentPoly::zero(ring));
        }
        if let Some((a, _)) = self.atoms.iter().find(|(_, m)| **m < 0) {
            return Err(QckError::NotDivisible(format!("denominator factor {a} remains")));
        }
        // Univariate blocks multiply densely, so gather them per variable first.
        let mut blocks: BTreeMap<Option<Var>, MultiLaurentPoly> = BTreeMap::new();
        for (a, m) in &self.atoms {
            let key = a.monomial().single_var();
            let p = a.expand(ring)?.pow(*m as u32);
            let slot = blocks.entry(key).or_insert_with(|| MultiLaurentPoly::one(ring));
            *slot = &*slot * &p;
        }
        let mut acc = MultiLaurentPoly::monomial(self.coeff.clone(), self.unit, ring)?;
        let mut blocks: Vec<MultiLaurentPoly> = blocks.into_values().collect();
        blocks.sort_by_key(|p| p.len());
        for b in &blocks {
            acc = &acc * b;
        }
        Ok(acc)
    }
}

fn one_minus(c: &BigRat, w: &Monomial) -> Factored {
    if w.is_one() {
        return Factored::constant(&BigRat::ONE - c);
    }
    let (z, g) = primitive_part(w);
    if g < 0 {
        // 1 - c*z^g = -c*z^g * (1 - c^-1 * z^-g)
        let mut f = one_minus(&c.recip(), &z.pow(-g));
        f.coeff = &f.coeff * &(-c);
        f.unit = f.unit.mul(w);
        return f;
    }
    let g = g as u32;
    let mut atoms = BTreeMap::new();
    if c.is_one() {
        for d in (1..=g).filter(|d| g.is_multiple_of(*d)) {
            atoms.insert(Atom::Cyclotomic { d, z }, 1);
        }
    } else if *c == BigRat::from(-1) {
        for d in (1..=2 * g).filter(|d| (2 * g).is_multiple_of(*d) && !g.is_multiple_of(*d)) {
            atoms.insert(Atom::Cyclotomic { d, z }, 1);
        }
    } else {
        atoms.insert(Atom::Binomial { c: c.clone(), w: *w }, 1);
    }
    Factored { coeff: BigRat::ONE, unit: Monomial::ONE, atoms }
}

impl Mul for &Factored {
    type Output = Factored;
    fn mul(self, rhs: &Factored) -> Factored {
        Factored::mul(self, rhs)
    }
}

impl Mul for Factored {
    type Output = Factored;
    fn mul(self, rhs: Factored) -> Factored {
        Factored::mul(&self, &rhs)
    }
}

impl Div for &Factored {
    type Output = Factored;
    fn div(self, rhs: &Factored) -> Factored {
        self.checked_div(rhs).expect("division of a product by zero")
    }
}

impl Div for Factored {
    type Output = Factored;
    fn div(self, rhs: Factored) -> Factored {
        &self / &rhs
    }
}

impl std::iter::Product for Factored {
    fn product<I: Iterator<Item = Factored>>(iter: I) -> Factored {
        iter.fold(Factored::one(), |a, b| Factored::mul(&a, &b))
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if !self.unit.is_one() {
            write!(f, "*{}", self.unit)?;
        }
        for (a, m) in &self.atoms {
            if *m == 1 {
                write!(f, "*{a}")?;
            } else {
                write!(f, "*{a}^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
