use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use super::param::ParamExpr;
use super::rat::BigRat;
use super::var::{Monomial, Ring, Var};
use crate::error::{QckError, Result};

/// Default cap on the number of terms in any expanded product.
pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

static MAX_TERMS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_TERMS);

/// Set the process-wide cap on expanded product size.
pub fn set_max_terms(limit: usize) {
    MAX_TERMS.store(limit.max(1), AtomicOrdering::Relaxed);
}

pub fn max_terms() -> usize {
    MAX_TERMS.load(AtomicOrdering::Relaxed)
}

/// Panic payload raised when a product exceeds [`max_terms`].
///
/// Callers that want a graceful abort run the computation under
/// `std::panic::catch_unwind` and downcast to this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermLimitExceeded {
    pub terms: usize,
    pub limit: usize,
}

/// Image of a variable under substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Mono(ParamExpr),
    Value(BigRat),
}

impl From<ParamExpr> for Binding {
    fn from(p: ParamExpr) -> Self {
        Binding::Mono(p)
    }
}

impl From<BigRat> for Binding {
    fn from(r: BigRat) -> Self {
        Binding::Value(r)
    }
}

impl From<i64> for Binding {
    fn from(r: i64) -> Self {
        Binding::Value(BigRat::from(r))
    }
}

pub type Bindings = BTreeMap<Var, Binding>;

/// A sparse multivariate Laurent polynomial with exact rational coefficients.
///
/// Terms are kept sorted ascending in the graded order of [`Monomial`] with no
/// zero coefficients, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiLaurentPoly {
    ring: Ring,
    terms: Vec<(Monomial, BigRat)>,
}

impl MultiLaurentPoly {
    pub fn zero(ring: Ring) -> Self {
        MultiLaurentPoly { ring, terms: Vec::new() }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(BigRat::ONE, ring)
    }

    pub fn constant(c: impl Into<BigRat>, ring: Ring) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero(ring);
        }
        MultiLaurentPoly { ring, terms: vec![(Monomial::ONE, c)] }
    }

    /// `v^e`. Panics if `v` is not in `ring`.
    pub fn var_pow(v: Var, e: i32, ring: Ring) -> Self {
        assert!(ring.contains(v), "variable {v} not in {ring:?}");
        MultiLaurentPoly { ring, terms: vec![(Monomial::var(v, e), BigRat::ONE)] }
    }

    pub fn var(v: Var, ring: Ring) -> Self {
        Self::var_pow(v, 1, ring)
    }

    /// `q^e` in the given ring.
    pub fn q_pow(e: i32, ring: Ring) -> Self {
        Self::var_pow(Var::Q, e, ring)
    }

    pub fn monomial(coeff: BigRat, m: Monomial, ring: Ring) -> Result<Self> {
        if !ring.admits(&m) {
            return Err(QckError::RingMismatch { left: ring, right: ring_of(&m) });
        }
        if coeff.is_zero() {
            return Ok(Self::zero(ring));
        }
        Ok(MultiLaurentPoly { ring, terms: vec![(m, coeff)] })
    }

    pub fn from_param(p: &ParamExpr, ring: Ring) -> Result<Self> {
        Self::monomial(p.coeff().clone(), *p.mono(), ring)
    }

    /// Build from arbitrary terms; combines duplicates and drops zeros.
    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Monomial, BigRat)>) -> Result<Self> {
        let mut acc: FxHashMap<Monomial, BigRat> = FxHashMap::default();
        for (m, c) in terms {
            if !ring.admits(&m) {
                return Err(QckError::RingMismatch { left: ring, right: ring_of(&m) });
            }
            *acc.entry(m).or_default() += &c;
        }
        Ok(Self::from_map(ring, acc))
    }

    fn from_map(ring: Ring, acc: FxHashMap<Monomial, BigRat>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        MultiLaurentPoly { ring, terms }
    }

    pub(crate) fn from_sorted_unchecked(ring: Ring, terms: Vec<(Monomial, BigRat)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MultiLaurentPoly { ring, terms }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, BigRat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRat {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRat::ZERO,
        }
    }

    /// Leading term in the graded order.
    pub fn leading(&self) -> Option<&(Monomial, BigRat)> {
        self.terms.last()
    }

    /// Re-tag into a larger ring.
    pub fn embed(&self, ring: Ring) -> Result<Self> {
        if !self.ring.is_subring_of(ring) {
            return Err(QckError::RingMismatch { left: self.ring, right: ring });
        }
        Ok(MultiLaurentPoly { ring, terms: self.terms.clone() })
    }

    /// Smallest and largest exponent of `v` among the terms.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().map(|(m, _)| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Componentwise minimum exponent vector (the Laurent shift).
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.iter().map(|(m, _)| *m);
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(first, |acc, m| acc.meet(&m)),
        }
    }

    /// True when only `q` occurs.
    pub fn is_univariate_q(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.support().all(|(v, _)| v == Var::Q))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(QckError::RingMismatch { left: self.ring, right: other.ring });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(MultiLaurentPoly { ring: self.ring, terms: merge(&self.terms, &other.terms, false) })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(MultiLaurentPoly { ring: self.ring, terms: merge(&self.terms, &other.terms, true) })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let terms = mul_terms(&self.terms, &other.terms);
        Ok(MultiLaurentPoly { ring: self.ring, terms })
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        let terms = self.terms.iter().map(|(m, k)| (*m, k * c)).collect();
        MultiLaurentPoly { ring: self.ring, terms }
    }

    /// Multiply by `c * m`. Panics if `m` leaves the ring.
    pub fn mul_term(&self, m: &Monomial, c: &BigRat) -> Self {
        assert!(self.ring.admits(m), "monomial {m} not in {:?}", self.ring);
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        let terms = self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect();
        MultiLaurentPoly { ring: self.ring, terms }
    }

    pub fn mul_param(&self, p: &ParamExpr) -> Self {
        self.mul_term(p.mono(), p.coeff())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under the ring homomorphism fixing unbound variables.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Self> {
        let mut acc: FxHashMap<Monomial, BigRat> = FxHashMap::default();
        'terms: for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = Monomial::ONE;
            for (v, e) in m.support() {
                match bindings.get(&v) {
                    None => mono = mono.mul(&Monomial::var(v, e)),
                    Some(Binding::Mono(p)) => {
                        coeff = &coeff * &p.coeff().pow(e);
                        mono = mono.mul(&p.mono().pow(e));
                    }
                    Some(Binding::Value(r)) => {
                        if r.is_zero() {
                            if e < 0 {
                                return Err(QckError::ZeroIntoNegativeExponent(v.name()));
                            }
                            continue 'terms;
                        }
                        coeff = &coeff * &r.pow(e);
                    }
                }
            }
            if !self.ring.admits(&mono) {
                return Err(QckError::RingMismatch { left: self.ring, right: ring_of(&mono) });
            }
            acc.entry(mono).or_default().add_mul(&coeff, &BigRat::ONE);
        }
        Ok(Self::from_map(self.ring, acc))
    }

    /// Shorthand for substituting a single variable.
    pub fn subs(&self, v: Var, b: impl Into<Binding>) -> Result<Self> {
        let mut bindings = Bindings::new();
        bindings.insert(v, b.into());
        self.substitute(&bindings)
    }

    /// Value at `q = 1` (other variables untouched).
    pub fn at_q_one(&self) -> Self {
        self.subs(Var::Q, 1).expect("q = 1 is always admissible")
    }

    /// True iff every coefficient is a non-negative integer.
    ///
    /// Errors if any variable other than `q` remains.
    pub fn is_nonneg_integer_laurent(&self) -> Result<bool> {
        if !self.is_univariate_q() {
            return Err(QckError::ExtraVariables(self.to_string()));
        }
        Ok(self.has_nonneg_integer_coeffs())
    }

    /// Coefficient test without the univariate restriction.
    pub fn has_nonneg_integer_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer() && !c.is_negative())
    }

    pub fn min_coeff(&self) -> Option<BigRat> {
        self.terms.iter().map(|(_, c)| c.clone()).min()
    }

    /// Collect by powers of `v`: exponent -> coefficient polynomial (without `v`).
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<i32, MultiLaurentPoly> {
        let mut groups: BTreeMap<i32, Vec<(Monomial, BigRat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut rest = *m;
            rest.set_exp(v, 0);
            groups.entry(e).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(e, ts)| {
                let mut ts = ts;
                ts.sort_unstable_by_key(|a| a.0);
                (e, MultiLaurentPoly { ring: self.ring, terms: ts })
            })
            .collect()
    }

    /// Sum of a sequence of polynomials in `ring`.
    pub fn sum<'a>(ring: Ring, items: impl IntoIterator<Item = &'a MultiLaurentPoly>) -> Self {
        let mut acc: FxHashMap<Monomial, BigRat> = FxHashMap::default();
        for p in items {
            assert_eq!(p.ring, ring, "ring mismatch in sum");
            for (m, c) in &p.terms {
                acc.entry(*m).or_default().add_mul(c, &BigRat::ONE);
            }
        }
        Self::from_map(ring, acc)
    }
}

pub(crate) fn ring_of(m: &Monomial) -> Ring {
    let vars: Vec<Var> = m.support().map(|(v, _)| v).collect();
    Ring::new(&vars)
}

fn merge(a: &[(Monomial, BigRat)], b: &[(Monomial, BigRat)], negate_b: bool) -> Vec<(Monomial, BigRat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0, c));
    }
    out
}

fn common_single_var(a: &[(Monomial, BigRat)], b: &[(Monomial, BigRat)]) -> Option<Var> {
    let mut var: Option<Var> = None;
    for (m, _) in a.iter().chain(b.iter()) {
        for (v, _) in m.support() {
            match var {
                None => var = Some(v),
                Some(w) if w == v => {}
                Some(_) => return None,
            }
        }
    }
    Some(var.unwrap_or(Var::Q))
}

fn mul_terms(a: &[(Monomial, BigRat)], b: &[(Monomial, BigRat)]) -> Vec<(Monomial, BigRat)> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let out = if small.len() <= 4 {
        mul_by_shifting(small, big)
    } else if let Some(v) = common_single_var(a, b) {
        mul_dense(a, b, v)
    } else {
        mul_hashed(a, b)
    };
    enforce_limit(out.len(), max_terms());
    out
}

fn enforce_limit(terms: usize, limit: usize) {
    if terms > limit {
        std::panic::panic_any(TermLimitExceeded { terms, limit });
    }
}

fn mul_by_shifting(small: &[(Monomial, BigRat)], big: &[(Monomial, BigRat)]) -> Vec<(Monomial, BigRat)> {
    // Multiplying by a monomial preserves the graded order, so each shifted
    // copy stays sorted and a merge suffices.
    let mut acc: Vec<(Monomial, BigRat)> = Vec::new();
    for (m, c) in small {
        let shifted: Vec<_> = big.iter().map(|(t, k)| (t.mul(m), k * c)).collect();
        acc = if acc.is_empty() { shifted } else { merge(&acc, &shifted, false) };
    }
    acc
}

fn mul_dense(a: &[(Monomial, BigRat)], b: &[(Monomial, BigRat)], v: Var) -> Vec<(Monomial, BigRat)> {
    let lo_a = a[0].0.exp(v);
    let lo_b = b[0].0.exp(v);
    let hi_a = a[a.len() - 1].0.exp(v);
    let hi_b = b[b.len() - 1].0.exp(v);
    let width = (hi_a - lo_a + hi_b - lo_b + 1) as usize;
    let base = lo_a + lo_b;
    let at = |i: usize| Monomial::var(v, base + i as i32);
    if let (Some(ia), Some(ib)) = (int_coeffs(a), int_coeffs(b)) {
        let mut dense = vec![IntAcc::default(); width];
        for ((ma, _), xa) in a.iter().zip(&ia) {
            let sa = (ma.exp(v) - lo_a) as usize;
            for ((mb, _), xb) in b.iter().zip(&ib) {
                dense[sa + (mb.exp(v) - lo_b) as usize].add_mul(xa, xb);
            }
        }
        return dense.into_iter().enumerate().map(|(i, c)| (at(i), c.finish())).filter(|(_, c)| !c.is_zero()).collect();
    }
    let mut dense = vec![BigRat::ZERO; width];
    for (ma, ca) in a {
        let ia = (ma.exp(v) - lo_a) as usize;
        for (mb, cb) in b {
            let ib = (mb.exp(v) - lo_b) as usize;
            dense[ia + ib].add_mul(ca, cb);
        }
    }
    dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (at(i), c)).collect()
}

/// An integer coefficient, inline when it fits an `i64`.
enum IntCoeff {
    Small(i64),
    Big(BigInt),
}

impl IntCoeff {
    fn to_big(&self) -> BigInt {
        match self {
            IntCoeff::Small(x) => BigInt::from(*x),
            IntCoeff::Big(x) => x.clone(),
        }
    }
}

fn int_coeffs(terms: &[(Monomial, BigRat)]) -> Option<Vec<IntCoeff>> {
    terms
        .iter()
        .map(|(_, c)| match c.as_i64() {
            Some(x) => Some(IntCoeff::Small(x)),
            None => c.to_bigint().map(IntCoeff::Big),
        })
        .collect()
}

/// Sum of integer products: an `i128` that spills into a `BigInt`.
#[derive(Clone, Default)]
struct IntAcc {
    small: i128,
    big: Option<BigInt>,
}

impl IntAcc {
    fn add_mul(&mut self, a: &IntCoeff, b: &IntCoeff) {
        if let (IntCoeff::Small(x), IntCoeff::Small(y)) = (a, b) {
            let p = *x as i128 * *y as i128;
            match self.small.checked_add(p) {
                Some(v) => self.small = v,
                None => {
                    *self.big.get_or_insert_with(BigInt::default) += self.small;
                    self.small = p;
                }
            }
        } else {
            *self.big.get_or_insert_with(BigInt::default) += a.to_big() * b.to_big();
        }
    }

    fn finish(self) -> BigRat {
        match self.big {
            None => match i64::try_from(self.small) {
                Ok(v) => BigRat::Small(v),
                Err(_) => BigRat::from_bigint(BigInt::from(self.small)),
            },
            Some(b) => BigRat::from_bigint(b + self.small),
        }
    }
}

fn mul_hashed(a: &[(Monomial, BigRat)], b: &[(Monomial, BigRat)]) -> Vec<(Monomial, BigRat)> {
    let cap = (a.len().saturating_mul(b.len())).min(1 << 20);
    let mut terms: Vec<(Monomial, BigRat)> = if let (Some(ia), Some(ib)) = (int_coeffs(a), int_coeffs(b)) {
        let mut acc: FxHashMap<Monomial, IntAcc> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
        for ((ma, _), xa) in a.iter().zip(&ia) {
            for ((mb, _), xb) in b.iter().zip(&ib) {
                acc.entry(ma.mul(mb)).or_default().add_mul(xa, xb);
            }
        }
        acc.into_iter().map(|(m, c)| (m, c.finish())).filter(|(_, c)| !c.is_zero()).collect()
    } else {
        let mut acc: FxHashMap<Monomial, BigRat> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
        for (ma, ca) in a {
            for (mb, cb) in b {
                acc.entry(ma.mul(mb)).or_default().add_mul(ca, cb);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    };
    terms.sort_unstable_by_key(|x| x.0);
    terms
}

// Operator sugar. Mixing rings through these panics; use the `try_*` forms
// when the rings are not known to agree.

impl<'a> Add<&'a MultiLaurentPoly> for &'a MultiLaurentPoly {
    type Output = MultiLaurentPoly;
    fn add(self, rhs: &MultiLaurentPoly) -> MultiLaurentPoly {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a MultiLaurentPoly> for &'a MultiLaurentPoly {
    type Output = MultiLaurentPoly;
    fn sub(self, rhs: &MultiLaurentPoly) -> MultiLaurentPoly {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a MultiLaurentPoly> for &'a MultiLaurentPoly {
    type Output = MultiLaurentPoly;
    fn mul(self, rhs: &MultiLaurentPoly) -> MultiLaurentPoly {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiLaurentPoly> for MultiLaurentPoly {
            type Output = MultiLaurentPoly;
            fn $m(self, rhs: MultiLaurentPoly) -> MultiLaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiLaurentPoly> for MultiLaurentPoly {
            type Output = MultiLaurentPoly;
            fn $m(self, rhs: &MultiLaurentPoly) -> MultiLaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for &MultiLaurentPoly {
    type Output = MultiLaurentPoly;
    fn neg(self) -> MultiLaurentPoly {
        self.scale(&BigRat::Small(-1))
    }
}

impl Neg for MultiLaurentPoly {
    type Output = MultiLaurentPoly;
    fn neg(self) -> MultiLaurentPoly {
        -&self
    }
}
