use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::QckError;

/// Number of variable slots in an exponent vector.
pub const NVARS: usize = 16;

const NAMED: [&str; 7] = ["q", "a", "c", "x", "y", "d", "t"];

/// First slot of the indexed family `x0, x1, ...`.
const XI_BASE: usize = NAMED.len();

/// Largest supported index `i` for `x_i`.
pub const MAX_XI: usize = NVARS - XI_BASE - 1;

/// An indeterminate from the fixed alphabet `q, a, c, x, y, d, t, x0..x8`.
///
/// The derived order is the fixed variable order used for printing.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Var(u8);

impl Var {
    pub const Q: Var = Var(0);
    pub const A: Var = Var(1);
    pub const C: Var = Var(2);
    pub const X: Var = Var(3);
    pub const Y: Var = Var(4);
    pub const D: Var = Var(5);
    /// Square root of the base, used where half-integer powers of `q` occur.
    pub const T: Var = Var(6);

    /// The indexed variable `x_i`.
    pub fn xi(i: usize) -> Var {
        assert!(i <= MAX_XI, "x{i} exceeds the supported alphabet (x0..x{MAX_XI})");
        Var((XI_BASE + i) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Var {
        assert!(i < NVARS);
        Var(i as u8)
    }

    pub fn name(self) -> String {
        let i = self.index();
        if i < XI_BASE {
            NAMED[i].to_string()
        } else {
            format!("x{}", i - XI_BASE)
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        if let Some(i) = NAMED.iter().position(|n| *n == name) {
            return Some(Var(i as u8));
        }
        let digits = name.strip_prefix('x')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let i: usize = digits.parse().ok()?;
        (i <= MAX_XI).then(|| Var::xi(i))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl TryFrom<String> for Var {
    type Error = QckError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Var::parse(&s).ok_or_else(|| QckError::Config(format!("unknown variable `{s}`")))
    }
}

impl From<Var> for String {
    fn from(v: Var) -> String {
        v.name()
    }
}

/// The set of indeterminates a polynomial ring is built on. `q` is always present.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ring(u32);

impl Ring {
    pub fn new(vars: &[Var]) -> Ring {
        let mut bits = 1u32;
        for v in vars {
            bits |= 1 << v.index();
        }
        Ring(bits)
    }

    /// The ring `Q[q, q^-1]`.
    pub fn q_only() -> Ring {
        Ring(1)
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn union(self, other: Ring) -> Ring {
        Ring(self.0 | other.0)
    }

    pub fn is_subring_of(self, other: Ring) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, v: Var) -> Ring {
        Ring(self.0 | (1 << v.index()))
    }

    pub fn vars(self) -> impl Iterator<Item = Var> {
        (0..NVARS).filter(move |i| self.0 & (1 << i) != 0).map(Var::from_index)
    }

    /// Does every variable with a nonzero exponent in `m` belong to the ring?
    pub fn admits(self, m: &Monomial) -> bool {
        m.0.iter().enumerate().all(|(i, e)| *e == 0 || self.0 & (1 << i) != 0)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vars().map(|v| v.name()).collect();
        write!(f, "Q[{}]", names.join(","))
    }
}

/// A Laurent monomial: one signed exponent per variable slot.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// `q`, then `a`, and so on in the fixed variable order.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub(crate) [i16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var, e: i32) -> Monomial {
        let mut m = Monomial::ONE;
        m.0[v.index()] = to_exp(e);
        m
    }

    pub fn from_pairs(pairs: &[(Var, i32)]) -> Monomial {
        let mut m = Monomial::ONE;
        for (v, e) in pairs {
            m.0[v.index()] = to_exp(m.0[v.index()] as i32 + e);
        }
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()] as i32
    }

    pub fn set_exp(&mut self, v: Var, e: i32) {
        self.0[v.index()] = to_exp(e);
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|e| *e as i32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0i16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = [0i16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_sub(other.0[i]).expect("exponent overflow");
        }
        Monomial(out)
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut out = [0i16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = to_exp(self.0[i] as i32 * k);
        }
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut out = [0i16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].min(other.0[i]);
        }
        Monomial(out)
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|e| *e >= 0)
    }

    /// The variables carrying a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e != 0).map(|(i, e)| (Var::from_index(i), *e as i32))
    }

    /// If only one variable occurs, return it.
    pub fn single_var(&self) -> Option<Var> {
        let mut it = self.support();
        let first = it.next()?;
        it.next().is_none().then_some(first.0)
    }
}

fn to_exp(e: i32) -> i16 {
    i16::try_from(e).expect("exponent out of range")
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.support() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for i in 0..NVARS {
            let v = Var::from_index(i);
            assert_eq!(Var::parse(&v.name()), Some(v));
        }
        assert_eq!(Var::parse("x9"), None);
        assert_eq!(Var::parse("z"), None);
    }

    #[test]
    fn graded_order() {
        let one = Monomial::ONE;
        let q = Monomial::var(Var::Q, 1);
        let a = Monomial::var(Var::A, 1);
        let qinv = Monomial::var(Var::Q, -1);
        assert!(qinv < one);
        assert!(one < a);
        assert!(a < q);
        assert!(q < Monomial::var(Var::A, 2));
    }

    #[test]
    fn shift_preserves_order() {
        let ms = [
            Monomial::from_pairs(&[(Var::Q, 2), (Var::A, -1)]),
            Monomial::from_pairs(&[(Var::X, 3)]),
            Monomial::from_pairs(&[(Var::Q, -1), (Var::C, 2)]),
        ];
        let s = Monomial::from_pairs(&[(Var::Q, 5), (Var::X, -2)]);
        for a in &ms {
            for b in &ms {
                assert_eq!(a.cmp(b), a.mul(&s).cmp(&b.mul(&s)));
            }
        }
    }

    #[test]
    fn ring_membership() {
        let r = Ring::new(&[Var::A, Var::X]);
        assert!(r.contains(Var::Q));
        assert!(r.contains(Var::A));
        assert!(!r.contains(Var::C));
        assert!(Ring::q_only().is_subring_of(r));
        assert!(!r.admits(&Monomial::var(Var::C, 1)));
    }
}
