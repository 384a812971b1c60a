//! Terminating basic hypergeometric series.
//!
//! Text form: `phi[r,s]{a1, ..., ar ; b1, ..., bs ; z}` with base `q`, e.g.
//! `phi[3,2]{q^-2, a, x ; c, 0 ; q}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{QckError, Result};
use crate::exactalg::{exact_divide, BigRat, Monomial, MultiLaurentPoly, ParamExpr, Ring, Var};
use crate::qkit::{poch, Factored, Frac, Term};

/// A lower parameter: either a monomial or the literal `0`, whose
/// Pochhammer symbol is identically 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Lower {
    Zero,
    Mono(ParamExpr),
}

impl fmt::Display for Lower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lower::Zero => f.write_str("0"),
            Lower::Mono(p) => write!(f, "{p}"),
        }
    }
}

impl From<ParamExpr> for Lower {
    fn from(p: ParamExpr) -> Self {
        Lower::Mono(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiSpec {
    upper: Vec<ParamExpr>,
    lower: Vec<Lower>,
    argument: ParamExpr,
    termination: u32,
}

impl PhiSpec {
    /// Validates the parameters and finds the termination order: the least
    /// `n` with `q^-n` among the upper parameters.
    pub fn new(upper: Vec<ParamExpr>, lower: Vec<Lower>, argument: ParamExpr) -> Result<Self> {
        let Some(n) = upper.iter().filter_map(ParamExpr::termination_order).min() else {
            return Err(QckError::InvalidParams("no upper parameter of the form q^-n".into()));
        };
        for b in &lower {
            if let Lower::Mono(p) = b {
                if let Some(j) = p.termination_order() {
                    if j < n {
                        return Err(QckError::InvalidParams(format!(
                            "lower parameter {p} vanishes the denominator before order {n}"
                        )));
                    }
                }
            }
        }
        Ok(PhiSpec { upper, lower, argument, termination: n })
    }

    pub fn upper(&self) -> &[ParamExpr] {
        &self.upper
    }

    pub fn lower(&self) -> &[Lower] {
        &self.lower
    }

    pub fn argument(&self) -> &ParamExpr {
        &self.argument
    }

    pub fn termination(&self) -> u32 {
        self.termination
    }

    /// `q` together with every variable in the parameters.
    pub fn ring(&self) -> Ring {
        let mut vars = Vec::new();
        let lower = self.lower.iter().filter_map(|b| match b {
            Lower::Zero => None,
            Lower::Mono(p) => Some(p),
        });
        for p in self.upper.iter().chain(lower).chain(std::iter::once(&self.argument)) {
            vars.extend(p.mono().support().map(|(v, _)| v));
        }
        Ring::new(&vars)
    }
}

/// The `k`-th summand of a series in an arbitrary base, in factored form:
/// `prod (a;base)_k / ((base;base)_k prod (b;base)_k) * ((-1)^k base^C(k,2))^(1+s-r) * z^k`.
pub fn hyper_term(upper: &[ParamExpr], lower: &[Lower], base: &ParamExpr, z: &ParamExpr, k: u32) -> Result<Factored> {
    let k64 = k as i64;
    let mut f = Factored::one();
    for a in upper {
        f = f.mul(&poch(a, base, k64)?);
    }
    let mut den = poch(base, base, k64)?;
    for b in lower {
        if let Lower::Mono(p) = b {
            den = den.mul(&poch(p, base, k64)?);
        }
    }
    f = f.checked_div(&den)?;
    let e = 1 + lower.len() as i32 - upper.len() as i32;
    let sign = if (k as i32 * e) % 2 == 0 { 1 } else { -1 };
    let kk = (k as i32) * (k as i32 - 1) / 2;
    let weight = base.pow(kk * e).mul(&z.pow(k as i32));
    Ok(f.mul(&Factored::monomial(&weight)).scale(&BigRat::from(sign)))
}

fn q() -> ParamExpr {
    ParamExpr::var(Var::Q)
}

/// The exact `k`-th summand as a Laurent polynomial.
pub fn phi_term(spec: &PhiSpec, k: u32) -> Result<MultiLaurentPoly> {
    if k > spec.termination {
        return Err(QckError::InvalidParams(format!("term {k} beyond termination {}", spec.termination)));
    }
    let ring = spec.ring();
    let f = hyper_term(&spec.upper, &spec.lower, &q(), &spec.argument, k)?;
    if f.is_polynomial() {
        return f.expand(ring);
    }
    let (num, den) = f.split();
    exact_divide(&num.expand(ring)?, &den.expand(ring)?)?
        .ok_or_else(|| QckError::NotDivisible(format!("term {k} of {spec}")))
}

/// The terminating sum over its factored common denominator.
pub fn phi_sum_frac(spec: &PhiSpec) -> Result<Frac> {
    let terms = (0..=spec.termination)
        .map(|k| hyper_term(&spec.upper, &spec.lower, &q(), &spec.argument, k).map(Term::new))
        .collect::<Result<Vec<_>>>()?;
    Frac::sum(spec.ring(), &terms)
}

/// The terminating sum as a Laurent polynomial; `NotDivisible` when it is a
/// genuine rational function.
pub fn phi_sum(spec: &PhiSpec) -> Result<MultiLaurentPoly> {
    phi_sum_frac(spec)?.to_poly()?.ok_or_else(|| QckError::NotDivisible(format!("sum of {spec}")))
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let up: Vec<String> = self.upper.iter().map(ToString::to_string).collect();
        let lo: Vec<String> = self.lower.iter().map(ToString::to_string).collect();
        write!(f, "phi[{},{}]{{{} ; {} ; {}}}", up.len(), lo.len(), up.join(", "), lo.join(", "), self.argument)
    }
}

const PARAM_VARS: [Var; 6] = [Var::Q, Var::A, Var::C, Var::X, Var::Y, Var::D];

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(QckError::Parse { offset: self.pos, message: message.into() })
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn var(&mut self) -> Result<Var> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match Var::parse(name).filter(|v| PARAM_VARS.contains(v)) {
            Some(v) => Ok(v),
            None => {
                self.pos = start;
                self.err(format!("expected a variable in q, a, c, x, y, d, found `{name}`"))
            }
        }
    }

    fn factor(&mut self) -> Result<Monomial> {
        let v = self.var()?;
        let mut e = 1i64;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            if !neg {
                self.eat(b'+');
            }
            let start = self.pos;
            let m = self.uint()? as i64;
            if m > i16::MAX as i64 {
                self.pos = start;
                return self.err("exponent out of range");
            }
            e = if neg { -m } else { m };
        }
        Ok(Monomial::var(v, e as i32))
    }

    fn mono(&mut self) -> Result<ParamExpr> {
        let neg = self.eat(b'-');
        let mut coeff = BigRat::ONE;
        let mut mono = Monomial::ONE;
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let start = self.pos;
            let n = self.uint()?;
            let d = if self.eat(b'/') { self.uint()? } else { 1 };
            if d == 0 {
                self.pos = start;
                return self.err("zero denominator");
            }
            coeff = BigRat::from_ratio(num_rational::BigRational::new(n.into(), d.into()));
            if coeff.is_zero() {
                self.pos = start;
                return self.err("zero coefficient");
            }
            self.expect("*")?;
        }
        loop {
            mono = mono.mul(&self.factor()?);
            if !self.eat(b'*') {
                break;
            }
        }
        if neg {
            coeff = -coeff;
        }
        Ok(ParamExpr::new(coeff, mono))
    }

    /// A `;`- or `}`-terminated list; `zero_ok` admits the literal `0`.
    fn params(&mut self, zero_ok: bool) -> Result<Vec<(usize, Option<ParamExpr>)>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some(b';') | Some(b'}')) {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            if self.src.get(self.pos) == Some(&b'0')
                && !self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_digit() || *b == b'/')
            {
                if !zero_ok {
                    return self.err("the parameter 0 is only allowed in the lower list");
                }
                self.pos += 1;
                out.push((start, None));
            } else {
                out.push((start, Some(self.mono()?)));
            }
            if !self.eat(b',') {
                return Ok(out);
            }
        }
    }
}

/// Parse a series spec; syntax errors carry the byte offset.
pub fn parse_phi(text: &str) -> Result<PhiSpec> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.expect("phi")?;
    p.expect("[")?;
    let r = p.uint()? as usize;
    p.expect(",")?;
    let s = p.uint()? as usize;
    p.expect("]")?;
    p.expect("{")?;
    let upper_at = p.pos;
    let upper = p.params(false)?;
    p.expect(";")?;
    let lower_at = p.pos;
    let lower = p.params(true)?;
    p.expect(";")?;
    let argument = p.mono()?;
    p.expect("}")?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    if upper.len() != r {
        p.pos = upper_at;
        return p.err(format!("header declares {r} upper parameters, found {}", upper.len()));
    }
    if lower.len() != s {
        p.pos = lower_at;
        return p.err(format!("header declares {s} lower parameters, found {}", lower.len()));
    }
    let upper = upper.into_iter().map(|(_, m)| m.expect("upper parameters are monomials")).collect();
    let lower = lower.into_iter().map(|(_, m)| m.map_or(Lower::Zero, Lower::Mono)).collect();
    PhiSpec::new(upper, lower, argument)
}

impl FromStr for PhiSpec {
    type Err = QckError;
    fn from_str(s: &str) -> Result<Self> {
        parse_phi(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkit::qpoch;

    fn spec(s: &str) -> PhiSpec {
        parse_phi(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let s = spec("phi[3,2]{q^-2, a, x ; c, 0 ; q}");
        assert_eq!(s.termination(), 2);
        assert_eq!(s.upper(), &[ParamExpr::q_pow(-2), ParamExpr::var(Var::A), ParamExpr::var(Var::X)]);
        assert_eq!(s.lower(), &[Lower::Mono(ParamExpr::var(Var::C)), Lower::Zero]);
        assert_eq!(s.argument(), &ParamExpr::q_pow(1));
        assert_eq!(spec("phi[2,1]{a, q^-3 ; c ; q}").termination(), 3);
        assert!(matches!(
            parse_phi("phi[2,1]{a, b ; c ; q}"),
            Err(QckError::Parse { .. } | QckError::InvalidParams(_))
        ));
        assert!(matches!(parse_phi("phi[2,1]{a, y ; c ; q}"), Err(QckError::InvalidParams(_))));
    }

    #[test]
    fn syntax_errors_report_offsets() {
        let cases = [
            ("phi[2,1]{a, q^-3 ; c ; q", 24),
            ("phi[2,1]{a, q^-3 ; c q}", 21),
            ("phi[2,1]{a, z ; c ; q}", 12),
            ("phi[3,1]{a, q^-3 ; c ; q}", 9),
            ("phi[2,1]{0, q^-3 ; c ; q}", 9),
            ("psi[2,1]{a, q^-3 ; c ; q}", 0),
        ];
        for (text, at) in cases {
            match parse_phi(text) {
                Err(QckError::Parse { offset, .. }) => assert_eq!(offset, at, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn lower_guard() {
        assert!(parse_phi("phi[2,1]{a, q^-3 ; q^-1 ; q}").is_err());
        assert!(parse_phi("phi[2,1]{a, q^-3 ; q^0 ; q}").is_err());
        assert!(parse_phi("phi[2,1]{a, q^-1 ; q^-3 ; q}").is_ok());
    }

    #[test]
    fn term_examples() {
        let s = spec("phi[2,1]{a, q^-4 ; c ; q}");
        assert!(phi_term(&s, 0).unwrap().is_one());
        // 1phi1 sign factor at k = 2: ((-1)^2 q)^1.
        let s = spec("phi[1,1]{q^-3 ; 0 ; q}");
        let t2 = hyper_term(s.upper(), s.lower(), &ParamExpr::q_pow(1), &ParamExpr::one(), 2).unwrap();
        let poch_part = &qpoch(&ParamExpr::q_pow(-3), 2).unwrap() / &qpoch(&ParamExpr::q_pow(1), 2).unwrap();
        assert_eq!(t2, poch_part.mul(&Factored::var_pow(Var::Q, 1)));
        // A lower parameter c that does not cancel.
        let s = spec("phi[3,2]{q^-1, a, x ; c, 0 ; q}");
        assert!(matches!(phi_term(&s, 1), Err(QckError::NotDivisible(_))));
    }

    #[test]
    fn sums() {
        assert!(phi_sum(&spec("phi[2,1]{a, q^-0 ; c ; q}")).unwrap().is_one());
        // Upper parameter 1 kills every k >= 1 term.
        assert!(phi_sum(&spec("phi[2,1]{q^0, q^-3 ; c ; q}")).unwrap().is_one());
        let s = spec("phi[3,2]{q^-1, a, x ; c, 0 ; q}");
        let f = phi_sum_frac(&s).unwrap();
        let ring = s.ring();
        let num = MultiLaurentPoly::parse_in("a + x - a*x - c", ring).unwrap();
        assert!(f.difference(&Frac { num, den: qpoch(&ParamExpr::var(Var::C), 1).unwrap() }).unwrap().is_zero());
    }

    #[test]
    fn print_round_trip() {
        let corpus = [
            "phi[3,2]{q^-2, a, x ; c, 0 ; q}",
            "phi[2,1]{a, q^-3 ; c ; q}",
            "phi[2,1]{a, q^-0 ; c ; q}",
            "phi[1,0]{q^-4 ;  ; q}",
            "phi[3,2]{q^-4, a, x ; x^2, 0 ; q}",
            "phi[2,1]{q^-2, -1*q^0 ; c ; q^2}",
            "phi[3,2]{q^-5, 3/2*a, x ; c, 0 ; q}",
            "phi[3,2]{q^-3, a, c*x^-1 ; c, 0 ; q}",
            "phi[2,2]{q^-1, x*y ; c, d ; a*q}",
            "phi[4,3]{q^-2, c*q^2, a, c*a^-1 ; c, 0, 0 ; q}",
            "phi[1,1]{q^-3 ; 0 ; q}",
            "phi[2,1]{q^-6, -1*x ; x^2 ; q}",
            "phi[3,2]{q^-1, q^-4, a ; c^2, 0 ; q}",
            "phi[2,1]{a^-1, q^-2 ; c*a^-1 ; -1*q^2}",
            "phi[2,0]{q^-2, a ; ; x}",
            "phi[2,1]{7/3*q^0, q^-1 ; d ; q}",
            "phi[3,2]{q^-2, y, x ; c*q, 0 ; q}",
            "phi[2,1]{q^-3, a*c ; y^-1 ; q}",
            "phi[3,2]{q^-2, q^-2, x ; c, q^-5 ; q}",
            "phi[2,1]{x, q^-1 ; 0 ; 2*q^0}",
        ];
        for text in corpus {
            let s = parse_phi(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let printed = s.to_string();
            assert_eq!(parse_phi(&printed).unwrap(), s, "{printed}");
            assert_eq!(parse_phi(&printed).unwrap().to_string(), printed);
        }
    }
}
