//! Case registry, parameter grids, manifests and the ordered runner.

use std::collections::BTreeMap;
use std::fmt;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::congruence::{
    verify_divisibility_fact, verify_minus_q_pochhammer, verify_qidentity, verify_thm2, MAX_PRIME,
};
use crate::delannoy::{product_expansion, verify_delannoy};
use crate::error::{QckError, Result};
use crate::exactalg::{ParamExpr, TermLimitExceeded, Var, MAX_XI};
use crate::hyperg::{phi_sum_frac, Lower, PhiSpec};
use crate::identities::*;
use crate::par::{map_ordered, Execution};
use crate::positivity::{
    lemma41_generic, verify_alternating_sum, verify_schmidt, verify_thm3, verify_xk_expansion, Thm3Claim,
};
use crate::qkit::{check_qbinomial_theorem, check_qchu_vandermonde};
use crate::report::{Checker, VerificationReport};

pub const CAP_N: i64 = 10;
pub const CAP_P: u64 = 13;
pub const CAP_R: u32 = 3;
pub const DEFAULT_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
/// Spot checks appended per seed.
pub const SPOT_CHECKS: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    All,
    Clausen,
    Lemmas,
    Transforms,
    Delannoy,
    Congruence,
    Positivity,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 7] = [
        SuiteKind::All,
        SuiteKind::Clausen,
        SuiteKind::Lemmas,
        SuiteKind::Transforms,
        SuiteKind::Delannoy,
        SuiteKind::Congruence,
        SuiteKind::Positivity,
    ];

    fn parts(self) -> &'static [SuiteKind] {
        match self {
            SuiteKind::All => &Self::ALL[1..],
            SuiteKind::Clausen => &[SuiteKind::Clausen],
            SuiteKind::Lemmas => &[SuiteKind::Lemmas],
            SuiteKind::Transforms => &[SuiteKind::Transforms],
            SuiteKind::Delannoy => &[SuiteKind::Delannoy],
            SuiteKind::Congruence => &[SuiteKind::Congruence],
            SuiteKind::Positivity => &[SuiteKind::Positivity],
        }
    }

    fn default_nmax(self) -> i64 {
        match self {
            SuiteKind::Delannoy | SuiteKind::Transforms => 8,
            _ => 6,
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteKind::All => "all",
            SuiteKind::Clausen => "clausen",
            SuiteKind::Lemmas => "lemmas",
            SuiteKind::Transforms => "transforms",
            SuiteKind::Delannoy => "delannoy",
            SuiteKind::Congruence => "congruence",
            SuiteKind::Positivity => "positivity",
        };
        f.write_str(s)
    }
}

impl FromStr for SuiteKind {
    type Err = QckError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| QckError::Config(format!("unknown suite `{s}`")))
    }
}

/// Grid limits. Unset fields take per-suite defaults: `nmax` is 8 for
/// delannoy and transforms and 6 elsewhere, `mmax` is `3p` for congruence
/// and `nmax` elsewhere, `rmax` is 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub nmax: Option<i64>,
    pub mmax: Option<i64>,
    pub primes: Option<Vec<u64>>,
    pub rmax: Option<u32>,
}

impl Bounds {
    /// Reject limits beyond the hard caps unless `unsafe_bounds` is set.
    pub fn validate(&self, unsafe_bounds: bool) -> Result<()> {
        let bad = |what: String| Err(QckError::Config(format!("{what}; pass --unsafe-bounds to override")));
        for (name, v) in [("nmax", self.nmax), ("mmax", self.mmax)] {
            match v {
                Some(v) if v < 0 => return Err(QckError::Config(format!("{name} must be non-negative, got {v}"))),
                Some(v) if !unsafe_bounds && v > self.cap_for(name) => {
                    return bad(format!("{name}={v} exceeds the cap {}", self.cap_for(name)))
                }
                _ => {}
            }
        }
        for &p in self.primes.iter().flatten() {
            if p > MAX_PRIME || !crate::congruence::is_odd_prime(p) {
                return Err(QckError::NotOddPrime(p));
            }
            if !unsafe_bounds && p > CAP_P {
                return bad(format!("p={p} exceeds the cap {CAP_P}"));
            }
        }
        match self.rmax {
            Some(0) => Err(QckError::Config("rmax must be at least 1".into())),
            Some(r) if !unsafe_bounds && r > CAP_R => bad(format!("rmax={r} exceeds the cap {CAP_R}")),
            _ => Ok(()),
        }
    }

    fn cap_for(&self, name: &str) -> i64 {
        match name {
            "mmax" => 3 * CAP_P as i64,
            _ => CAP_N,
        }
    }

    fn nmax(&self, kind: SuiteKind) -> i64 {
        self.nmax.unwrap_or(kind.default_nmax())
    }

    fn mmax(&self, kind: SuiteKind) -> i64 {
        self.mmax.unwrap_or(self.nmax(kind))
    }

    fn rmax(&self) -> u32 {
        self.rmax.unwrap_or(2)
    }

    fn primes(&self) -> Vec<u64> {
        self.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: SuiteKind,
    pub bounds: Bounds,
    pub execution: Execution,
    pub seed: Option<u64>,
    pub unsafe_bounds: bool,
}

impl SuiteConfig {
    pub fn new(suite: SuiteKind) -> Self {
        SuiteConfig {
            suite,
            bounds: Bounds::default(),
            execution: Execution::Sequential,
            seed: None,
            unsafe_bounds: false,
        }
    }

    /// The cases of the selected suite in canonical order.
    pub fn cases(&self) -> Result<Vec<CaseSpec>> {
        self.bounds.validate(self.unsafe_bounds)?;
        let mut out = Vec::new();
        for &kind in self.suite.parts() {
            grid(kind, &self.bounds, &mut out);
            if kind == SuiteKind::Transforms {
                if let Some(seed) = self.seed {
                    for index in 0..SPOT_CHECKS {
                        out.push(CaseSpec::new("phi_permutation", &[("seed", seed as i64), ("index", index)]));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One entry of a manifest: a registered case name with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    #[serde(default)]
    pub free_vars: Vec<Var>,
}

impl CaseSpec {
    pub fn new(name: &str, params: &[(&str, i64)]) -> Self {
        let free_vars = lookup(name).map(|e| e.free_vars.to_vec()).unwrap_or_default();
        CaseSpec { name: name.into(), params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(), free_vars }
    }

    fn get(&self, key: &str) -> i64 {
        self.params[key]
    }

    /// Check the name, parameter names and declared free variables against
    /// the registry.
    pub fn validate(&self) -> Result<()> {
        let entry = lookup(&self.name).ok_or_else(|| QckError::Config(format!("unknown case `{}`", self.name)))?;
        let mut want: Vec<&str> = entry.params.to_vec();
        want.sort_unstable();
        let have: Vec<&str> = self.params.keys().map(String::as_str).collect();
        if want != have {
            return Err(QckError::Config(format!(
                "case `{}` takes parameters {:?}, got {:?}",
                self.name, entry.params, have
            )));
        }
        if !self.free_vars.is_empty() && self.free_vars != entry.free_vars {
            return Err(QckError::Config(format!(
                "case `{}` is symbolic in {:?}, manifest declares {:?}",
                self.name, entry.free_vars, self.free_vars
            )));
        }
        Ok(())
    }
}

pub fn parse_manifest(text: &str) -> Result<Vec<CaseSpec>> {
    let cases: Vec<CaseSpec> = serde_json::from_str(text)
        .map_err(|e| QckError::Parse { offset: 0, message: format!("line {} column {}: {e}", e.line(), e.column()) })?;
    for c in &cases {
        c.validate()?;
    }
    Ok(cases)
}

type Runner = fn(&CaseSpec) -> Result<VerificationReport>;

pub struct Entry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub free_vars: &'static [Var],
    run: Runner,
}

macro_rules! entry {
    ($name:literal, [$($p:literal),*], [$($v:ident),*], $run:expr) => {
        Entry { name: $name, params: &[$($p),*], free_vars: &[$(Var::$v),*], run: $run }
    };
}

fn p_of(c: &CaseSpec) -> Result<u64> {
    u64::try_from(c.get("p")).map_err(|_| QckError::NotOddPrime(0))
}

fn r_of(c: &CaseSpec) -> Result<u32> {
    u32::try_from(c.get("r")).map_err(|_| QckError::InvalidParams(format!("need r >= 1, got {}", c.get("r"))))
}

fn order(c: &CaseSpec, key: &str) -> Result<i64> {
    let v = c.get(key);
    if v < 0 {
        return Err(QckError::InvalidParams(format!("need {key} >= 0, got {v}")));
    }
    Ok(v)
}

pub static REGISTRY: &[Entry] = &[
    entry!("clausen_orr", ["n"], [A, X, C], |c| Ok(verify_clausen_orr(order(c, "n")?))),
    entry!("clausen_orr_radical", ["n"], [A, X, D], |c| Ok(verify_clausen_orr_radical(order(c, "n")?))),
    entry!("final_square", ["n"], [A, X], |c| Ok(verify_final_square(order(c, "n")?))),
    entry!("sqrt_corollary", ["m"], [A, X], |c| Ok(verify_sqrt_corollary(order(c, "m")?))),
    entry!("general_s", ["n", "s"], [A, X], |c| verify_general_s(c.get("n"), c.get("s"))),
    entry!("special3", ["n"], [X, C], |c| Ok(verify_special3(order(c, "n")?))),
    entry!("special3_shifted", ["n", "s"], [X], |c| verify_special3_shifted(c.get("n"), c.get("s"))),
    entry!("special1", ["n"], [X, C], |c| Ok(verify_special1(order(c, "n")?))),
    entry!("special222", ["n"], [X, Y, C], |c| Ok(verify_special222(order(c, "n")?))),
    entry!("special2", ["n"], [X, C], |c| Ok(verify_special2(order(c, "n")?))),
    entry!("qbinomial_theorem", ["n"], [X], |c| Ok(check_qbinomial_theorem(order(c, "n")?))),
    entry!("qchu_vandermonde", ["n"], [A, C], |c| Ok(check_qchu_vandermonde(order(c, "n")?))),
    entry!("phi_permutation", ["seed", "index"], [], |c| verify_phi_permutation(c.get("seed") as u64, c.get("index"))),
    entry!("lemma_last", ["n", "m", "h"], [X, C], |c| verify_lemma_last(c.get("n"), c.get("m"), c.get("h"))),
    entry!("lemma_am2", ["n", "m", "h"], [A, C], |c| verify_lemma_am2(c.get("n"), c.get("m"), c.get("h"))),
    entry!("lem_important2", ["n"], [A, X], |c| verify_lem_important2(c.get("n"))),
    entry!("connection_coefficients", ["n", "m"], [A, C], |c| connection_coefficients(c.get("n"), c.get("m"))),
    entry!("delannoy", ["m", "n"], [], |c| Ok(verify_delannoy(order(c, "m")?, order(c, "n")?))),
    entry!("delannoy_product", ["m", "n"], [], |c| Ok(product_expansion(order(c, "m")?, order(c, "n")?))),
    entry!("minus_q_pochhammer", ["p"], [], |c| verify_minus_q_pochhammer(p_of(c)?)),
    entry!("qidentity", ["n", "j"], [], |c| verify_qidentity(c.get("n"), c.get("j"))),
    entry!("thm2", ["p", "m"], [], |c| verify_thm2(p_of(c)?, c.get("m"))),
    entry!("divisibility_fact", ["p", "m"], [], |c| verify_divisibility_fact(p_of(c)?, c.get("m"))),
    entry!("thm3_1", ["m", "n", "r"], [], |c| verify_thm3(Thm3Claim::First, c.get("m"), c.get("n"), r_of(c)?)),
    entry!("thm3_2", ["m", "n", "r"], [], |c| verify_thm3(Thm3Claim::Second, c.get("m"), c.get("n"), r_of(c)?)),
    entry!("thm3_3", ["m", "n", "r"], [], |c| verify_thm3(Thm3Claim::Third, c.get("m"), c.get("n"), r_of(c)?)),
    entry!("schmidt", ["k", "i", "j"], [], |c| verify_schmidt(c.get("k"), c.get("i"), c.get("j"))),
    entry!("xk_expansion", ["m", "n"], [], |c| verify_xk_expansion(c.get("m"), c.get("n"))),
    entry!("alternating_sum", ["n", "s"], [], |c| verify_alternating_sum(c.get("n"), c.get("s"))),
    entry!("lemma41", ["n", "r"], [], |c| lemma41_generic(c.get("n"), r_of(c)?)),
];

pub fn lookup(name: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.name == name)
}

fn push(out: &mut Vec<CaseSpec>, name: &str, params: &[(&str, i64)]) {
    out.push(CaseSpec::new(name, params));
}

fn grid(kind: SuiteKind, b: &Bounds, out: &mut Vec<CaseSpec>) {
    let n_max = b.nmax(kind);
    match kind {
        SuiteKind::All => {}
        SuiteKind::Clausen => {
            for n in 0..=n_max {
                push(out, "clausen_orr", &[("n", n)]);
                push(out, "clausen_orr_radical", &[("n", n)]);
                push(out, "final_square", &[("n", n)]);
            }
            for m in 0..=n_max / 2 {
                push(out, "sqrt_corollary", &[("m", m)]);
            }
            for n in 0..=n_max {
                for s in 0..=n {
                    push(out, "general_s", &[("n", n), ("s", s)]);
                }
            }
        }
        SuiteKind::Transforms => {
            for n in 0..=n_max {
                for name in ["special3", "special1", "special222", "special2", "qbinomial_theorem", "qchu_vandermonde"]
                {
                    push(out, name, &[("n", n)]);
                }
                for s in 0..=n {
                    push(out, "special3_shifted", &[("n", n), ("s", s)]);
                }
            }
        }
        SuiteKind::Lemmas => {
            for n in 1..=n_max {
                for m in 0..n {
                    for h in 1..=n - m {
                        push(out, "lemma_last", &[("n", n), ("m", m), ("h", h)]);
                        push(out, "lemma_am2", &[("n", n), ("m", m), ("h", h)]);
                    }
                }
                push(out, "lem_important2", &[("n", n)]);
            }
            for n in 0..=n_max {
                for m in 0..=n {
                    push(out, "connection_coefficients", &[("n", n), ("m", m)]);
                }
            }
        }
        SuiteKind::Delannoy => {
            let m_max = b.mmax(kind);
            for m in 0..=m_max {
                for n in 0..=n_max {
                    push(out, "delannoy", &[("m", m), ("n", n)]);
                    push(out, "delannoy_product", &[("m", m), ("n", n)]);
                }
            }
        }
        SuiteKind::Congruence => {
            for p in b.primes() {
                let p64 = p as i64;
                push(out, "minus_q_pochhammer", &[("p", p64)]);
                for m in 1..=b.mmax.unwrap_or(3 * p64) {
                    push(out, "thm2", &[("p", p64), ("m", m)]);
                    push(out, "divisibility_fact", &[("p", p64), ("m", m)]);
                }
            }
            for n in 1..=n_max {
                for j in 0..n {
                    push(out, "qidentity", &[("n", n), ("j", j)]);
                }
            }
        }
        SuiteKind::Positivity => {
            let m_max = b.mmax(kind);
            for r in 1..=b.rmax() as i64 {
                for m in 1..=m_max {
                    for n in 1..=n_max {
                        for name in ["thm3_1", "thm3_2", "thm3_3"] {
                            push(out, name, &[("m", m), ("n", n), ("r", r)]);
                        }
                    }
                }
            }
            for k in 0..=n_max {
                for i in 0..=k {
                    for j in 0..=k {
                        push(out, "schmidt", &[("k", k), ("i", i), ("j", j)]);
                    }
                }
            }
            for m in 1..=m_max {
                for n in 1..=n_max {
                    push(out, "xk_expansion", &[("m", m), ("n", n)]);
                }
            }
            for n in 1..=n_max {
                for s in 0..n {
                    push(out, "alternating_sum", &[("n", n), ("s", s)]);
                }
            }
            for n in 1..=n_max.min(MAX_XI as i64 + 1) {
                for r in 1..=b.rmax() as i64 {
                    push(out, "lemma41", &[("n", n), ("r", r)]);
                }
            }
        }
    }
}

fn is_usage_error(e: &QckError) -> bool {
    matches!(
        e,
        QckError::InvalidParams(_) | QckError::NotOddPrime(_) | QckError::Config(_) | QckError::TermLimit { .. }
    )
}

/// Run `f`, turning a product that exceeds the term limit into
/// [`QckError::TermLimit`]. Other panics propagate.
pub fn catch_term_limit<T>(f: impl FnOnce() -> Result<T>) -> Result<T> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(payload) => match payload.downcast::<TermLimitExceeded>() {
            Ok(t) => Err(QckError::TermLimit { terms: t.terms, limit: t.limit }),
            Err(other) => resume_unwind(other),
        },
    }
}

/// Run one case. Usage errors and the term limit are returned as errors;
/// any other error becomes a failed report.
pub fn run_case(case: &CaseSpec) -> Result<VerificationReport> {
    case.validate()?;
    let entry = lookup(&case.name).expect("validated");
    match catch_term_limit(|| (entry.run)(case)) {
        Ok(r) => Ok(r),
        Err(e) if is_usage_error(&e) => Err(e),
        Err(e) => {
            let params: Vec<(&str, i64)> = case.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            let mut ck = Checker::new(&case.name, &params, entry.free_vars);
            ck.error("evaluation", &e);
            Ok(ck.finish())
        }
    }
}

/// Run `cases` under `exec`; reports come back in input order. The first
/// error in that order aborts the run.
pub fn run_cases(cases: &[CaseSpec], exec: Execution) -> Result<Vec<VerificationReport>> {
    for c in cases {
        c.validate()?;
    }
    map_ordered(exec, cases, run_case).into_iter().collect()
}

pub fn run_suite(config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    run_cases(&config.cases()?, config.execution)
}

const SAMPLE_VARS: [Var; 4] = [Var::A, Var::C, Var::X, Var::Y];

fn sample_param(rng: &mut ChaCha8Rng) -> ParamExpr {
    let v = SAMPLE_VARS[rng.gen_range(0..SAMPLE_VARS.len())];
    let p = ParamExpr::var(v).times_q(rng.gen_range(-2..=2));
    if rng.gen_bool(0.25) {
        p.neg()
    } else {
        p
    }
}

/// A small terminating series drawn from `(seed, index)`.
pub fn sample_phi(seed: u64, index: i64) -> PhiSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let n = rng.gen_range(0..=3);
    let r = rng.gen_range(1..=3);
    let mut upper = vec![ParamExpr::q_pow(-n)];
    upper.extend((0..r).map(|_| sample_param(&mut rng)));
    let s = rng.gen_range(0..=r);
    let lower =
        (0..s).map(|_| if rng.gen_bool(0.2) { Lower::Zero } else { Lower::Mono(sample_param(&mut rng)) }).collect();
    let argument = if rng.gen_bool(0.5) { ParamExpr::var(Var::Q) } else { sample_param(&mut rng) };
    PhiSpec::new(upper, lower, argument).expect("q^-n is upper")
}

/// The sampled series against a shuffled copy of its parameter lists.
pub fn verify_phi_permutation(seed: u64, index: i64) -> Result<VerificationReport> {
    if index < 0 {
        return Err(QckError::InvalidParams(format!("need index >= 0, got {index}")));
    }
    let spec = sample_phi(seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    rng.set_stream(index as u64);
    let mut upper = spec.upper().to_vec();
    let mut lower = spec.lower().to_vec();
    upper.shuffle(&mut rng);
    lower.shuffle(&mut rng);
    let shuffled = PhiSpec::new(upper, lower, spec.argument().clone())?;
    let vars: Vec<Var> = spec.ring().vars().filter(|&v| v != Var::Q).collect();
    let mut ck = Checker::new("phi_permutation", &[("seed", seed as i64), ("index", index)], &vars);
    ck.note(format!("{spec} vs {shuffled}"));
    let diff = phi_sum_frac(&spec).and_then(|a| phi_sum_frac(&shuffled).and_then(|b| a.difference(&b)));
    if let Some(d) = ck.require("sum both orders", diff) {
        ck.zero("order independence", &d);
    }
    Ok(ck.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for k in SuiteKind::ALL {
            assert_eq!(k.to_string().parse::<SuiteKind>().unwrap(), k);
        }
        assert!("nope".parse::<SuiteKind>().is_err());
    }

    #[test]
    fn caps_enforced() {
        let mut b = Bounds { nmax: Some(11), ..Bounds::default() };
        assert!(b.validate(false).is_err());
        assert!(b.validate(true).is_ok());
        b.nmax = None;
        b.primes = Some(vec![17]);
        assert!(b.validate(false).is_err());
        b.primes = Some(vec![9]);
        assert!(matches!(b.validate(true), Err(QckError::NotOddPrime(9))));
        b.primes = None;
        b.rmax = Some(4);
        assert!(b.validate(false).is_err());
    }

    #[test]
    fn every_grid_case_is_registered() {
        let cfg = SuiteConfig { seed: Some(1), ..SuiteConfig::new(SuiteKind::All) };
        let cases = cfg.cases().unwrap();
        for c in &cases {
            c.validate().unwrap();
        }
        for e in REGISTRY {
            assert!(cases.iter().any(|c| c.name == e.name), "{} not in any grid", e.name);
        }
    }

    #[test]
    fn manifest_round_trip_and_errors() {
        let cases = vec![CaseSpec::new("clausen_orr", &[("n", 2)]), CaseSpec::new("thm2", &[("p", 3), ("m", 4)])];
        let text = serde_json::to_string(&cases).unwrap();
        assert_eq!(parse_manifest(&text).unwrap(), cases);
        assert!(parse_manifest(r#"[{"name": "clausen_orr", "params": {"k": 1}}]"#).is_err());
        assert!(parse_manifest(r#"[{"name": "clausen_orr", "params": {"n": 1}, "free_vars": ["x"]}]"#).is_err());
        assert!(parse_manifest(r#"[{"name": "nope", "params": {}}]"#).is_err());
        assert!(matches!(parse_manifest("[{"), Err(QckError::Parse { .. })));
    }

    #[test]
    fn usage_errors_surface() {
        assert!(run_case(&CaseSpec::new("thm2", &[("p", 9), ("m", 1)])).is_err());
        assert!(run_case(&CaseSpec::new("general_s", &[("n", 1), ("s", 2)])).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = SuiteConfig {
            bounds: Bounds { nmax: Some(3), ..Bounds::default() },
            ..SuiteConfig::new(SuiteKind::Lemmas)
        };
        let strip = |v: Vec<VerificationReport>| -> Vec<(String, bool, String)> {
            v.into_iter().map(|r| (r.case.to_string(), r.passed, r.difference)).collect()
        };
        let seq = strip(run_suite(&cfg).unwrap());
        let par = strip(run_suite(&SuiteConfig { execution: Execution::Parallel, ..cfg }).unwrap());
        assert_eq!(seq, par);
        assert!(seq.iter().all(|r| r.1));
    }

    #[test]
    fn term_limit_is_an_error() {
        let prev = crate::exactalg::max_terms();
        crate::exactalg::set_max_terms(50);
        let r = run_case(&CaseSpec::new("clausen_orr", &[("n", 3)]));
        crate::exactalg::set_max_terms(prev);
        assert!(matches!(r, Err(QckError::TermLimit { limit: 50, .. })), "{r:?}");
    }

    #[test]
    fn spot_checks_are_seeded() {
        assert_eq!(sample_phi(7, 3), sample_phi(7, 3));
        for i in 0..SPOT_CHECKS {
            let r = verify_phi_permutation(42, i).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn congruence_grid_matches_flags() {
        let cfg = SuiteConfig {
            bounds: Bounds { primes: Some(vec![3]), mmax: Some(9), ..Bounds::default() },
            ..SuiteConfig::new(SuiteKind::Congruence)
        };
        let cases = cfg.cases().unwrap();
        assert_eq!(cases.iter().filter(|c| c.name == "thm2").count(), 9);
    }
}
