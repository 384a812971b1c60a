//! Verification outcomes.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::QckError;
use crate::exactalg::{BigRat, MultiLaurentPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub name: String,
    pub meta_params: BTreeMap<String, i64>,
    pub free_vars: Vec<Var>,
}

impl IdentityCase {
    pub fn new(name: &str, params: &[(&str, i64)], free_vars: &[Var]) -> Self {
        IdentityCase {
            name: name.to_string(),
            meta_params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            free_vars: free_vars.to_vec(),
        }
    }
}

impl fmt::Display for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        let params: Vec<String> = self.meta_params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if !params.is_empty() {
            write!(f, "({})", params.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of one check. `difference` is the canonical text of the first
/// nonzero witness, and `"0"` exactly when the check passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub passed: bool,
    pub difference: String,
    pub elapsed: Duration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

thread_local! {
    static CORRUPT: Cell<bool> = const { Cell::new(false) };
}

/// Run `f` with fault injection on the current thread: the first zero test of
/// every [`Checker`] created inside sees its difference shifted by 1.
pub fn with_fault_injection<T>(enabled: bool, f: impl FnOnce() -> T) -> T {
    let prev = CORRUPT.with(|c| c.replace(enabled));
    let out = f();
    CORRUPT.with(|c| c.set(prev));
    out
}

pub fn fault_injection_enabled() -> bool {
    CORRUPT.with(|c| c.get())
}

/// Accumulates the sub-checks of one case into a report.
pub struct Checker {
    case: IdentityCase,
    start: Instant,
    corrupt: bool,
    failure: Option<(String, String)>,
    notes: Vec<String>,
}

impl Checker {
    pub fn new(name: &str, params: &[(&str, i64)], free_vars: &[Var]) -> Self {
        Checker {
            case: IdentityCase::new(name, params, free_vars),
            start: Instant::now(),
            corrupt: CORRUPT.with(|c| c.get()),
            failure: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Record that `diff` must be the zero polynomial.
    pub fn zero(&mut self, label: &str, diff: &MultiLaurentPoly) {
        let diff = if std::mem::take(&mut self.corrupt) {
            diff + &MultiLaurentPoly::constant(BigRat::ONE, diff.ring())
        } else {
            diff.clone()
        };
        if !diff.is_zero() {
            self.record(label, diff.to_string());
        }
    }

    pub fn equal(&mut self, label: &str, lhs: &MultiLaurentPoly, rhs: &MultiLaurentPoly) {
        match lhs.try_sub(rhs) {
            Ok(d) => self.zero(label, &d),
            Err(e) => self.error(label, &e),
        }
    }

    /// Record a boolean claim; `witness` describes the counterexample.
    pub fn holds(&mut self, label: &str, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.record(label, witness());
        }
    }

    /// A computation step that was expected to succeed did not.
    pub fn error(&mut self, label: &str, err: &QckError) {
        self.record(label, err.to_string());
    }

    /// Unwrap a step's result, recording the error on failure.
    pub fn require<T>(&mut self, label: &str, r: Result<T, QckError>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(label, &e);
                None
            }
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn record(&mut self, label: &str, witness: String) {
        if self.failure.is_none() {
            self.failure = Some((label.to_string(), witness));
        }
    }

    pub fn finish(mut self) -> VerificationReport {
        let (passed, difference) = match self.failure.take() {
            None => (true, "0".to_string()),
            Some((label, w)) => {
                self.notes.insert(0, format!("failed: {label}"));
                (false, w)
            }
        };
        VerificationReport {
            case: self.case,
            passed,
            difference,
            elapsed: self.start.elapsed(),
            note: (!self.notes.is_empty()).then(|| self.notes.join("; ")),
        }
    }
}
