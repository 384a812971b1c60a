//! Exact verification of terminating basic hypergeometric identities,
//! q-Delannoy numbers and their congruence and positivity properties.

pub mod congruence;
pub mod delannoy;
pub mod error;
pub mod exactalg;
pub mod hyperg;
pub mod identities;
pub mod par;
pub mod positivity;
pub mod qkit;
pub mod report;
pub mod suite;

pub use error::{QckError, Result};
pub use report::{Checker, IdentityCase, VerificationReport};
