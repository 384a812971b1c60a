//! q-Pochhammer symbols, Gaussian binomials and factored q-products.

mod factored;
mod frac;
mod pochhammer;

pub use factored::{psi, Atom, Factored};
pub use frac::{Frac, Term};
pub use pochhammer::{
    check_qbinomial_theorem, check_qchu_vandermonde, poch, qbinomial, qbinomial_factored, qbinomial_in, qfactorial,
    qpoch, qpochhammer, QBracket,
};
