//! Exact multivariate Laurent polynomial arithmetic over the rationals.

mod division;
mod param;
mod poly;
mod rat;
mod text;
mod var;

pub use division::{divrem_in_q, exact_divide, integer_content};
pub use param::ParamExpr;
pub use poly::{max_terms, set_max_terms, Binding, Bindings, MultiLaurentPoly, TermLimitExceeded, DEFAULT_MAX_TERMS};
pub use rat::{BigRat, ParseRatError};
pub use var::{Monomial, Ring, Var, MAX_XI, NVARS};
