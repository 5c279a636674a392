//! Sparse multivariate polynomials over ℤ and ℤ_p.

mod json;
mod monomial;
mod order;
mod polynomial;
mod text;

pub use json::{DecInt, PolyJson, TermJson};
pub use monomial::{var_name, Monomial};
pub use order::{MonomialOrder, OrderKind};
pub use polynomial::Polynomial;
pub(crate) use polynomial::bigint_to_f64;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ring mismatch: {0}")]
    Arity(String),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
}
