//! Multivariate ideal lattices over the integers.

pub mod cyclic;
pub mod groebner;
pub mod hardness;
pub mod hashfam;
pub mod lattice;
pub mod poly;
pub mod quotient;

/// Coarse classification of every error in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid input or a mathematical precondition that does not hold.
    Domain,
    /// A search or computation budget was exhausted.
    Resource,
}

pub trait HasKind {
    fn kind(&self) -> ErrorKind;
}
