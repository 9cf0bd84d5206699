//! Exact orthogonal decompositions: positive-definite lattices, Hermitian lattices over orders
//! with positive involution, unity in involutive orders, and polarised integral Hodge
//! structures of complex-structure type.

pub mod algebra;
pub mod aut;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod hodge;
pub mod idempotent;
pub mod lattice;
pub mod linalg;
pub mod schema;

pub use error::{Error, Result};
