//! Algebraic primality certificates for knots.
//!
//! Given a knot diagram in PD notation (and optionally its two-variable
//! knot Floer polynomial), this crate tries to prove the knot is prime by
//! showing that every way of splitting its algebraic invariants across a
//! hypothetical connected-sum decomposition is impossible. The obstructions
//! come from branched cyclic cover homology, metacyclic representation
//! counts, and twisted homology ranks.

// indexed loops mirror the matrix notation throughout the linear algebra
#![allow(clippy::needless_range_loop)]
#![allow(clippy::type_complexity)]

pub mod abelian;
pub mod construct;
pub mod diagram;
pub mod error;
pub mod fields;
pub mod jones;
pub mod metacyclic;
pub mod pipeline;
pub mod poly;
pub mod twisted;

pub use error::Error;
