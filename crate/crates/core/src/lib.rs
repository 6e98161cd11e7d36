//! Exact reconstruction and certification of the fourteen fine gradings of the
//! simple Lie algebra `o(8, C)`.
//!
//! Every scalar lives in the cyclotomic field `Q(ζ₁₂)` ([`field`]). Gradings are
//! produced by simultaneously diagonalizing commuting automorphisms ([`diag`]) and
//! certified by [`gradecheck`]: closure, type, universal group and refinement.

pub mod autos;
pub mod calibrate;
pub mod catalog;
pub mod diag;
pub mod error;
pub mod export;
pub mod field;
pub mod gradecheck;
pub mod liealg;
pub mod linalg;
pub mod pipeline;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{FieldElement, Rational};
