//! Exact computations around signed Latin rectangles and the determinant
//! orbit closure.
//!
//! * [`latin`] enumerates Latin rectangles with per-pattern column-sign
//!   tallies and checks the projection and concatenation lemmas.
//! * [`tensor`] holds sparse rational tensors, Young symmetrizers and the
//!   pairings that relate them to the tallies.
//! * [`gamma`] evaluates the determinant-power invariant on homogeneous
//!   polynomials.
//! * [`orbit`] builds restrictions of the determinant and permanent and
//!   searches for points where the invariant does not vanish.
//! * [`kronecker`] computes symmetric-group characters and (symmetric)
//!   Kronecker coefficients.
//!
//! All arithmetic is exact.

pub mod error;
pub mod gamma;
pub mod kronecker;
pub mod latin;
pub mod matrix;
pub mod orbit;
pub mod perm;
pub mod poly;
pub mod rational;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use rational::Rational;
