//! Numerical laboratory for posinormal operators.
//!
//! The crate decides, at explicit tolerances, whether finite matrices are
//! normal, hyponormal, posinormal, coposinormal or EP, constructs the
//! witness/interrupter certificates behind a posinormality verdict, and
//! probes closed-range behaviour of operator families through the decay of
//! their smallest nonzero singular values. Banded operators on one-sided
//! ℓ² (shifts, Toeplitz operators and their products) are carried exactly
//! as symbol diagonals plus a finite corner correction, so identities such
//! as `U*U = I` are checked without truncation error.
//!
//! Modules:
//! - [`numkernel`]: tolerance-aware rank/range/kernel/pseudoinverse/PSD
//!   primitives and subspace geometry;
//! - [`matop`]: constructors for structured matrices, random EP corpora
//!   and truncation families;
//! - [`qtop`]: exact algebra of banded, eventually-Toeplitz operators;
//! - [`classify`]: property checkers and certificate constructors;
//! - [`rangelab`]: sigma curves and closed-range diagnostics.

pub mod classify;
pub mod matop;
pub mod numkernel;
pub mod qtop;
pub mod rangelab;

use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;

/// Crate-wide error type.
///
/// The variants map onto the process exit codes of the command-line
/// front end: input and degenerate-input errors exit 2, internal
/// consistency failures exit 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The caller supplied malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),
    /// The input is valid but numerically degenerate for the operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A documented precondition does not hold; carries the measured defect.
    #[error("precondition violated: {msg} (defect {defect:.3e})")]
    Precondition { msg: String, defect: f64 },
    /// An identity that must hold by construction failed; signals a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use numkernel::{Subspace, ToleranceConfig};
