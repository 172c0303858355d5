//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors raised by the exact and numeric layers.
///
/// The split mirrors the failure modes callers must distinguish: bad inputs
/// (`Domain`, `Grading`, `NonCuspidal`), insufficient data (`Window`,
/// `Underdetermined`, `Budget`), certification failures (`NotInRing`), and
/// violations of identities that are supposed to be theorems (`Internal`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid argument (odd weight, non-prime p, degree mismatch, ...).
    Domain(String),
    /// A series window is too short or degenerate for the requested result.
    Window(String),
    /// Weight-homogeneity or mod-12 grading violation.
    Grading(String),
    /// A series is not the expansion of any element of the ring.
    NotInRing(String),
    /// The window is too short to certify membership.
    Underdetermined(String),
    /// A cuspidality precondition failed.
    NonCuspidal(String),
    /// Numeric precision or convergence budget exhausted.
    Budget(String),
    /// An identity the theory guarantees failed to hold. Always a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Window(m) => write!(f, "window error: {m}"),
            Error::Grading(m) => write!(f, "grading error: {m}"),
            Error::NotInRing(m) => write!(f, "not in ring: {m}"),
            Error::Underdetermined(m) => write!(f, "underdetermined: {m}"),
            Error::NonCuspidal(m) => write!(f, "non-cuspidal: {m}"),
            Error::Budget(m) => write!(f, "budget error: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
