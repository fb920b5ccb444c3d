use num_complex::Complex64;
use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// `1 ∓ 2ik` vanishes, so the disentangled coefficients blow up.
    #[error("disentangling pole: 1 {sign} 2ik = 0 at k = {k}")]
    Singular { k: Complex64, sign: char },

    /// The principal branch of `ln(1 ∓ 2ik)` is not safe for operator-level use.
    #[error("branch ambiguity: Re(1 {sign} 2ik) = {re} is not positive at k = {k}")]
    Branch { k: Complex64, sign: char, re: f64 },

    /// A propagated grid state reached the edge of its periodic box.
    #[error("wraparound: |psi| = {amplitude:e} at the grid boundary exceeds {limit:e}")]
    Wraparound { amplitude: f64, limit: f64 },

    /// A grid does not resolve a state (position coverage or momentum bandwidth).
    #[error("grid too small: {0}")]
    Grid(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
