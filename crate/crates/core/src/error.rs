//! Error type shared by every module in the crate.

use std::fmt;

use crate::options::CertifiedValue;

/// Everything that can go wrong while counting representations or
/// evaluating series.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    Domain(String),
    /// The shifted series diverges for these parameters; convergence
    /// requires k < 2m.
    Divergent { m: u32, k: u32 },
    /// No closed form is implemented for this power order.
    UnsupportedOrder { m: u32 },
    /// The term budget ran out before the requested tolerance was met.
    /// The partial result is still a valid certified enclosure.
    Truncation { partial: CertifiedValue },
    /// Quadrature refinement stalled before reaching the tolerance.
    Unconverged { partial: CertifiedValue },
    /// An exact integer count exceeded the u64 range.
    Overflow,
    /// Too few usable sample points for a least-squares fit.
    DegenerateFit { points: usize },
    /// Malformed evaluation options.
    InvalidOptions(String),
    /// Malformed interval or sample grid.
    InvalidGrid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Divergent { m, k } => write!(
                f,
                "series diverges for m = {m}, k = {k}: convergence requires k < 2m"
            ),
            Error::UnsupportedOrder { m } => {
                write!(f, "no closed form for m = {m}: only m = 1 and m = 2 are implemented")
            }
            Error::Truncation { partial } => write!(
                f,
                "tolerance not reached within the term budget ({} terms, error bound {:.3e})",
                partial.terms_used, partial.error_bound
            ),
            Error::Unconverged { partial } => write!(
                f,
                "quadrature refinement stalled (estimated error {:.3e})",
                partial.error_bound
            ),
            Error::Overflow => write!(f, "exact count exceeds u64"),
            Error::DegenerateFit { points } => {
                write!(f, "least-squares fit needs at least 3 points, got {points}")
            }
            Error::InvalidOptions(msg) => write!(f, "invalid options: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
