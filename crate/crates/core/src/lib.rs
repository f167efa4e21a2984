//! Representation counts for sums of 2m-th powers and certified bounds
//! for their shifted reciprocal series.
//!
//! For integers m ≥ 1, k ≥ 1 let r_{m,k}(n) count the vectors x ∈ ℤ^k
//! with x_1^(2m) + ... + x_k^(2m) = n, and for a shift a > 0 form
//!
//!   S_{m,k}(a) = Σ_{n≥0} r_{m,k}(n) / (n + a),
//!
//! which converges exactly when k < 2m. The crate provides:
//!
//! - exact coefficient tables and cross-checks ([`representation`]),
//! - the special functions behind the closed forms: Θ_m, U_{2m}, coth
//!   and the Ψ kernel ([`special`]),
//! - certified two-sided brackets for S along with lattice and
//!   quadrature routes to the same number ([`series`]),
//! - two rigorous lower bounds, their Hölder machinery, and tooling to
//!   verify them strictly against the brackets ([`bounds`]).
//!
//! Everything is plain binary64; series enclosures are rigorous up to
//! rounding, quadrature error estimates are heuristic and documented as
//! such. Summation orders are fixed, so equal inputs give equal bits.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
mod fit;
pub mod options;
mod quad;
pub mod representation;
pub mod series;
pub mod special;

pub use bounds::{BoundReport, HolderReport, StrictCheck};
pub use error::{Error, Result};
pub use options::{CertifiedValue, EvalOptions};
pub use representation::{PowerParams, RepCoefficients};
pub use series::{MethodTag, SeriesBracket};
