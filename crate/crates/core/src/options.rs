//! Evaluation controls and certified results.

use crate::error::{Error, Result};

/// Knobs shared by series summation and quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Absolute tolerance the result's error bound must satisfy.
    pub abs_tol: f64,
    /// Hard cap on series terms (for brackets: on the truncation index).
    pub max_terms: u64,
    /// Gauss-Legendre nodes per quadrature panel.
    pub quad_points: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            abs_tol: 1e-6,
            max_terms: 10_000_000,
            quad_points: 16,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidOptions(format!(
                "abs_tol must be positive and finite, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidOptions("max_terms must be at least 1".into()));
        }
        if self.quad_points < 2 || self.quad_points > 64 {
            return Err(Error::InvalidOptions(format!(
                "quad_points must lie in 2..=64, got {}",
                self.quad_points
            )));
        }
        Ok(())
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_quad_points(mut self, quad_points: u32) -> Self {
        self.quad_points = quad_points;
        self
    }
}

/// A floating-point value together with a bound on its truncation error.
///
/// For series evaluators the bound is rigorous up to binary64 rounding:
/// the true sum lies in `[value, value + error_bound]` when all terms are
/// nonnegative. Quadrature results carry a heuristic Richardson-style
/// estimate instead; see the evaluator's documentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub error_bound: f64,
    /// Terms summed (series) or integrand evaluations (quadrature).
    pub terms_used: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_options_are_valid() {
        assert!(EvalOptions::default().validate().is_ok());
    }

    #[test]
    fn bad_options_are_rejected() {
        assert!(EvalOptions::default().with_tol(0.0).validate().is_err());
        assert!(EvalOptions::default().with_tol(f64::NAN).validate().is_err());
        assert!(EvalOptions::default().with_max_terms(0).validate().is_err());
        assert!(EvalOptions::default().with_quad_points(1).validate().is_err());
        assert!(EvalOptions::default().with_quad_points(65).validate().is_err());
    }
}
