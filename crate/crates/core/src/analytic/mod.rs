//! Moments, generating functions and Rényi entropy of PGDUSE.
//!
//! Each quantity has a series route (the binomial/power double series) and
//! a quadrature route; the series routes are the primary API for PGDUSE and
//! the quadrature routes double as independent checks and cover the other
//! model families.

mod entropy;
mod generating;
mod moments;
pub(crate) mod series;

pub use entropy::{renyi_entropy, renyi_entropy_series};
pub use generating::{cf, cgf, mgf};
pub use moments::{moment_summary, raw_moment_quadrature, raw_moment_series, MomentSummary};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as ComplexValue;

/// Truncation controls for the analytic series.
///
/// Inner power series run until their terms stop changing the sum. The outer
/// binomial sum is either finite (integer exponent) or evaluated at cutoffs
/// `16, 32, ..., <= max_terms` and extrapolated; extrapolation stops at the
/// first cutoff whose error estimate is below `max(abs_tol, rel_tol * |S|)`,
/// so raising `max_terms` never changes a result that already converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_terms: 4096,
        }
    }
}

impl SeriesOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) {
            return Err(Error::Domain(format!(
                "series tolerances must be positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        Ok(())
    }
}
