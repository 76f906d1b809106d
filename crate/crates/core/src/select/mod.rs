//! Goodness of fit and information criteria.

pub mod benchmark;
mod ks;

use rayon::prelude::*;

use crate::dist::{Dataset, Lifetime, ModelKind, ParamVector};
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, FitOptions};

pub use ks::{kolmogorov_sf, ks_pvalue, PValueMethod};

/// Right-continuous empirical cdf of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfView {
    sorted: Vec<f64>,
    steps: Vec<f64>,
}

impl EcdfView {
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `i / n` at the i-th sorted point.
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Fraction of observations `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }
}

pub fn ecdf(data: &Dataset) -> EcdfView {
    let n = data.n() as f64;
    EcdfView {
        sorted: data.sorted().to_vec(),
        steps: (1..=data.n()).map(|i| i as f64 / n).collect(),
    }
}

/// Two-sided KS distance between the sample and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(data: &Dataset, cdf: F) -> f64 {
    let n = data.n() as f64;
    data.sorted()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

pub fn aic(log_likelihood: f64, k: usize) -> f64 {
    -2.0 * log_likelihood + 2.0 * k as f64
}

pub fn bic(log_likelihood: f64, k: usize, n: usize) -> f64 {
    -2.0 * log_likelihood + k as f64 * (n as f64).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub kind: ModelKind,
    pub params: ParamVector,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub ks_d: f64,
    pub p_value: f64,
    pub param_count: usize,
    pub converged: bool,
}

impl ComparisonRow {
    /// Scores an already fitted model against `data`.
    pub fn evaluate(
        params: ParamVector,
        log_likelihood: f64,
        converged: bool,
        data: &Dataset,
        method: PValueMethod,
    ) -> Result<Self> {
        let kind = params.kind();
        let k = kind.arity();
        let ks_d = ks_statistic(data, |x| params.cdf(x));
        Ok(Self {
            kind,
            aic: aic(log_likelihood, k),
            bic: bic(log_likelihood, k, data.n()),
            p_value: ks_pvalue(ks_d, data.n(), method)?,
            params,
            log_likelihood,
            ks_d,
            param_count: k,
            converged,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub n: usize,
    /// Ranked by AIC, best first.
    pub rows: Vec<ComparisonRow>,
    /// Documented differences from published benchmark values.
    pub notes: Vec<String>,
}

impl ComparisonTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn row(&self, kind: ModelKind) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.kind == kind)
    }
}

/// Fits every model in `kinds` and ranks them by AIC. Rows whose fit did not
/// converge are kept and flagged.
pub fn compare(
    data: &Dataset,
    kinds: &[ModelKind],
    opts: &FitOptions,
    method: PValueMethod,
) -> Result<ComparisonTable> {
    if kinds.is_empty() {
        return Err(Error::Domain("comparison needs at least one model".into()));
    }
    let mut rows = kinds
        .par_iter()
        .map(|&kind| {
            let fit = fit_mle(kind, data, opts)?;
            ComparisonRow::evaluate(fit.params, fit.log_likelihood, fit.converged, data, method)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.aic.total_cmp(&b.aic));
    Ok(ComparisonTable {
        n: data.n(),
        rows,
        notes: benchmark::discrepancy_notes(data, kinds),
    })
}
