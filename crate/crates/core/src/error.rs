use std::path::PathBuf;

use thiserror::Error;

use crate::dist::ModelKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{kind}: parameter `{name}` must be positive and finite, got {value}")]
    NonPositiveParameter {
        kind: ModelKind,
        name: &'static str,
        value: f64,
    },

    #[error("{kind} takes {expected} parameter(s), got {got}")]
    ArityMismatch {
        kind: ModelKind,
        expected: usize,
        got: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge: {0}")]
    SeriesDivergence(String),

    #[error("quadrature failed: {0}")]
    QuadFailure(String),

    #[error("logarithm of zero: characteristic function vanishes at t = {0}")]
    LogOfZero(f64),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("line {line}: observation {value} is not positive and finite")]
    NonPositiveObservation { line: usize, value: f64 },

    #[error("line {line}: cannot parse `{token}` as a number")]
    Parse { line: usize, token: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{kind} fit did not converge (gradient norm {grad_norm:e})")]
    NonConvergence { kind: ModelKind, grad_norm: f64 },

    #[error("unknown dataset or model name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
