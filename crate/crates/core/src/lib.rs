//! Power generalized DUS (PGDUS) transformation of lifetime distributions,
//! specialised to the exponential baseline (PGDUSE), together with the
//! competing DUS-family models used to benchmark it.
//!
//! The crate is organised bottom-up:
//!
//! * [`dist`]: model families, parameter validation, distribution functions
//!   and seeded sampling.
//! * [`quad`]: adaptive Gauss–Kronrod quadrature used as an oracle.
//! * [`analytic`]: moment, MGF, CF, CGF and Rényi-entropy series for PGDUSE.
//! * [`order_stats`]: order statistics and series/parallel system lifetimes.
//! * [`estimation`]: log-likelihood, score and maximum likelihood fitting.
//! * [`select`]: ECDF, Kolmogorov–Smirnov, AIC/BIC and model comparison.
//! * [`cli`]: dataset ingestion and the command implementations behind the
//!   `pgdus` binary.

pub mod analytic;
pub mod cli;
pub mod dist;
pub mod error;
pub mod estimation;
pub mod order_stats;
pub mod quad;
pub mod select;

pub use dist::{Dataset, GduseParams, ModelKind, ParamVector, PgduseParams, ScalarParam};
pub use error::{Error, Result};
