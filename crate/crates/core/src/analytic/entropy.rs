use super::series::{binomial_series, kummer_kernel};
use super::SeriesOptions;
use crate::dist::{Lifetime, ParamVector, PgduseParams, E_MINUS_1};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};

fn check_order(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() && delta != 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Rényi order must be positive, finite and different from 1, got {delta}"
        )))
    }
}

/// Rényi entropy `ln(int pdf^delta) / (1 - delta)` by adaptive quadrature.
///
/// When the density is unbounded at the origin (shape below one) the
/// integral only exists for small enough `delta`; outside that range the
/// quadrature fails and the failure is returned.
pub fn renyi_entropy(p: &ParamVector, delta: f64, opts: &QuadOptions) -> Result<f64> {
    check_order(delta)?;
    let integrand = |x: f64| (delta * p.ln_pdf(x)).exp();
    let upper = p.quantile(1.0 - 1e-12)?;
    let bulk = integrate(integrand, 0.0, upper, opts)?;
    let tail = integrate_to_infinity(integrand, upper, opts)?;
    Ok((bulk + tail).ln() / (1.0 - delta))
}

/// Rényi entropy of PGDUSE from the double series
///
/// ```text
/// int g^delta = (theta lambda)^delta / ((e-1)^{theta delta} lambda)
///     * sum_k C(delta (theta-1), k) (-1)^k e^{delta theta - k}
///     * sum_m (-1)^m (delta theta - k)^m / (m! (delta + m))
/// ```
///
/// The binomial exponent is `delta (theta - 1)`, the power carried by
/// `(e^{1-e^{-lambda x}} - 1)^{theta-1}` after raising the density to `delta`.
pub fn renyi_entropy_series(p: &PgduseParams, delta: f64, opts: &SeriesOptions) -> Result<f64> {
    check_order(delta)?;
    let (lambda, theta) = (p.lambda(), p.theta());
    let exponent = delta * (theta - 1.0);
    let sum: f64 = binomial_series(exponent, delta * theta, exponent + 1.0, opts, |c| {
        kummer_kernel(delta, c, opts)
    })?;
    if !(sum > 0.0) {
        return Err(Error::SeriesDivergence(format!(
            "series for the integral of pdf^{delta} evaluated to {sum}"
        )));
    }
    let ln_integral =
        delta * (theta * lambda).ln() - theta * delta * E_MINUS_1.ln() - lambda.ln() + sum.ln();
    Ok(ln_integral / (1.0 - delta))
}
