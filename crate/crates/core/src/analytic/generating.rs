use num_complex::Complex64;

use super::series::{binomial_series, kummer_kernel};
use super::SeriesOptions;
use crate::dist::{PgduseParams, E_MINUS_1};
use crate::error::{Error, Result};

/// Moment generating function `E[e^{tX}]`, defined for `t < lambda`.
///
/// The inner sums are `sum_m (-1)^m (theta-k)^m / (m! (lambda + lambda m - t))`,
/// evaluated as `(1/lambda) int_0^1 u^{-t/lambda} e^{(theta-k)(1-u)} du`.
pub fn mgf(p: &PgduseParams, t: f64, opts: &SeriesOptions) -> Result<f64> {
    let lambda = p.lambda();
    if !(t < lambda) {
        return Err(Error::Domain(format!(
            "mgf requires t < lambda = {lambda}, got {t}"
        )));
    }
    let theta = p.theta();
    let a = 1.0 - t / lambda;
    let sum: f64 = binomial_series(theta - 1.0, theta, theta, opts, |c| kummer_kernel(a, c, opts))?;
    Ok(theta / E_MINUS_1.powf(theta) * sum)
}

/// Characteristic function `E[e^{itX}]`: the MGF series with denominators
/// `lambda + lambda m - i t`.
pub fn cf(p: &PgduseParams, t: f64, opts: &SeriesOptions) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("cf argument must be finite, got {t}")));
    }
    let theta = p.theta();
    let a = Complex64::new(1.0, -t / p.lambda());
    let sum: Complex64 =
        binomial_series(theta - 1.0, theta, theta, opts, |c| kummer_kernel(a, c, opts))?;
    Ok(sum * (theta / E_MINUS_1.powf(theta)))
}

/// Cumulant generating function, the principal logarithm of [`cf`].
pub fn cgf(p: &PgduseParams, t: f64, opts: &SeriesOptions) -> Result<Complex64> {
    let phi = cf(p, t, opts)?;
    if phi.norm() < 1e-300 {
        return Err(Error::LogOfZero(t));
    }
    Ok(phi.ln())
}
