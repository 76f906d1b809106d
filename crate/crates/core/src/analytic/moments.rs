use super::series::{binomial_series, moment_kernel};
use super::SeriesOptions;
use crate::dist::{Lifetime, ParamVector, PgduseParams, E_MINUS_1};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};

fn factorial(r: u32) -> f64 {
    (1..=r).map(f64::from).product()
}

/// r-th raw moment `E[X^r]` of PGDUSE from the double series
///
/// ```text
/// theta r! / ((e-1)^theta lambda^r) * sum_k C(theta-1, k) (-1)^k e^{theta-k}
///     * sum_m (-1)^m (theta-k)^m / (m! (1+m)^{r+1})
/// ```
pub fn raw_moment_series(p: &PgduseParams, r: u32, opts: &SeriesOptions) -> Result<f64> {
    if r == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    let theta = p.theta();
    let sum = binomial_series(theta - 1.0, theta, theta + f64::from(r), opts, |c| {
        moment_kernel(r, c, opts)
    })?;
    Ok(theta * factorial(r) / (E_MINUS_1.powf(theta) * p.lambda().powi(r as i32)) * sum)
}

/// `E[X^r]` by adaptive quadrature of `x^r pdf(x)`: the bulk up to the
/// `1 - 1e-12` quantile plus the remaining tail on a compactified interval.
pub fn raw_moment_quadrature(p: &ParamVector, r: u32, opts: &QuadOptions) -> Result<f64> {
    if r == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    let integrand = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            (f64::from(r) * x.ln() + p.ln_pdf(x)).exp()
        }
    };
    let upper = p.quantile(1.0 - 1e-12)?;
    let bulk = integrate(integrand, 0.0, upper, opts)?;
    let tail = integrate_to_infinity(integrand, upper, opts)?;
    Ok(bulk + tail)
}

/// Mean, variance and standardised third/fourth central moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

pub fn moment_summary(p: &PgduseParams, opts: &SeriesOptions) -> Result<MomentSummary> {
    let m1 = raw_moment_series(p, 1, opts)?;
    let m2 = raw_moment_series(p, 2, opts)?;
    let m3 = raw_moment_series(p, 3, opts)?;
    let m4 = raw_moment_series(p, 4, opts)?;
    let variance = m2 - m1 * m1;
    let mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3);
    let mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1.powi(4);
    Ok(MomentSummary {
        mean: m1,
        variance,
        skewness: mu3 / variance.powf(1.5),
        kurtosis: mu4 / (variance * variance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ModelKind;
    use std::f64::consts::E;

    fn pg(l: f64, t: f64) -> PgduseParams {
        PgduseParams::new(l, t).unwrap()
    }

    /// The two-sum form printed for the case theta = 2:
    /// theta lambda e^2/(e-1)^theta sum (-1)^m 2^m r!/(m!(1+m)^{r+1} lambda^{r+1})
    ///   - theta lambda e/(e-1)^theta sum (-1)^m r!/(m!(1+m)^{r+1} lambda^{r+1})
    fn two_sum_form(lambda: f64, r: u32) -> f64 {
        let theta = 2.0;
        let rf = factorial(r);
        let (mut a, mut b) = (0.0, 0.0);
        let mut fact_m = 1.0;
        for m in 0..60 {
            if m > 0 {
                fact_m *= m as f64;
            }
            let denom = fact_m * ((1 + m) as f64).powi(r as i32 + 1) * lambda.powi(r as i32 + 1);
            a += (-1f64).powi(m) * 2f64.powi(m) * rf / denom;
            b += (-1f64).powi(m) * rf / denom;
        }
        let pref = theta * lambda / E_MINUS_1.powf(theta);
        pref * E * E * a - pref * E * b
    }

    #[test]
    fn unit_shape_mean() {
        // e/(e-1) * sum_m (-1)^m / (m! (1+m)^2)
        let mut s = 0.0;
        let mut fact = 1.0;
        for m in 0..40 {
            if m > 0 {
                fact *= m as f64;
            }
            s += (-1f64).powi(m) / (fact * ((1 + m) as f64).powi(2));
        }
        let closed = E / E_MINUS_1 * s;
        let got = raw_moment_series(&pg(1.0, 1.0), 1, &SeriesOptions::default()).unwrap();
        assert!((got - closed).abs() < 1e-13);
        assert!((got - 1.26021).abs() < 1e-5, "{got}");
        let quad =
            raw_moment_quadrature(&ParamVector::new(ModelKind::Duse, &[1.0]).unwrap(), 1, &QuadOptions::default())
                .unwrap();
        assert!((got - quad).abs() < 1e-9 * got);
    }

    #[test]
    fn theta_two_reduces_to_printed_two_sum_form() {
        for &l in &[0.5, 1.0, 2.0] {
            for r in 1..=4 {
                let got = raw_moment_series(&pg(l, 2.0), r, &SeriesOptions::default()).unwrap();
                let printed = two_sum_form(l, r);
                assert!((got - printed).abs() < 1e-11 * printed, "{l} {r} {got} {printed}");
            }
        }
        let mean = raw_moment_series(&pg(1.0, 2.0), 1, &SeriesOptions::default()).unwrap();
        assert!((mean - 1.834_838_403_059_098).abs() < 1e-12, "{mean}");
    }

    #[test]
    fn moments_scale_with_rate() {
        let a = raw_moment_series(&pg(1.0, 1.0), 1, &SeriesOptions::default()).unwrap();
        let b = raw_moment_series(&pg(2.0, 1.0), 1, &SeriesOptions::default()).unwrap();
        assert!((b - 0.5 * a).abs() < 1e-14);
    }

    #[test]
    fn exponential_moments_by_quadrature() {
        let ed = ParamVector::new(ModelKind::Ed, &[1.0]).unwrap();
        let opts = QuadOptions::default();
        assert!((raw_moment_quadrature(&ed, 1, &opts).unwrap() - 1.0).abs() < 1e-9);
        assert!((raw_moment_quadrature(&ed, 2, &opts).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(raw_moment_series(&pg(1.0, 1.0), 0, &SeriesOptions::default()).is_err());
    }

    #[test]
    fn fractional_shape_matches_quadrature() {
        for &t in &[0.5, 2.5] {
            for r in 1..=4 {
                let p = pg(1.0, t);
                let s = raw_moment_series(&p, r, &SeriesOptions::default()).unwrap();
                let q = raw_moment_quadrature(&p.into(), r, &QuadOptions::default()).unwrap();
                assert!((s - q).abs() < 1e-8 * q, "{t} {r} {s} {q}");
            }
        }
    }

    #[test]
    fn summary_is_consistent() {
        let s = moment_summary(&pg(1.0, 1.0), &SeriesOptions::default()).unwrap();
        assert!(s.variance > 0.0);
        assert!(s.kurtosis > 1.0);
    }
}
