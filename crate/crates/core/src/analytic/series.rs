//! Shared machinery for the PGDUSE series.
//!
//! Every series in this module has the shape
//!
//! ```text
//! S = sum_{k >= 0} C(alpha, k) (-1)^k  I(c0 - k)
//! ```
//!
//! where the outer sum comes from the generalised binomial expansion of
//! `(e^s - 1)^alpha = sum_k C(alpha, k) (-1)^k e^{s (alpha - k)}` and the inner
//! value `I(c) = int_0^1 kernel(u) e^{c (1 - u)} du` is itself the power series
//! of `e^{-c e^{-lambda x}}` integrated term by term.
//!
//! The outer sum terminates when `alpha` is a non-negative integer. Otherwise
//! its terms decay like `k^{-p-1}` for a known exponent `p`, so partial sums at
//! `K = 16, 32, 64, ...` are extrapolated with Richardson's scheme using the
//! exponents `p, p + 1, p + 2, ...`.
//!
//! Inner values are always evaluated from a series with positive terms: a
//! Poisson expectation when `c <= 0`, and a Kummer-type or harmonic-number
//! expansion of `e^{c (1 - u)}` when `c > 0`.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use super::SeriesOptions;
use crate::error::{Error, Result};

const FIRST_CUTOFF: usize = 16;

/// Relative size below which an inner-series term no longer changes the sum.
const INNER_EPS: f64 = 1e-17;

pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Div<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn magnitude(self) -> f64 {
        self.norm()
    }
}

fn is_nonnegative_integer(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0
}

/// Sum of `C(alpha, k) (-1)^k inner(c0 - k)` over `k >= 0`.
///
/// `tail_exponent` is `p` in `S - S_K ~ K^{-p}`; a non-positive value means
/// the series diverges.
pub(crate) fn binomial_series<T, F>(
    alpha: f64,
    c0: f64,
    tail_exponent: f64,
    opts: &SeriesOptions,
    mut inner: F,
) -> Result<T>
where
    T: Scalar,
    F: FnMut(f64) -> Result<T>,
{
    opts.validate()?;

    if is_nonnegative_integer(alpha) {
        let last = alpha as usize;
        if last + 1 > opts.max_terms {
            return Err(Error::SeriesDivergence(format!(
                "{} binomial terms needed, max_terms is {}",
                last + 1,
                opts.max_terms
            )));
        }
        let mut coeff = 1.0;
        let mut sum = T::zero();
        for k in 0..=last {
            sum = sum + inner(c0 - k as f64)? * coeff;
            coeff *= -(alpha - k as f64) / (k as f64 + 1.0);
        }
        return Ok(sum);
    }

    if !(tail_exponent > 0.0) {
        return Err(Error::SeriesDivergence(format!(
            "binomial terms decay like k^{:.3}, the series diverges",
            -tail_exponent - 1.0
        )));
    }

    let mut partials: Vec<T> = Vec::new();
    let mut previous_top: Option<T> = None;
    let mut best: Option<(T, f64)> = None;
    let mut coeff = 1.0;
    let mut sum = T::zero();
    let mut k = 0usize;
    let mut cutoff = FIRST_CUTOFF;
    while cutoff <= opts.max_terms {
        while k < cutoff {
            sum = sum + inner(c0 - k as f64)? * coeff;
            coeff *= -(alpha - k as f64) / (k as f64 + 1.0);
            k += 1;
        }
        partials.push(sum);
        cutoff *= 2;

        let top = richardson(&partials, tail_exponent);
        if let Some(prev) = previous_top {
            let err = (top - prev).magnitude();
            if err <= opts.abs_tol.max(opts.rel_tol * top.magnitude()) && partials.len() >= 3 {
                return Ok(top);
            }
            if best.is_none_or(|(_, e)| err < e) {
                best = Some((top, err));
            }
        }
        previous_top = Some(top);
    }

    let detail = match best {
        Some((v, e)) => format!(
            "extrapolated tail not within tolerance after {k} terms (estimate {:e}, error {e:e})",
            v.magnitude()
        ),
        None => format!("max_terms = {} leaves too few partial sums to extrapolate", opts.max_terms),
    };
    Err(Error::SeriesDivergence(detail))
}

/// Eliminates `K^{-p}, K^{-p-1}, ...` from partial sums taken at geometrically
/// doubling cutoffs and returns the fully extrapolated value.
pub(crate) fn richardson<T: Scalar>(partials: &[T], p: f64) -> T {
    let mut row = partials.to_vec();
    for level in 1..partials.len() {
        let factor = 2f64.powf(p + (level - 1) as f64);
        row = row
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - 1.0))
            .collect();
    }
    row[0]
}

/// `E[h(M)]` for `M ~ Poisson(mean)`, summed outward from the mode so that no
/// weight underflows.
fn poisson_expectation<T, H>(mean: f64, opts: &SeriesOptions, h: H) -> Result<T>
where
    T: Scalar,
    H: Fn(usize) -> T,
{
    if mean == 0.0 {
        return Ok(h(0));
    }
    let mode = mean.floor() as usize;
    let limit = opts.max_terms + (20.0 * mean.sqrt()) as usize + 50;

    let mut weight_sum = 1.0;
    let mut acc = h(mode);
    let mut count = 1usize;

    let mut w = 1.0;
    let mut m = mode;
    loop {
        w *= mean / (m + 1) as f64;
        m += 1;
        weight_sum += w;
        acc = acc + h(m) * w;
        count += 1;
        if w < INNER_EPS * weight_sum {
            break;
        }
        if count > limit {
            return Err(Error::SeriesDivergence(format!(
                "Poisson expansion with mean {mean} needs more than {limit} terms"
            )));
        }
    }

    let mut w = 1.0;
    let mut m = mode;
    while m > 0 {
        w *= m as f64 / mean;
        m -= 1;
        weight_sum += w;
        acc = acc + h(m) * w;
        if w < INNER_EPS * weight_sum {
            break;
        }
    }
    Ok(acc / weight_sum)
}

/// `int_0^1 u^{a-1} e^{c (1 - u)} du` for `Re a > 0`.
pub(crate) fn kummer_kernel<T>(a: T, c: f64, opts: &SeriesOptions) -> Result<T>
where
    T: Scalar + Add<f64, Output = T> + Mul<T, Output = T> + Inv,
{
    if c <= 0.0 {
        return poisson_expectation(-c, opts, |m| (a + m as f64).inv());
    }
    // sum_j c^j / (a (a + 1) ... (a + j))
    let limit = opts.max_terms + c.ceil() as usize;
    let mut term = a.inv();
    let mut sum = term;
    let mut small = 0;
    for j in 1..=limit {
        term = (term * c) * (a + j as f64).inv();
        sum = sum + term;
        if j as f64 > c && term.magnitude() <= INNER_EPS * sum.magnitude() {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDivergence(format!(
        "Kummer expansion at c = {c} did not settle within {limit} terms"
    )))
}

pub(crate) trait Inv {
    fn inv(self) -> Self;
}

impl Inv for f64 {
    fn inv(self) -> Self {
        self.recip()
    }
}

impl Inv for Complex64 {
    fn inv(self) -> Self {
        Complex64::inv(&self)
    }
}


/// `J_r(c) = (1/r!) int_0^1 (-ln u)^r e^{c (1 - u)} du`, the inner value of the
/// raw-moment series, i.e. `e^c sum_m (-c)^m / (m! (1 + m)^{r + 1})`.
pub(crate) fn moment_kernel(r: u32, c: f64, opts: &SeriesOptions) -> Result<f64> {
    let power = (r + 1) as i32;
    if c <= 0.0 {
        return poisson_expectation(-c, opts, |m| ((1 + m) as f64).powi(-power));
    }

    // e^{c (1 - u)} = sum_j c^j (1 - u)^j / j!, and
    // (1/r!) int_0^1 (-ln u)^r (1 - u)^j du = Y_r(0! H1, 1! H2, ..., (r-1)! Hr) / (r! (j + 1))
    // with H_n the generalised harmonic numbers of order n at j + 1.
    let r = r as usize;
    let mut harmonic = vec![0.0; r + 1];
    let mut factorials = vec![1.0; r + 1];
    for n in 1..=r {
        factorials[n] = factorials[n - 1] * n as f64;
    }
    let limit = opts.max_terms + c.ceil() as usize;
    let mut weight = 1.0; // c^j / j!
    let mut sum = 0.0;
    let mut small = 0;
    for j in 0..=limit {
        if j > 0 {
            weight *= c / j as f64;
        }
        let n1 = (j + 1) as f64;
        for (order, h) in harmonic.iter_mut().enumerate().skip(1) {
            *h += n1.powi(-(order as i32));
        }
        let args: Vec<f64> = (1..=r).map(|n| factorials[n - 1] * harmonic[n]).collect();
        let term = weight * complete_bell(&args) / (factorials[r] * n1);
        sum += term;
        if j as f64 > c && term <= INNER_EPS * sum {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDivergence(format!(
        "moment expansion at c = {c} did not settle within {limit} terms"
    )))
}

/// Complete exponential Bell polynomial `Y_n(x_1, ..., x_n)` with `n = x.len()`.
fn complete_bell(x: &[f64]) -> f64 {
    let n = x.len();
    let mut y = vec![0.0; n + 1];
    y[0] = 1.0;
    for m in 0..n {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for i in 0..=m {
            acc += binom * y[m - i] * x[i];
            binom *= (m - i) as f64 / (i + 1) as f64;
        }
        y[m + 1] = acc;
    }
    y[n]
}
