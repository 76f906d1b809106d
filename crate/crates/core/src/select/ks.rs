//! Null distribution of the two-sided one-sample Kolmogorov–Smirnov
//! statistic.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PValueMethod {
    /// Marsaglia–Tsang–Wang matrix algorithm for `P(D_n >= d)`.
    Exact,
    /// Limiting Kolmogorov distribution evaluated at `sqrt(n) d`.
    #[default]
    Asymptotic,
    /// Exact for `n <= 100`, asymptotic above.
    Auto,
}

impl FromStr for PValueMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "asymptotic" => Ok(Self::Asymptotic),
            "auto" => Ok(Self::Auto),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Upper-tail probability of the KS statistic for sample size `n`.
pub fn ks_pvalue(d: f64, n: usize, method: PValueMethod) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!("KS statistic must lie in [0, 1], got {d}")));
    }
    if n == 0 {
        return Err(Error::Domain("KS p-value needs n >= 1".into()));
    }
    if d == 0.0 {
        return Ok(1.0);
    }
    let p = match method {
        PValueMethod::Exact => 1.0 - exact_cdf(d, n),
        PValueMethod::Asymptotic => kolmogorov_sf((n as f64).sqrt() * d),
        PValueMethod::Auto if n <= 100 => 1.0 - exact_cdf(d, n),
        PValueMethod::Auto => kolmogorov_sf((n as f64).sqrt() * d),
    };
    Ok(p.clamp(0.0, 1.0))
}

/// `P(K > z)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(z: f64) -> f64 {
    if z <= 0.0 {
        return 1.0;
    }
    if z < 1.0 {
        // Theta-function form, fast for small z.
        let c = -PI * PI / (8.0 * z * z);
        let mut cdf = 0.0;
        for k in 1..=50 {
            let j = (2 * k - 1) as f64;
            let term = (c * j * j).exp();
            cdf += term;
            if term < 1e-17 * cdf {
                break;
            }
        }
        return 1.0 - (2.0 * PI).sqrt() / z * cdf;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * z * z).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    2.0 * sum
}

type Matrix = Vec<Vec<f64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = a.len();
    let mut c = vec![vec![0.0; m]; m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// `(A^n, e)` with the true power equal to `A^n * 10^e`.
fn mat_pow(a: &Matrix, n: usize) -> (Matrix, i32) {
    if n == 1 {
        return (a.clone(), 0);
    }
    let (half, e_half) = mat_pow(a, n / 2);
    let mut out = mat_mul(&half, &half);
    let mut e = 2 * e_half;
    if n % 2 == 1 {
        out = mat_mul(a, &out);
    }
    let k = out.len() / 2;
    if out[k][k] > 1e140 {
        for row in out.iter_mut() {
            for v in row.iter_mut() {
                *v *= 1e-140;
            }
        }
        e += 140;
    }
    (out, e)
}

/// `P(D_n < d)` by the Marsaglia–Tsang–Wang algorithm.
fn exact_cdf(d: f64, n: usize) -> f64 {
    let nd = n as f64 * d;
    let k = nd.floor() as usize + 1;
    let m = 2 * k - 1;
    let h = k as f64 - nd;

    let mut a = vec![vec![0.0; m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i + 1 >= j {
                *v = 1.0;
            }
        }
    }
    for i in 0..m {
        a[i][0] -= h.powi(i as i32 + 1);
        a[m - 1][i] -= h.powi((m - i) as i32);
    }
    if 2.0 * h - 1.0 > 0.0 {
        a[m - 1][0] += (2.0 * h - 1.0).powi(m as i32);
    }
    for i in 0..m {
        for j in 0..m {
            if i + 1 > j {
                let mut fact = 1.0;
                for g in 1..=(i + 1 - j) {
                    fact *= g as f64;
                }
                a[i][j] /= fact;
            }
        }
    }

    let (q, mut e) = mat_pow(&a, n);
    let mut s = q[k - 1][k - 1];
    for i in 1..=n {
        s *= i as f64 / n as f64;
        if s < 1e-140 {
            s *= 1e140;
            e -= 140;
        }
    }
    s * 10f64.powi(e)
}
