//! Order statistics of an i.i.d. PGDUSE sample and the series/parallel
//! system lifetimes they describe.
//!
//! These use the textbook formulas built on the PGDUSE cdf `G` and density
//! `g`:
//!
//! ```text
//! g_r(x) = n! / ((r-1)! (n-r)!) G^{r-1} (1-G)^{n-r} g
//! G_r(x) = sum_{i=r}^{n} C(n, i) G^i (1-G)^{n-i}
//! ```

use serde::{Deserialize, Serialize};

use crate::dist::{Lifetime, PgduseParams};
use crate::error::{Error, Result};

/// Sample size `n` and rank `r` with `1 <= r <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderSpec {
    n: usize,
    r: usize,
}

impl OrderSpec {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 || r == 0 || r > n {
            return Err(Error::Domain(format!(
                "order statistic needs 1 <= r <= n, got n = {n}, r = {r}"
            )));
        }
        Ok(Self { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Fails at the first component failure (minimum).
    Series,
    /// Fails at the last component failure (maximum).
    Parallel,
}

fn ln_choose(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k)
        .map(|j| ((n - k + j) as f64 / j as f64).ln())
        .sum()
}

/// `k ln y`, with `0 ln 0 = 0`.
fn xlny(k: usize, y: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * y.ln()
    }
}

/// `C(n, i) G^i S^{n-i}` for `i` in `range`, summed in log space.
fn binomial_mass(n: usize, range: std::ops::RangeInclusive<usize>, g: f64, s: f64) -> f64 {
    range
        .map(|i| (ln_choose(n, i) + xlny(i, g) + xlny(n - i, s)).exp())
        .sum()
}

/// Density of the r-th smallest of n draws.
pub fn order_stat_pdf(p: &PgduseParams, spec: OrderSpec, x: f64) -> f64 {
    let (n, r) = (spec.n, spec.r);
    if x < 0.0 {
        return 0.0;
    }
    let ln_g = p.ln_pdf(x);
    if n == 1 {
        return ln_g.exp();
    }
    let ln_coeff = (n as f64).ln() + ln_choose(n - 1, r - 1);
    (ln_coeff + xlny(r - 1, p.cdf(x)) + xlny(n - r, p.survival(x)) + ln_g).exp()
}

/// Cdf of the r-th smallest of n draws. `r = n` gives `G^n` and `r = 1`
/// gives `1 - (1 - G)^n`.
pub fn order_stat_cdf(p: &PgduseParams, spec: OrderSpec, x: f64) -> f64 {
    let (n, r) = (spec.n, spec.r);
    if x <= 0.0 {
        return 0.0;
    }
    let g = p.cdf(x);
    let s = p.survival(x);
    if r == n {
        return g.powi(n as i32);
    }
    if r == 1 {
        return -(n as f64 * s.ln()).exp_m1();
    }
    // Sum whichever side of the binomial has fewer terms.
    if n - r < r {
        binomial_mass(n, r..=n, g, s).min(1.0)
    } else {
        (1.0 - binomial_mass(n, 0..=r - 1, g, s)).max(0.0)
    }
}

/// Probability that an n-component system has failed by time `t`.
pub fn system_lifetime_cdf(p: &PgduseParams, n: usize, topology: Topology, t: f64) -> Result<f64> {
    let r = match topology {
        Topology::Series => 1,
        Topology::Parallel => n,
    };
    Ok(order_stat_cdf(p, OrderSpec::new(n, r)?, t))
}
