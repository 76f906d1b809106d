//! Maximum likelihood fitting for the five lifetime models.
//!
//! Two-parameter and scalar models are fitted by Nelder–Mead in
//! log-parameter space from several seeded starts, then polished with a few
//! Newton steps. The exponential model uses its closed form.

mod simplex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::families::ln_expm1;
use crate::dist::{Dataset, Lifetime, ModelKind, ParamVector, PgduseParams, ScalarParam, LN_E_MINUS_1};
use crate::error::{Error, Result};

use simplex::{minimize, SimplexSettings};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Number of optimiser starts; the first is the deterministic default.
    pub starts: usize,
    pub max_iters: usize,
    /// Convergence threshold on the log-parameter gradient norm.
    pub grad_tol: f64,
    /// Simplex size (in log-parameter units) at which the search stops.
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iters: 5000,
            grad_tol: 1e-6,
            step_tol: 1e-10,
            seed: 1,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::Domain("at least one start is required".into()));
        }
        for (name, v) in [("grad_tol", self.grad_tol), ("step_tol", self.step_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub kind: ModelKind,
    pub params: ParamVector,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Norm of the log-likelihood gradient with respect to the log
    /// parameters at the reported estimate.
    pub grad_norm: f64,
    pub start_used: usize,
}

/// `sum ln f(x_i)`.
pub fn log_likelihood(p: &ParamVector, data: &Dataset) -> f64 {
    data.observations().iter().map(|&x| p.ln_pdf(x)).sum()
}

/// Analytic gradient `(d/d lambda, d/d theta)` of the PGDUSE log-likelihood.
pub fn score_pgduse(p: &PgduseParams, data: &Dataset) -> [f64; 2] {
    let (lambda, theta) = (p.lambda(), p.theta());
    let n = data.n() as f64;
    let mut d_lambda = n / lambda;
    let mut d_theta = n / theta - n * LN_E_MINUS_1;
    for &x in data.observations() {
        let u = (-lambda * x).exp();
        let s = -(-lambda * x).exp_m1();
        // e^s / (e^s - 1) = -1 / expm1(-s)
        d_lambda += -x + x * u - (theta - 1.0) * x * u / (-s).exp_m1();
        d_theta += ln_expm1(s);
    }
    [d_lambda, d_theta]
}

/// Exponential MLE `n / sum x`.
pub fn fit_ed_closed_form(data: &Dataset) -> ScalarParam {
    ScalarParam::new(ModelKind::Ed, data.n() as f64 / data.sum()).expect("positive data give a positive rate")
}

fn params_from_log(kind: ModelKind, z: &[f64]) -> Option<ParamVector> {
    let raw: Vec<f64> = z.iter().map(|v| v.exp()).collect();
    ParamVector::new(kind, &raw).ok()
}

fn log_lik_at(kind: ModelKind, z: &[f64], data: &Dataset) -> f64 {
    match params_from_log(kind, z) {
        Some(p) => {
            let l = log_likelihood(&p, data);
            if l.is_nan() {
                f64::NEG_INFINITY
            } else {
                l
            }
        }
        None => f64::NEG_INFINITY,
    }
}

/// Gradient of the log-likelihood with respect to log parameters. PGDUSE
/// uses the analytic score, everything else central differences.
fn log_space_gradient(kind: ModelKind, z: &[f64], data: &Dataset) -> Vec<f64> {
    if kind == ModelKind::Pgduse {
        if let Some(ParamVector::Pgduse(p)) = params_from_log(kind, z) {
            let s = score_pgduse(&p, data);
            return vec![s[0] * p.lambda(), s[1] * p.theta()];
        }
        return vec![f64::NAN; 2];
    }
    let h = 1e-5;
    (0..z.len())
        .map(|j| {
            let mut up = z.to_vec();
            let mut down = z.to_vec();
            up[j] += h;
            down[j] -= h;
            (log_lik_at(kind, &up, data) - log_lik_at(kind, &down, data)) / (2.0 * h)
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `H d = -g` for a negative definite `H` of size one or two.
fn newton_direction(h: &[Vec<f64>], g: &[f64]) -> Option<Vec<f64>> {
    match g.len() {
        1 if h[0][0] < 0.0 => Some(vec![-g[0] / h[0][0]]),
        2 => {
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if !(h[0][0] < 0.0 && det > 0.0) {
                return None;
            }
            Some(vec![
                -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                -(h[0][0] * g[1] - h[1][0] * g[0]) / det,
            ])
        }
        _ => None,
    }
}

/// Newton refinement from a simplex optimum. Returns the polished point and
/// the number of accepted steps.
fn polish(kind: ModelKind, mut z: Vec<f64>, data: &Dataset, grad_tol: f64) -> (Vec<f64>, usize) {
    let mut steps = 0;
    let mut f = log_lik_at(kind, &z, data);
    for _ in 0..50 {
        let g = log_space_gradient(kind, &z, data);
        let gn = norm(&g);
        if !gn.is_finite() || gn <= 1e-3 * grad_tol {
            break;
        }
        let h = 1e-4;
        let mut hess = vec![vec![0.0; z.len()]; z.len()];
        for j in 0..z.len() {
            let mut up = z.clone();
            let mut down = z.clone();
            up[j] += h;
            down[j] -= h;
            let gu = log_space_gradient(kind, &up, data);
            let gd = log_space_gradient(kind, &down, data);
            for i in 0..z.len() {
                hess[i][j] = (gu[i] - gd[i]) / (2.0 * h);
            }
        }
        if z.len() == 2 {
            let off = 0.5 * (hess[0][1] + hess[1][0]);
            hess[0][1] = off;
            hess[1][0] = off;
        }
        let Some(dir) = newton_direction(&hess, &g) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand: Vec<f64> = z.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
            let fc = log_lik_at(kind, &cand, data);
            let gc = norm(&log_space_gradient(kind, &cand, data));
            // Near the optimum the likelihood is flat to rounding, so also
            // accept steps that keep it level while shrinking the gradient.
            if fc > f || (fc >= f - 1e-12 * f.abs() && gc < gn) {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, fc)) => {
                z = cand;
                f = fc;
                steps += 1;
            }
            None => break,
        }
    }
    (z, steps)
}

fn start_point(kind: ModelKind, data: &Dataset) -> Vec<f64> {
    let rate = 1.0 / data.mean();
    match kind {
        ModelKind::Pgduse => vec![rate, 1.0],
        ModelKind::Gduse => vec![1.0, rate],
        ModelKind::Duse | ModelKind::Kme | ModelKind::Ed => vec![rate],
    }
}

struct StartOutcome {
    z: Vec<f64>,
    log_lik: f64,
    finished: bool,
    iterations: usize,
}

fn run_start(kind: ModelKind, data: &Dataset, opts: &FitOptions, index: usize) -> StartOutcome {
    let mut z: Vec<f64> = start_point(kind, data).iter().map(|v| v.ln()).collect();
    if index > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(index as u64);
        let spread = 4f64.ln();
        for v in z.iter_mut() {
            *v += rng.gen_range(-spread..=spread);
        }
    }
    let settings = SimplexSettings {
        max_iters: opts.max_iters,
        step_tol: opts.step_tol,
        initial_step: 0.25,
    };
    let out = minimize(|z| -log_lik_at(kind, z, data), &z, &settings);
    let (z, steps) = polish(kind, out.point, data, opts.grad_tol);
    let log_lik = log_lik_at(kind, &z, data);
    StartOutcome {
        z,
        log_lik,
        finished: out.finished,
        iterations: out.iterations + steps,
    }
}

/// Maximum likelihood fit. Non-convergence is reported through
/// [`FitResult::converged`] rather than as an error so the best estimate
/// found is still available.
pub fn fit_mle(kind: ModelKind, data: &Dataset, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    if kind == ModelKind::Ed {
        let p = fit_ed_closed_form(data);
        let params = ParamVector::Ed(p);
        let grad_norm = (data.n() as f64 - p.value() * data.sum()).abs();
        return Ok(FitResult {
            kind,
            log_likelihood: log_likelihood(&params, data),
            params,
            converged: true,
            iterations: 0,
            grad_norm,
            start_used: 0,
        });
    }

    let outcomes: Vec<StartOutcome> = (0..opts.starts)
        .into_par_iter()
        .map(|i| run_start(kind, data, opts, i))
        .collect();
    let (start_used, best) = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| params_from_log(kind, &o.z).is_some() && !o.log_lik.is_nan())
        .fold(None, |acc: Option<(usize, &StartOutcome)>, (i, o)| match acc {
            Some((_, b)) if b.log_lik >= o.log_lik => acc,
            _ => Some((i, o)),
        })
        .ok_or_else(|| Error::Domain(format!("{kind}: no start produced finite parameters")))?;

    let params = params_from_log(kind, &best.z).expect("filtered above");
    let grad_norm = norm(&log_space_gradient(kind, &best.z, data));
    Ok(FitResult {
        kind,
        params,
        log_likelihood: best.log_lik,
        converged: best.finished && grad_norm <= opts.grad_tol,
        iterations: best.iterations,
        grad_norm,
        start_used,
    })
}
