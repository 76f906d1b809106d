//! Command implementations behind the `pgdus` binary.

mod data;
pub mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dist::{Dataset, Lifetime, ModelKind, ParamVector};
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, FitOptions};
use crate::select::{compare, ecdf, ComparisonRow, PValueMethod};

pub use data::{load_dataset, parse_dataset};
use render::{csv_error, model_columns, row_json, rows_csv, rows_table, sig7, text_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFn {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    Quantile,
}

#[derive(Debug, Parser)]
#[command(name = "pgdus", version, about = "Fit and evaluate PGDUS-exponential lifetime models")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Data file, or `lawless` for the embedded ball-bearing data.
    #[arg(long, default_value = "lawless")]
    pub data: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value = "asymptotic")]
    pub pvalue_method: PValueMethod,
}

impl FitArgs {
    fn options(&self) -> FitOptions {
        FitOptions {
            starts: self.starts,
            seed: self.seed,
            ..FitOptions::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one model by maximum likelihood.
    Fit {
        #[arg(long)]
        model: ModelKind,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit several models and rank them by AIC.
    Compare {
        /// Comma-separated model list; all five by default.
        #[arg(long, value_delimiter = ',')]
        models: Vec<ModelKind>,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a distribution function at given points.
    Eval {
        #[arg(long)]
        model: ModelKind,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        params: Vec<f64>,
        #[arg(long = "fn", value_enum)]
        function: EvalFn,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        at: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw a seeded random sample.
    Sample {
        #[arg(long)]
        model: ModelKind,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        params: Vec<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write density, hazard and ECDF-overlay grids for plotting.
    Plotdata {
        #[arg(long, value_delimiter = ',')]
        models: Vec<ModelKind>,
        /// Use these parameters instead of fitting (single model only).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        params: Vec<f64>,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, default_value_t = 512)]
        grid_points: usize,
        #[arg(long, default_value_t = 0.999)]
        grid_quantile: f64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn emit(output: &OutputArgs, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, body),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Error::Io {
            path: PathBuf::from("<stdout>"),
            message: e.to_string(),
        }),
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs one command. Output goes to `stdout` unless `--out` names a file.
/// An `Err` means the process should exit with a failure status; the
/// output has already been written where that makes sense (non-converged
/// fits, per-point evaluation errors).
pub fn run(config: RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match config.command {
        Command::Fit { model, fit, output } => cmd_fit(model, &fit, &output, stdout),
        Command::Compare { models, fit, output } => cmd_compare(&models, &fit, &output, stdout),
        Command::Eval {
            model,
            params,
            function,
            at,
            output,
        } => cmd_eval(model, &params, function, &at, &output, stdout),
        Command::Sample {
            model,
            params,
            n,
            seed,
            output,
        } => cmd_sample(model, &params, n, seed, &output, stdout),
        Command::Plotdata {
            models,
            params,
            fit,
            grid_points,
            grid_quantile,
            out,
        } => cmd_plotdata(&models, &params, &fit, grid_points, grid_quantile, &out),
    }
}

fn cmd_fit(model: ModelKind, args: &FitArgs, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let data = load_dataset(&args.data)?;
    let fit = fit_mle(model, &data, &args.options())?;
    let row = ComparisonRow::evaluate(
        fit.params,
        fit.log_likelihood,
        fit.converged,
        &data,
        args.pvalue_method,
    )?;
    let body = match output.format {
        Format::Table => {
            let mut s = rows_table(std::slice::from_ref(&row), &[]);
            s.push_str(&format!(
                "\niterations: {}  gradient norm: {:.3e}  start: {}\n",
                fit.iterations, fit.grad_norm, fit.start_used
            ));
            s
        }
        Format::Csv => rows_csv(std::slice::from_ref(&row), &[])?,
        Format::Json => {
            let mut v = row_json(&row);
            v["iterations"] = json!(fit.iterations);
            v["grad_norm"] = json!(fit.grad_norm);
            v["start_used"] = json!(fit.start_used);
            to_json(&v)
        }
    };
    emit(output, &body, stdout)?;
    if fit.converged {
        Ok(())
    } else {
        Err(Error::NonConvergence {
            kind: model,
            grad_norm: fit.grad_norm,
        })
    }
}

fn cmd_compare(models: &[ModelKind], args: &FitArgs, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let data = load_dataset(&args.data)?;
    let kinds = if models.is_empty() { &ModelKind::ALL[..] } else { models };
    let table = compare(&data, kinds, &args.options(), args.pvalue_method)?;
    let body = match output.format {
        Format::Table => rows_table(&table.rows, &table.notes),
        Format::Csv => rows_csv(&table.rows, &table.notes)?,
        Format::Json => to_json(&json!({
            "n": table.n,
            "rows": table.rows.iter().map(row_json).collect::<Vec<_>>(),
            "notes": table.notes,
        })),
    };
    emit(output, &body, stdout)?;
    match table.rows.iter().find(|r| !r.converged) {
        None => Ok(()),
        Some(r) => Err(Error::NonConvergence {
            kind: r.kind,
            grad_norm: f64::NAN,
        }),
    }
}

fn evaluate(p: &ParamVector, function: EvalFn, x: f64) -> Result<f64> {
    Ok(match function {
        EvalFn::Pdf => p.pdf(x),
        EvalFn::Cdf => p.cdf(x),
        EvalFn::Survival => p.survival(x),
        EvalFn::Hazard => p.hazard(x),
        EvalFn::Quantile => p.quantile(x)?,
    })
}

fn cmd_eval(
    model: ModelKind,
    params: &[f64],
    function: EvalFn,
    at: &[f64],
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<()> {
    let p = ParamVector::new(model, params)?;
    let results: Vec<(f64, Result<f64>)> = at.iter().map(|&x| (x, evaluate(&p, function, x))).collect();
    let body = match output.format {
        Format::Table => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|(x, r)| match r {
                    Ok(v) => vec![x.to_string(), sig7(*v)],
                    Err(e) => vec![x.to_string(), format!("error: {e}")],
                })
                .collect();
            text_table(&["x".into(), "value".into()], &rows)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["x", "value", "error"]).map_err(csv_error)?;
            for (x, r) in &results {
                let rec = match r {
                    Ok(v) => [x.to_string(), v.to_string(), String::new()],
                    Err(e) => [x.to_string(), String::new(), e.to_string()],
                };
                w.write_record(&rec).map_err(csv_error)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?)
                .expect("csv output is utf-8")
        }
        Format::Json => to_json(&json!({
            "model": model.tag(),
            "fn": format!("{function:?}").to_lowercase(),
            "values": results
                .iter()
                .map(|(x, r)| match r {
                    Ok(v) => json!({ "x": x, "value": v }),
                    Err(e) => json!({ "x": x, "error": e.to_string() }),
                })
                .collect::<Vec<_>>(),
        })),
    };
    emit(output, &body, stdout)?;
    match results.into_iter().find_map(|(_, r)| r.err()) {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn cmd_sample(
    model: ModelKind,
    params: &[f64],
    n: usize,
    seed: u64,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<()> {
    let p = ParamVector::new(model, params)?;
    let draws = p.sample(n, seed);
    let body = match output.format {
        Format::Json => to_json(&json!(draws)),
        Format::Table | Format::Csv => {
            let mut s = String::new();
            if output.format == Format::Csv {
                s.push_str("x\n");
            }
            for v in &draws {
                s.push_str(&v.to_string());
                s.push('\n');
            }
            s
        }
    };
    emit(output, &body, stdout)
}

fn grid_csv(header: Vec<String>, columns: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(csv_error)?;
    for i in 0..columns[0].len() {
        w.write_record(columns.iter().map(|c| c[i].to_string()))
            .map_err(csv_error)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?).expect("csv output is utf-8"))
}

/// Builds the three plot grids. The first model in `models` sets the grid
/// range unless a later one has lower AIC.
pub fn plot_grids(
    data: &Dataset,
    models: &[(ParamVector, f64)],
    grid_points: usize,
    grid_quantile: f64,
) -> Result<[(String, String); 3]> {
    if grid_points < 2 {
        return Err(Error::Domain(format!("need at least two grid points, got {grid_points}")));
    }
    let best = models
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Domain("plot data needs at least one model".into()))?;
    // Stretch the range to the largest observation so the ECDF reaches one.
    let upper = best.0.quantile(grid_quantile)?.max(data.max());
    let xs: Vec<f64> = (0..grid_points)
        .map(|i| upper * i as f64 / (grid_points - 1) as f64)
        .collect();
    let kinds: Vec<ModelKind> = models.iter().map(|(p, _)| p.kind()).collect();
    let header = |first: &[&str]| {
        let mut h: Vec<String> = first.iter().map(|s| s.to_string()).collect();
        h.extend(model_columns(&kinds));
        h
    };
    let per_model = |f: &dyn Fn(&ParamVector, f64) -> f64| {
        let mut cols = vec![xs.clone()];
        for (p, _) in models {
            cols.push(xs.iter().map(|&x| f(p, x)).collect());
        }
        cols
    };

    let density = grid_csv(header(&["x"]), &per_model(&|p, x| p.pdf(x)))?;
    let hazard = grid_csv(header(&["x"]), &per_model(&|p, x| p.hazard(x)))?;
    let mut overlay = per_model(&|p, x| p.cdf(x));
    let view = ecdf(data);
    overlay.insert(1, xs.iter().map(|&x| view.eval(x)).collect());
    let ecdf_file = grid_csv(header(&["x", "ecdf"]), &overlay)?;
    Ok([
        ("density.csv".into(), density),
        ("hazard.csv".into(), hazard),
        ("ecdf.csv".into(), ecdf_file),
    ])
}

fn cmd_plotdata(
    models: &[ModelKind],
    params: &[f64],
    args: &FitArgs,
    grid_points: usize,
    grid_quantile: f64,
    out: &Path,
) -> Result<()> {
    let data = load_dataset(&args.data)?;
    let kinds = if models.is_empty() { &ModelKind::ALL[..] } else { models };
    let fitted: Vec<(ParamVector, f64)> = if !params.is_empty() {
        if kinds.len() != 1 {
            return Err(Error::Domain("--params needs exactly one --models entry".into()));
        }
        vec![(ParamVector::new(kinds[0], params)?, 0.0)]
    } else {
        let table = compare(&data, kinds, &args.options(), args.pvalue_method)?;
        // Keep the requested column order.
        kinds
            .iter()
            .map(|k| {
                let r = table.row(*k).expect("one row per model");
                (r.params, r.aic)
            })
            .collect()
    };
    fs::create_dir_all(out).map_err(|e| Error::Io {
        path: out.to_path_buf(),
        message: e.to_string(),
    })?;
    for (name, body) in plot_grids(&data, &fitted, grid_points, grid_quantile)? {
        write_file(&out.join(name), &body)?;
    }
    Ok(())
}
