//! Table, csv and json renderings of fit and comparison results.

use serde_json::{json, Map, Value};

use crate::dist::ModelKind;
use crate::error::{Error, Result};
use crate::select::ComparisonRow;

/// Every parameter name across the models, in csv column order.
pub const PARAM_COLUMNS: [&str; 5] = ["lambda", "theta", "alpha", "beta", "a"];

/// Formats `v` with seven significant digits.
pub fn sig7(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..7).contains(&mag) {
        let decimals = (6 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.6e}")
    }
}

fn params_object(row: &ComparisonRow) -> Value {
    let mut m = Map::new();
    for (name, v) in row.params.names().iter().zip(row.params.values()) {
        m.insert((*name).to_string(), json!(v));
    }
    Value::Object(m)
}

pub fn row_json(row: &ComparisonRow) -> Value {
    json!({
        "model": row.kind.tag(),
        "params": params_object(row),
        "log_likelihood": row.log_likelihood,
        "aic": row.aic,
        "bic": row.bic,
        "ks_d": row.ks_d,
        "p_value": row.p_value,
        "converged": row.converged,
    })
}

pub fn rows_csv(rows: &[ComparisonRow], notes: &[String]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["model"];
    header.extend(PARAM_COLUMNS);
    header.extend(["log_likelihood", "aic", "bic", "ks_d", "p_value", "converged"]);
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let mut rec = vec![row.kind.tag().to_string()];
        let names = row.params.names();
        let values = row.params.values();
        for col in PARAM_COLUMNS {
            rec.push(
                names
                    .iter()
                    .position(|n| *n == col)
                    .map(|i| values[i].to_string())
                    .unwrap_or_default(),
            );
        }
        for v in [row.log_likelihood, row.aic, row.bic, row.ks_d, row.p_value] {
            rec.push(v.to_string());
        }
        rec.push(row.converged.to_string());
        w.write_record(&rec).map_err(csv_error)?;
    }
    let mut out = String::from_utf8(w.into_inner().map_err(|e| Error::Domain(e.to_string()))?)
        .expect("csv output is utf-8");
    for note in notes {
        out.push_str("# ");
        out.push_str(note);
        out.push('\n');
    }
    Ok(out)
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Domain(format!("csv: {e}"))
}

/// Left-aligned text table with a header rule.
pub fn text_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

pub fn rows_table(rows: &[ComparisonRow], notes: &[String]) -> String {
    let header: Vec<String> = ["model", "estimates", "logL", "AIC", "BIC", "KS", "p-value", "converged"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let est = r
                .params
                .names()
                .iter()
                .zip(r.params.values())
                .map(|(n, v)| format!("{n}={}", sig7(v)))
                .collect::<Vec<_>>()
                .join(" ");
            vec![
                r.kind.tag().to_string(),
                est,
                sig7(r.log_likelihood),
                sig7(r.aic),
                sig7(r.bic),
                sig7(r.ks_d),
                sig7(r.p_value),
                if r.converged { "yes" } else { "NO" }.to_string(),
            ]
        })
        .collect();
    let mut out = text_table(&header, &body);
    if !notes.is_empty() {
        out.push_str("\nNotes:\n");
        for (i, n) in notes.iter().enumerate() {
            out.push_str(&format!("  [{}] {n}\n", i + 1));
        }
    }
    out
}

/// Model tags as csv column headers.
pub fn model_columns(kinds: &[ModelKind]) -> Vec<String> {
    kinds.iter().map(|k| k.tag().to_string()).collect()
}
