use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pgdus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgdus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn fit_json_document() {
    let o = pgdus(&["fit", "--model", "pgduse", "--data", "lawless", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"], "PGDUSE");
    assert!((v["params"]["lambda"].as_f64().unwrap() - 0.0336214).abs() < 5e-5);
    assert!((v["params"]["theta"].as_f64().unwrap() - 3.8065763).abs() < 5e-3);
    for key in ["log_likelihood", "aic", "bic", "ks_d", "p_value"] {
        assert!(v[key].is_number(), "{key}");
    }
    assert_eq!(v["converged"], true);
}

#[test]
fn fit_exponential_table() {
    let o = pgdus(&["fit", "--model", "ed"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("theta=0.01384308"), "{}", stdout(&o));
}

#[test]
fn fit_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing here\n\n").unwrap();
    let o = pgdus(&["fit", "--model", "pgduse", "--data", empty.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("dataset is empty"), "{}", stderr(&o));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1.0\n-2.0\n").unwrap();
    let o = pgdus(&["fit", "--model", "ed", "--data", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = pgdus(&["fit", "--model", "weibull"]);
    assert!(!o.status.success());
    let o = pgdus(&["fit", "--model", "ed", "--data", "/no/such/file"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("/no/such/file"));
}

#[test]
fn fit_reports_non_convergence() {
    // One observation: the two-parameter likelihood has no interior maximum.
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.txt");
    fs::write(&one, "4.2\n").unwrap();
    let o = pgdus(&["fit", "--model", "pgduse", "--data", one.to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["converged"], false);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("did not converge"));
}

#[test]
fn compare_ranks_and_annotates() {
    let o = pgdus(&["compare", "--data", "lawless"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let first_row = text.lines().nth(2).unwrap();
    assert!(first_row.starts_with("PGDUSE"), "{text}");
    assert!(text.contains("Notes:"));
    assert!(text.contains("-127.4622"));
    assert!(text.contains("DUSE/KME BIC"));

    let o = pgdus(&["compare", "--data", "lawless", "--models", "ed", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert!(v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn csv_and_json_agree() {
    let csv_out = stdout(&pgdus(&["compare", "--format", "csv"]));
    let json_out: Value = serde_json::from_str(&stdout(&pgdus(&["compare", "--format", "json"]))).unwrap();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(csv_out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let json_rows = json_out["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for (rec, jrow) in rows.iter().zip(json_rows) {
        assert_eq!(rec.get(0).unwrap(), jrow["model"].as_str().unwrap());
        for key in ["log_likelihood", "aic", "bic", "ks_d", "p_value"] {
            let idx = headers.iter().position(|h| h == key).unwrap();
            let a: f64 = rec.get(idx).unwrap().parse().unwrap();
            let b = jrow[key].as_f64().unwrap();
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{key}: {a} vs {b}");
        }
        for (name, value) in jrow["params"].as_object().unwrap() {
            let idx = headers.iter().position(|h| h == name).unwrap();
            let a: f64 = rec.get(idx).unwrap().parse().unwrap();
            assert_eq!(a, value.as_f64().unwrap());
        }
    }
}

#[test]
fn eval_points() {
    let o = pgdus(&["eval", "--model", "pgduse", "--params", "1,2", "--fn", "cdf", "--at", "1.0", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let val = v["values"][0]["value"].as_f64().unwrap();
    assert!((val - 0.26324).abs() < 1e-5);

    let o = pgdus(&["eval", "--model", "pgduse", "--params", "1,2", "--fn", "quantile", "--at", "0,1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"][0]["value"].as_f64().unwrap(), 0.0);
    assert!(v["values"][1]["error"].as_str().unwrap().contains("domain error"));
    assert!(!o.status.success());

    let o = pgdus(&["eval", "--model", "pgduse", "--params", "1", "--fn", "pdf", "--at", "1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("takes 2 parameter"));
}

#[test]
fn sampling() {
    let args = ["sample", "--model", "pgduse", "--params", "1,2", "--n", "5", "--seed", "9"];
    let (a, b) = (pgdus(&args), pgdus(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);

    let o = pgdus(&["sample", "--model", "ed", "--params", "1", "--n", "0"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());

    let o = pgdus(&["sample", "--model", "pgduse", "--params", "1,2", "--n", "10000", "--seed", "4"]);
    let xs: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    assert!((mean - 1.834_838_403).abs() < 3.0 * se, "{mean} {se}");
}

fn read_grid(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let headers = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (headers, rows)
}

#[test]
fn plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = pgdus(&["plotdata", "--data", "lawless", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["density.csv", "hazard.csv", "ecdf.csv"] {
        let (headers, rows) = read_grid(&dir.path().join(name));
        assert_eq!(rows.len(), 512, "{name}");
        assert!(headers.contains(&"PGDUSE".to_string()));
        assert_eq!(rows[0][0], 0.0);
    }
    let (headers, rows) = read_grid(&dir.path().join("ecdf.csv"));
    assert_eq!(headers[1], "ecdf");
    assert_eq!(rows.last().unwrap()[1], 1.0);

    let (headers, rows) = read_grid(&dir.path().join("density.csv"));
    let col = headers.iter().position(|h| h == "PGDUSE").unwrap();
    let area: f64 = rows
        .windows(2)
        .map(|w| 0.5 * (w[1][0] - w[0][0]) * (w[0][col] + w[1][col]))
        .sum();
    assert!((area - 1.0).abs() < 0.01, "{area}");

    let o = pgdus(&[
        "plotdata", "--models", "pgduse", "--params", "1,2", "--grid-points", "10", "--out",
        dir.path().join("explicit").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_grid(&dir.path().join("explicit/hazard.csv"));
    assert_eq!(rows.len(), 10);
}
