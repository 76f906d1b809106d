use std::fs;
use std::path::Path;

use crate::dist::Dataset;
use crate::error::{Error, Result};

/// Resolves a builtin dataset name or reads a text file.
///
/// Files hold one number per line or comma-separated values; blank lines and
/// lines starting with `#` are skipped.
pub fn load_dataset(source: &str) -> Result<Dataset> {
    if source.eq_ignore_ascii_case("lawless") {
        return Ok(Dataset::lawless());
    }
    let path = Path::new(source);
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_dataset(&text)
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                token: token.to_string(),
            })?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveObservation { line: line_no, value });
            }
            values.push(value);
        }
    }
    Dataset::new(values)
}
