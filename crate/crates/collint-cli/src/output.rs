// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Column-labelled numeric tables and their CSV / JSON renderings.

use collint::numkit::{CMatrix, RMatrix, RVector};
use serde_json::{json, Value};

/// On-disk format of tabular outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with 17 significant digits in scientific notation.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"columns": [...], "rows": [[...]]}` with non-finite values as `null`.
    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(|&x| number(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => pretty(&self.to_json()),
        }
    }
}

/// `{:.16e}` for finite values, `nan`, `inf` or `-inf` otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number, or `null` when not finite.
pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Complex matrix as nested `[re, im]` pairs, the config input format.
pub fn complex_matrix(m: &CMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(|z| json!([number(z.re), number(z.im)])).collect()))
            .collect(),
    )
}

/// Real matrix as nested arrays.
pub fn real_matrix(m: &RMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(|&x| number(x)).collect()))
            .collect(),
    )
}

/// Real vector as an array.
pub fn real_vector(v: &RVector) -> Value {
    Value::Array(v.iter().map(|&x| number(x)).collect())
}

/// Column names `prefix[i,j].re`, `prefix[i,j].im` in row-major order.
pub fn complex_matrix_columns(prefix: &str, rows: usize, cols: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            out.push(format!("{prefix}[{i},{j}].re"));
            out.push(format!("{prefix}[{i},{j}].im"));
        }
    }
    out
}

/// Row-major `(re, im)` entries.
pub fn complex_matrix_cells(m: &CMatrix) -> Vec<f64> {
    m.row_iter()
        .flat_map(|r| r.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>())
        .collect()
}

/// Column names `prefix[i,j]` in row-major order.
pub fn real_matrix_columns(prefix: &str, rows: usize, cols: usize) -> Vec<String> {
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| format!("{prefix}[{i},{j}]")))
        .collect()
}

/// Row-major entries.
pub fn real_matrix_cells(m: &RMatrix) -> Vec<f64> {
    m.row_iter()
        .flat_map(|r| r.iter().copied().collect::<Vec<_>>())
        .collect()
}

/// Pretty-printed JSON with a trailing newline.
pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
