//! Matrix, symbol-field and report serialization.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use cylquant::{Operator64, SymbolField64};
use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

#[derive(Serialize)]
struct MatrixJson {
    epsilon: f64,
    n_max: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

/// JSON: `{"epsilon", "n_max", "rows": [[[re, im], ...], ...]}` in index order
/// `-N..=N`. CSV: `m,n,re,im` per nonzero entry.
pub fn render_matrix(op: &Operator64, format: Format) -> String {
    match format {
        Format::Json => {
            let d = op.dim();
            let rows = op.as_slice().chunks(d).map(|row| row.iter().map(|v| [v.re, v.im]).collect()).collect();
            let doc = MatrixJson { epsilon: op.eps().value(), n_max: op.window().n_max(), rows };
            let mut s = serde_json::to_string(&doc).expect("matrix serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("m,n,re,im\n");
            for (m, n, v) in op.iter_entries() {
                if v.re != 0.0 || v.im != 0.0 {
                    writeln!(s, "{m},{n},{:?},{:?}", v.re, v.im).unwrap();
                }
            }
            s
        }
    }
}

/// Optional extra columns comparing the field with a classical function.
pub struct Comparison {
    pub classical: Vec<cylquant::Complex64>,
}

#[derive(Serialize)]
struct FieldJson<'a> {
    epsilon: f64,
    n_max: usize,
    source: &'a str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

fn field_rows(field: &SymbolField64, comparison: Option<&Comparison>) -> (Vec<&'static str>, Vec<Vec<f64>>) {
    let mut columns = vec!["beta", "J", "re", "im"];
    if comparison.is_some() {
        columns.extend(["classical_re", "classical_im", "deviation"]);
    }
    let rows = field
        .iter()
        .enumerate()
        .map(|(i, ((b, j), v))| {
            let mut row = vec![b, j, v.re, v.im];
            if let Some(c) = comparison {
                let cl = c.classical[i];
                row.extend([cl.re, cl.im, (v - cl).norm()]);
            }
            row
        })
        .collect();
    (columns, rows)
}

pub fn render_field(field: &SymbolField64, n_max: usize, format: Format, comparison: Option<&Comparison>) -> String {
    let (columns, rows) = field_rows(field, comparison);
    match format {
        Format::Json => {
            let doc = FieldJson { epsilon: field.eps.value(), n_max, source: &field.source, columns, rows };
            let mut s = serde_json::to_string(&doc).expect("field serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = columns.join(",");
            s.push('\n');
            for row in rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use cylquant::closed_forms::op_J_power;
    use cylquant::{BasisWindow, Epsilon};

    #[test]
    fn json_schema() {
        let op = op_J_power(1, Epsilon::new(1.0).unwrap(), BasisWindow::new(1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&render_matrix(&op, Format::Json)).unwrap();
        assert_eq!(v["epsilon"], 1.0);
        assert_eq!(v["n_max"], 1);
        assert_eq!(v["rows"][0][0], serde_json::json!([-1.0, 0.0]));
        assert_eq!(v["rows"][2][2], serde_json::json!([1.0, 0.0]));
        assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn csv_omits_structural_zeros() {
        let op = op_J_power(1, Epsilon::new(1.0).unwrap(), BasisWindow::new(1)).unwrap();
        let csv = render_matrix(&op, Format::Csv);
        assert_eq!(csv, "m,n,re,im\n-1,-1,-1.0,0.0\n1,1,1.0,0.0\n");
    }
}
