//! CSV tables with a fixed numeric format.

use std::path::{Path, PathBuf};

use glt_core::experiment::Table;

/// `v` with 6 significant digits: fixed notation for exponents in `[-5, 6)`,
/// scientific otherwise, trailing zeros removed.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "NA".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn format_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), format_number)
}

/// A rectangular table bound for `<output>/<name>`.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width must match the header of {}",
            self.name
        );
        self.rows.push(row);
    }

    /// Rows keyed by the row parameter, one column per column parameter.
    pub fn from_table(name: impl Into<String>, t: &Table) -> Self {
        let mut header = vec![format!("{}/{}", t.row_key, t.col_key)];
        header.extend(t.cols.iter().map(|c| c.to_string()));
        let mut out = Self {
            name: name.into(),
            header,
            rows: Vec::new(),
        };
        for (r, row) in t.rows.iter().zip(&t.cells) {
            let mut line = vec![r.to_string()];
            line.extend(row.iter().map(|&v| format_cell(v)));
            out.push(line);
        }
        out
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join(&self.name);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(path)
    }
}
