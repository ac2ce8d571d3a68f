//! Matrix files: first line `n`, then `n` rows of `n` comma-separated complex
//! entries (`re`, `re+imi`, `imi`).

use std::path::Path;

use glt_core::{parse_complex, DenseMatrix};
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum ImportError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("line 1: expected the matrix order, found '{0}'")]
    BadOrder(String),
    #[error("row {row}: expected {expected} entries, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {col}: cannot parse '{text}'")]
    BadEntry {
        row: usize,
        col: usize,
        text: String,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

pub fn import_matrix(path: &Path) -> Result<DenseMatrix<f64>, ImportError> {
    let text = std::fs::read_to_string(path).map_err(|e| ImportError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix(&text)
}

/// Parses matrix text; blank lines are ignored. Rows and columns in errors are 1-based.
pub fn parse_matrix(text: &str) -> Result<DenseMatrix<f64>, ImportError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let head = lines.next().unwrap_or("");
    let n: usize = head
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ImportError::BadOrder(head.to_string()))?;
    let mut data: Vec<Complex64> = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (r, line) in lines.enumerate() {
        let row = r + 1;
        if row > n {
            return Err(ImportError::RowCount {
                expected: n,
                found: row,
            });
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n {
            return Err(ImportError::Ragged {
                row,
                expected: n,
                found: fields.len(),
            });
        }
        for (c, field) in fields.iter().enumerate() {
            let z = parse_complex(field).ok_or_else(|| ImportError::BadEntry {
                row,
                col: c + 1,
                text: field.trim().to_string(),
            })?;
            data.push(z);
        }
        rows = row;
    }
    if rows != n {
        return Err(ImportError::RowCount {
            expected: n,
            found: rows,
        });
    }
    Ok(DenseMatrix::from_row_major(n, n, data).expect("entries are finite and counted"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_complex_entries() {
        assert_eq!(
            parse_matrix("2\n1,0\n0,1\n").unwrap(),
            DenseMatrix::identity(2)
        );
        let m = parse_matrix("2\n1+2i, 0\n0, -3.5e-1-1i\n").unwrap();
        assert_eq!(m.get(0, 0), Complex64::new(1.0, 2.0));
        assert_eq!(m.get(1, 1), Complex64::new(-0.35, -1.0));
    }

    #[test]
    fn errors_locate_the_problem() {
        assert!(matches!(
            parse_matrix("2\n1,0\n0\n"),
            Err(ImportError::Ragged { row: 2, .. })
        ));
        assert!(matches!(
            parse_matrix("2\n1,0\n0,x\n"),
            Err(ImportError::BadEntry { row: 2, col: 2, .. })
        ));
        assert!(matches!(
            parse_matrix("2\n1,0\n"),
            Err(ImportError::RowCount { .. })
        ));
        assert!(matches!(
            parse_matrix("two\n"),
            Err(ImportError::BadOrder(_))
        ));
        assert!(matches!(
            parse_matrix("1\nnan\n"),
            Err(ImportError::BadEntry { .. })
        ));
    }
}
