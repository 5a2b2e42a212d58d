//! Plain numeric CSV: a header row of column names followed by rows of
//! decimal-point floats. No quoting or escaping; an optional `time` column
//! is carried through parsing and skipped by the ingest layer.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("file has no header row")]
    Empty,
    #[error("line {line}: expected {expected} fields, found {got}")]
    RowLength {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}, column {column}: not a number: {token:?}")]
    BadNumber {
        line: usize,
        column: usize,
        token: String,
    },
}

/// Column-oriented view of a parsed file.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn num_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Columns minus any `time` column (case-insensitive).
    pub fn data_columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.headers
            .iter()
            .zip(&self.columns)
            .filter(|(h, _)| !h.eq_ignore_ascii_case("time"))
            .map(|(h, c)| (h.as_str(), c.as_slice()))
    }
}

/// Parses header + float rows. Fully empty lines are skipped; every data
/// row must match the header width.
pub fn parse_numeric_csv(text: &str) -> Result<NumericTable, CsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header_line) = lines.next().ok_or(CsvError::Empty)?;
    let headers: Vec<String> = header_line
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    let width = headers.len();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); width];
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(CsvError::RowLength {
                line: line_no,
                expected: width,
                got: fields.len(),
            });
        }
        for (col, token) in fields.iter().enumerate() {
            let token = token.trim();
            let value: f64 = token.parse().map_err(|_| CsvError::BadNumber {
                line: line_no,
                column: col + 1,
                token: token.to_string(),
            })?;
            columns[col].push(value);
        }
    }
    Ok(NumericTable { headers, columns })
}

/// Writes columns in shortest-round-trip float form.
pub fn write_numeric_csv(headers: &[String], columns: &[Vec<f64>]) -> String {
    assert_eq!(headers.len(), columns.len());
    let rows = columns.first().map_or(0, Vec::len);
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in 0..rows {
        for (i, col) in columns.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}", col[row]));
        }
        out.push('\n');
    }
    out
}
