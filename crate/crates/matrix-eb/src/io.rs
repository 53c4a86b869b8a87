//! Matrix record formats shared by the library and the CLI.
//!
//! Text format, one matrix per record:
//!
//! ```text
//! # comment lines start with '#'
//! d=3
//! 0.5 0.0 0.0
//! 0.0 0.5 0.0
//! 0.0 0.0 0.5
//! ```
//!
//! CSV variant, long-form with header `dim,i,j,value`: every record is the
//! `dim²` row-major entries of one matrix, records listed back to back, and
//! `dim` constant within a file.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::symmat::{SymMat, SymMatError};

#[derive(Debug, Error)]
pub enum MatrixIoError {
    #[error("read failed: {0}")]
    Read(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("record starting at line {line}: {source}")]
    BadMatrix {
        line: usize,
        #[source]
        source: SymMatError,
    },
    #[error("no matrix records found")]
    Empty,
}

fn parse_err(line: usize, msg: impl Into<String>) -> MatrixIoError {
    MatrixIoError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads every `d=<int>` record from the text format. Symmetrization uses the
/// relative default tolerance, so hand-edited files with tiny skew still load.
pub fn read_matrices<R: BufRead>(reader: R) -> Result<Vec<SymMat>, MatrixIoError> {
    let mut out = Vec::new();
    let mut lines = reader.lines().enumerate();

    while let Some((idx, line)) = lines.next() {
        let (idx, line) = (idx + 1, line?);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(dim_str) = trimmed.strip_prefix("d=") else {
            return Err(parse_err(idx, format!("expected 'd=<int>', got '{trimmed}'")));
        };
        let dim: usize = dim_str
            .trim()
            .parse()
            .map_err(|_| parse_err(idx, format!("bad dimension '{dim_str}'")))?;
        if dim == 0 {
            return Err(parse_err(idx, "dimension must be positive"));
        }

        let header_line = idx;
        let mut data = Vec::with_capacity(dim * dim);
        let mut rows_read = 0;
        while rows_read < dim {
            let Some((row_idx, row_line)) = lines.next() else {
                return Err(parse_err(
                    header_line,
                    format!("record truncated: expected {dim} rows, found {rows_read}"),
                ));
            };
            let row_line = row_line?;
            let row_trimmed = row_line.trim();
            if row_trimmed.is_empty() || row_trimmed.starts_with('#') {
                continue;
            }
            if row_trimmed.starts_with("d=") {
                return Err(parse_err(
                    header_line,
                    format!("record truncated: expected {dim} rows, found {rows_read}"),
                ));
            }
            let values: Result<Vec<f64>, _> = row_trimmed
                .split_whitespace()
                .map(|tok| tok.parse::<f64>())
                .collect();
            let values = values
                .map_err(|_| parse_err(row_idx + 1, format!("bad number in '{row_trimmed}'")))?;
            if values.len() != dim {
                return Err(parse_err(
                    row_idx + 1,
                    format!("expected {dim} values, found {}", values.len()),
                ));
            }
            data.extend(values);
            rows_read += 1;
        }
        let m = SymMat::from_dense_auto(dim, &data)
            .map_err(|source| MatrixIoError::BadMatrix {
                line: header_line,
                source,
            })?;
        out.push(m);
    }
    Ok(out)
}

pub fn read_matrices_str(text: &str) -> Result<Vec<SymMat>, MatrixIoError> {
    read_matrices(text.as_bytes())
}

/// Writes matrices in the text format, 17 significant digits so values
/// round-trip exactly.
pub fn write_matrices<W: Write>(writer: &mut W, matrices: &[SymMat]) -> std::io::Result<()> {
    for m in matrices {
        let d = m.dim();
        writeln!(writer, "d={d}")?;
        for i in 0..d {
            let row: Vec<String> = (0..d).map(|j| format!("{:.17e}", m.get(i, j))).collect();
            writeln!(writer, "{}", row.join(" "))?;
        }
    }
    Ok(())
}

/// Reads the long-form CSV variant (`dim,i,j,value` header).
pub fn read_matrices_csv<R: BufRead>(reader: R) -> Result<Vec<SymMat>, MatrixIoError> {
    let mut dim: Option<usize> = None;
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    let mut saw_header = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed.replace(' ', "") != "dim,i,j,value" {
                return Err(parse_err(idx + 1, "expected header 'dim,i,j,value'"));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_err(idx + 1, "expected 4 comma-separated fields"));
        }
        let d: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(idx + 1, "bad dim"))?;
        match dim {
            None => dim = Some(d),
            Some(existing) if existing != d => {
                return Err(parse_err(idx + 1, "dim must be constant within a file"));
            }
            _ => {}
        }
        let i: usize = fields[1].parse().map_err(|_| parse_err(idx + 1, "bad i"))?;
        let j: usize = fields[2].parse().map_err(|_| parse_err(idx + 1, "bad j"))?;
        let value: f64 = fields[3]
            .parse()
            .map_err(|_| parse_err(idx + 1, "bad value"))?;
        if i >= d || j >= d {
            return Err(parse_err(idx + 1, format!("index ({i},{j}) out of range for dim {d}")));
        }
        cells.push((i, j, value));
    }

    let Some(d) = dim else {
        return Err(MatrixIoError::Empty);
    };
    let per_record = d * d;
    if !cells.len().is_multiple_of(per_record) {
        return Err(parse_err(
            0,
            format!(
                "cell count {} is not a multiple of dim²={per_record}",
                cells.len()
            ),
        ));
    }
    let mut out = Vec::new();
    for (rec, chunk) in cells.chunks(per_record).enumerate() {
        let mut data = vec![f64::NAN; per_record];
        for &(i, j, v) in chunk {
            data[i * d + j] = v;
        }
        if data.iter().any(|v| v.is_nan()) {
            return Err(parse_err(0, format!("record {rec} does not cover all {per_record} cells")));
        }
        let m = SymMat::from_dense_auto(d, &data)
            .map_err(|source| MatrixIoError::BadMatrix { line: 0, source })?;
        out.push(m);
    }
    Ok(out)
}

pub fn write_matrices_csv<W: Write>(writer: &mut W, matrices: &[SymMat]) -> std::io::Result<()> {
    writeln!(writer, "dim,i,j,value")?;
    for m in matrices {
        let d = m.dim();
        for i in 0..d {
            for j in 0..d {
                writeln!(writer, "{d},{i},{j},{:.17e}", m.get(i, j))?;
            }
        }
    }
    Ok(())
}
