//! Comma-separated numeric files. No quoting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kcenter_core::Dataset;

use crate::DataError;

/// Reads a numeric CSV file. Rows in errors are 1-based file lines.
pub fn load_csv(path: &Path, has_header: bool) -> Result<Dataset, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, has_header)
}

pub fn parse_csv(text: &str, has_header: bool) -> Result<Dataset, DataError> {
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        if i == 0 && has_header {
            continue;
        }
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let row = i + 1;
        let mut got = 0;
        for (j, field) in line.split(',').enumerate() {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| DataError::Parse {
                row,
                col: j + 1,
                value: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DataError::NotFinite {
                    row,
                    col: j + 1,
                    value: field.to_string(),
                });
            }
            values.push(v);
            got += 1;
        }
        match width {
            None => width = Some(got),
            Some(expected) if expected != got => {
                return Err(DataError::Ragged { row, expected, got })
            }
            _ => {}
        }
        rows += 1;
    }
    let Some(width) = width else {
        return Err(DataError::Empty);
    };
    Ok(Dataset::new(rows, width, values)?)
}

/// Formats a dataset so that [`parse_csv`] reads back the same bits.
pub fn to_csv(d: &Dataset, header: Option<&[&str]>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for row in d.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, d: &Dataset, header: Option<&[&str]>) -> Result<(), DataError> {
    fs::write(path, to_csv(d, header)).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_header() {
        let d = parse_csv("1,2\n3,4\n5,6", false).unwrap();
        assert_eq!((d.n_samples(), d.n_attrs()), (3, 2));
        let d = parse_csv("a,b\n1,2", true).unwrap();
        assert_eq!((d.n_samples(), d.n_attrs()), (1, 2));
        assert_eq!(d.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn errors_name_the_cell() {
        match parse_csv("1,x\n", false) {
            Err(DataError::Parse { row: 1, col: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_csv("1,2\n3\n", false),
            Err(DataError::Ragged { row: 2, expected: 2, got: 1 })
        ));
        assert!(matches!(
            parse_csv("1,1e400\n", false),
            Err(DataError::NotFinite { row: 1, col: 2, .. })
        ));
        assert!(matches!(parse_csv("a,b\n", true), Err(DataError::Empty)));
        assert!(matches!(parse_csv("nan\n", false), Err(DataError::NotFinite { .. })));
    }
}
