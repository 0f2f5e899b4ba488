//! Population file ingestion and output writing.
//!
//! The only input format is comma-separated UTF-8 text with a header row
//! naming the two columns `y` and `x` (either order) and one unit per row;
//! frame order is row order.

use std::fs;
use std::path::Path;

use sysest_core::popmodel::Population;

use crate::error::{AppError, Result};

/// Read a population from a CSV file, attaching the path to every error.
pub fn read_population(path: &Path) -> Result<Population> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Data(format!("cannot read {}: {e}", path.display())))?;
    parse_population(&text).map_err(|e| match e {
        AppError::Data(m) => AppError::Data(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parse CSV text with header `y,x` (or `x,y`) into a population.
///
/// Data rows are reported with 1-based numbers (the header is row 0 in that
/// numbering); every field must parse as a finite real.
pub fn parse_population(text: &str) -> Result<Population> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| AppError::Data("empty input: expected a header row naming y and x".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.len() != 2 {
        return Err(AppError::Data(format!(
            "header must have exactly the two columns y and x, got {} columns",
            names.len()
        )));
    }
    let y_col = names
        .iter()
        .position(|&c| c == "y")
        .ok_or_else(|| AppError::Data("header is missing column y".into()))?;
    let x_col = names
        .iter()
        .position(|&c| c == "x")
        .ok_or_else(|| AppError::Data("header is missing column x".into()))?;

    let mut ys = Vec::new();
    let mut xs = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(AppError::Data(format!(
                "parse error at row {row}: expected 2 fields, got {}",
                fields.len()
            )));
        }
        let mut parsed = [0.0f64; 2];
        for (j, field) in fields.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                AppError::Data(format!(
                    "parse error at row {row}: `{}` is not a number",
                    field.trim()
                ))
            })?;
            if !v.is_finite() {
                return Err(AppError::Data(format!(
                    "parse error at row {row}: `{}` is not finite",
                    field.trim()
                )));
            }
            parsed[j] = v;
        }
        ys.push(parsed[y_col]);
        xs.push(parsed[x_col]);
    }
    if ys.len() < 2 {
        return Err(AppError::Data(format!(
            "population needs at least 2 units, got {}",
            ys.len()
        )));
    }
    Population::new(ys, xs).map_err(AppError::from)
}

/// Write rendered output to `path`, or to stdout when `path` is `None`.
pub fn emit(out: Option<&Path>, rendered: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, rendered)
            .map_err(|e| AppError::Data(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_column_orders() {
        let a = parse_population("y,x\n1,10\n2,20\n").unwrap();
        assert_eq!(a.y(), &[1.0, 2.0]);
        assert_eq!(a.x(), &[10.0, 20.0]);
        let b = parse_population("x,y\n10,1\n20,2\n").unwrap();
        assert_eq!(b.y(), &[1.0, 2.0]);
        assert_eq!(b.x(), &[10.0, 20.0]);
    }

    #[test]
    fn malformed_rows_carry_one_based_numbers() {
        let err = parse_population("y,x\nabc,1\n").unwrap_err();
        assert!(matches!(&err, AppError::Data(m) if m.contains("row 1")), "{err}");
        let err = parse_population("y,x\n1,2\n3\n").unwrap_err();
        assert!(matches!(&err, AppError::Data(m) if m.contains("row 2")), "{err}");
    }

    #[test]
    fn schema_errors_name_the_missing_column() {
        let err = parse_population("y,z\n1,2\n3,4\n").unwrap_err();
        assert!(matches!(&err, AppError::Data(m) if m.contains("missing column x")), "{err}");
        let err = parse_population("a,b,c\n1,2,3\n").unwrap_err();
        assert!(matches!(&err, AppError::Data(m) if m.contains("two columns")), "{err}");
    }

    #[test]
    fn tiny_populations_are_rejected() {
        let err = parse_population("y,x\n1,2\n").unwrap_err();
        assert!(matches!(&err, AppError::Data(m) if m.contains("at least 2")), "{err}");
    }

    #[test]
    fn missing_file_error_names_the_path() {
        let err = read_population(Path::new("/no/such/file.csv")).unwrap_err();
        assert!(
            matches!(&err, AppError::Data(m) if m.contains("/no/such/file.csv")),
            "{err}"
        );
    }
}
