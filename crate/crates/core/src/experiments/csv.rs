use std::io::Write;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Twelve significant digits, switching to exponent form outside `[1e-4, 1e12)`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let mag = v.abs();
    if !(1e-4..1e12).contains(&mag) {
        return format!("{v:.11e}");
    }
    let exp = mag.log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => f.write_str(&format_float(*v)),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Empty => Ok(()),
        }
    }
}

pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

pub fn write_csv<R: CsvRow, W: Write>(rows: &[R], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(R::HEADER).map_err(std::io::Error::from)?;
    for r in rows {
        out.write_record(r.cells().iter().map(Cell::to_string))
            .map_err(std::io::Error::from)?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("cells are ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(123.456), "123.456");
        assert_eq!(format_float(2e-7), "2.00000000000e-7");
        assert_eq!(format_float(-0.25), "-0.25");
    }
}
