//! CSV emission. Values print as `1.53437E-03` unless full precision is
//! requested, in which case they print in shortest round-trip form.
//!
//! | file kind | header |
//! |-----------|--------|
//! | errors    | `scheme,N,L1,L1_order,Linf,Linf_order,chi1,chi_inf` |
//! | 1D field  | `x,u` or `x,rho,u,p` |
//! | 2D field  | `x,y,rho,u,v,p` |
//! | slice     | `x,rho` or `y,rho` |
//! | summary   | `scheme,case,L1,Linf,overshoot,oscillation` |
//! | trace     | see [`crate::lop::TraceSink::HEADER`] |
//!
//! Missing entries (orders on the first level, χ without a baseline) are
//! left empty.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::euler;
use crate::metrics::ErrorReport;

/// Number formatting of every emitted value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Six significant digits, `1.53437E-03`.
    #[default]
    Table,
    /// Shortest representation that parses back to the same `f64`.
    Full,
}

impl Precision {
    pub fn format(self, v: f64) -> String {
        match self {
            Precision::Full => format!("{v:?}"),
            Precision::Table => table_number(v),
        }
    }

    fn opt(self, v: Option<f64>) -> String {
        v.map(|v| self.format(v)).unwrap_or_default()
    }
}

fn table_number(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.5E}");
    let (mantissa, exp) = s.split_once('E').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

/// Header and rows of one CSV file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| quote(c)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        out.write_all(self.render().as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Error tables of several schemes stacked into one file.
pub fn error_table(reports: &[ErrorReport], precision: Precision) -> Table {
    let mut t = Table::new(&["scheme", "N", "L1", "L1_order", "Linf", "Linf_order", "chi1", "chi_inf"]);
    for report in reports {
        for row in &report.rows {
            let n: Vec<String> = row.cells.iter().map(|n| n.to_string()).collect();
            t.push(vec![
                report.scheme.clone(),
                n.join("x"),
                precision.format(row.l1),
                precision.opt(row.l1_order),
                precision.format(row.linf),
                precision.opt(row.linf_order),
                precision.opt(row.chi1),
                precision.opt(row.chi_inf),
            ]);
        }
    }
    t
}

/// A 1D solution: `x,u` for scalars, `x,rho,u,p` for Euler states.
pub fn field_1d(centres: &[f64], state: &[f64], fields: usize, precision: Precision) -> Result<Table> {
    if state.len() != centres.len() * fields || !(fields == 1 || fields == 3) {
        return Err(Error::invalid(format!(
            "{} values do not form {} cells of {fields} fields",
            state.len(),
            centres.len()
        )));
    }
    let mut t = if fields == 1 {
        Table::new(&["x", "u"])
    } else {
        Table::new(&["x", "rho", "u", "p"])
    };
    for (x, q) in centres.iter().zip(state.chunks_exact(fields)) {
        let mut row = vec![precision.format(*x)];
        if fields == 1 {
            row.push(precision.format(q[0]));
        } else {
            let prim = euler::primitive_1d(&[q[0], q[1], q[2]]);
            row.extend(prim.iter().map(|v| precision.format(*v)));
        }
        t.push(row);
    }
    Ok(t)
}

/// A 2D Euler solution as `x,y,rho,u,v,p`, x varying fastest.
pub fn field_2d(centres: &[(f64, f64)], state: &[f64], precision: Precision) -> Result<Table> {
    if state.len() != centres.len() * 4 {
        return Err(Error::invalid(format!(
            "{} values do not form {} cells of 4 fields",
            state.len(),
            centres.len()
        )));
    }
    let mut t = Table::new(&["x", "y", "rho", "u", "v", "p"]);
    for ((x, y), q) in centres.iter().zip(state.chunks_exact(4)) {
        let prim = euler::primitive_2d(&[q[0], q[1], q[2], q[3]]);
        let mut row = vec![precision.format(*x), precision.format(*y)];
        row.extend(prim.iter().map(|v| precision.format(*v)));
        t.push(row);
    }
    Ok(t)
}

/// Density along a grid line; `coordinate` names the varying axis.
pub fn slice(coordinate: &str, positions: &[f64], density: &[f64], precision: Precision) -> Table {
    let mut t = Table::new(&[coordinate, "rho"]);
    for (x, r) in positions.iter().zip(density) {
        t.push(vec![precision.format(*x), precision.format(*r)]);
    }
    t
}

/// One row of a per-scheme summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scheme: String,
    /// Grid size, or the slice line.
    pub case: String,
    pub l1: Option<f64>,
    pub linf: Option<f64>,
    pub overshoot: Option<f64>,
    pub oscillation: Option<f64>,
}

pub fn summary(rows: &[SummaryRow], precision: Precision) -> Table {
    let mut t = Table::new(&["scheme", "case", "L1", "Linf", "overshoot", "oscillation"]);
    for r in rows {
        t.push(vec![
            r.scheme.clone(),
            r.case.clone(),
            precision.opt(r.l1),
            precision.opt(r.linf),
            precision.opt(r.overshoot),
            precision.opt(r.oscillation),
        ]);
    }
    t
}

/// Reads back the numeric columns of a CSV written by this module.
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("{} is empty", path.display()),
        })?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(Error::Parse {
                line: i + 2,
                message: format!("expected {} columns, found {}", header.len(), cells.len()),
            });
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            col.push(cell.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 2,
                message: format!("'{cell}' is not a number"),
            })?);
        }
    }
    Ok((header, columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_numbers() {
        assert_eq!(table_number(1.53437e-3), "1.53437E-03");
        assert_eq!(table_number(9.39243e-4), "9.39243E-04");
        assert_eq!(table_number(0.0), "0.00000E+00");
        assert_eq!(table_number(-123456.7), "-1.23457E+05");
        assert_eq!(table_number(2.5e-120), "2.50000E-120");
        assert_eq!(Precision::Full.format(0.1), "0.1");
    }

    #[test]
    fn empty_report_is_header_only() {
        let t = error_table(&[], Precision::Table);
        assert_eq!(t.render(), "scheme,N,L1,L1_order,Linf,Linf_order,chi1,chi_inf\n");
    }

    #[test]
    fn field_rows() {
        let t = field_1d(&[0.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0], 1, Precision::Table).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.header, vec!["x", "u"]);
        let q = euler::conserved_1d(1.0, 0.5, 2.0);
        let t = field_1d(&[0.0], &q, 3, Precision::Full).unwrap();
        assert_eq!(t.header, vec!["x", "rho", "u", "p"]);
        assert_eq!(t.rows[0][2], "0.5");
        assert!(field_1d(&[0.0, 1.0], &[1.0], 1, Precision::Table).is_err());
    }

    #[test]
    fn quoting() {
        let mut t = Table::new(&["scheme", "v"]);
        t.push(vec!["WENO-IM(2, 0.1)".into(), "1".into()]);
        assert_eq!(t.render().lines().nth(1).unwrap(), "\"WENO-IM(2, 0.1)\",1");
    }

    #[test]
    fn read_back() {
        let dir = std::env::temp_dir().join(format!("lopweno-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.csv");
        slice("x", &[0.25, 0.75], &[1.0, 1.5], Precision::Full).write(&path).unwrap();
        let (h, cols) = read_columns(&path).unwrap();
        assert_eq!(h, vec!["x", "rho"]);
        assert_eq!(cols[1], vec![1.0, 1.5]);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
