//! CSV and PGM emitters, the `t,K` series reader, and atomic file output.
//!
//! Floats are written in shortest round-trip form unless a precision is
//! requested; output is LF-terminated and locale independent.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measures::KSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }
}

/// Shortest string that parses back to `v`, or `digits` significant digits.
pub fn format_float(v: f64, digits: Option<usize>) -> String {
    match digits {
        Some(d) if v.is_finite() => format!("{:.*e}", d.clamp(1, 17) - 1, v),
        _ => format!("{v:?}"),
    }
}

pub fn write_csv(table: &Table, precision: Option<usize>) -> Result<Vec<u8>> {
    let width = table.header.len();
    let mut out = String::new();
    out.push_str(&table.header.join(","));
    out.push('\n');
    for (i, row) in table.rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::input(format!("row {i} has {} fields, header has {width}", row.len())));
        }
        let fields: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Float(v) => format_float(*v, precision),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// The matrix's own min and max map to 0 and 255.
    MinMax,
    /// Fixed range `[lo, hi]`; values outside are clamped.
    Range { lo: f64, hi: f64 },
}

/// Plain (`P2`) grayscale image of a row-major `width × height` matrix.
/// A degenerate range renders all black.
pub fn write_pgm(values: &[f64], width: usize, height: usize, norm: Normalization) -> Result<Vec<u8>> {
    if width == 0 || height == 0 || values.len() != width * height {
        return Err(Error::input(format!(
            "matrix of {} values does not match {width}x{height}",
            values.len()
        )));
    }
    let bad: Vec<String> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_finite())
        .map(|(i, _)| format!("({}, {})", i % width, i / width))
        .collect();
    if !bad.is_empty() {
        return Err(Error::input(format!("non-finite cells at {}", bad.join(" "))));
    }
    let (lo, hi) = match norm {
        Normalization::MinMax => (
            values.iter().copied().fold(f64::INFINITY, f64::min),
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        Normalization::Range { lo, hi } => (lo, hi),
    };
    let span = hi - lo;
    let pixel = |v: f64| -> u8 {
        if !(span > 0.0) {
            return 0;
        }
        let x = ((v - lo) / span).clamp(0.0, 1.0) * 255.0;
        (x + 0.5).floor().min(255.0) as u8
    };
    let mut out = format!("P2\n{width} {height}\n255\n");
    for row in values.chunks(width) {
        let line: Vec<String> = row.iter().map(|&v| pixel(v).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

/// Reads a two-column `t,K` CSV with a header row into a uniform series.
pub fn read_kseries_csv(text: &str) -> Result<KSeries> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::input(format!("bad CSV header: {e}")))?.clone();
    if headers.len() != 2 {
        return Err(Error::input(format!("expected two columns t,K, found {}", headers.len())));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::input(format!("CSV row {}: {e}", i + 1)))?;
        let parse = |j: usize| -> Result<f64> {
            rec[j]
                .parse::<f64>()
                .map_err(|_| Error::input(format!("CSV row {}: cannot parse '{}'", i + 1, &rec[j])))
        };
        times.push(parse(0)?);
        values.push(parse(1)?);
    }
    match times.len() {
        0 => Err(Error::input("CSV has no data rows")),
        1 => KSeries::new(times[0], 1.0, values),
        n => {
            let t0 = times[0];
            let dt = (times[n - 1] - t0) / (n - 1) as f64;
            if !(dt > 0.0) {
                return Err(Error::input("time column must be increasing"));
            }
            for (i, &t) in times.iter().enumerate() {
                if (t - (t0 + i as f64 * dt)).abs() > 1e-6 * dt {
                    return Err(Error::input(format!("time column is not uniform at row {}", i + 1)));
                }
            }
            KSeries::new(t0, dt, values)
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so the target is either complete or untouched.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(["t", "K"]);
        assert_eq!(write_csv(&t, None).unwrap(), b"t,K\n");
    }

    #[test]
    fn floats_render_shortest() {
        let mut t = Table::new(["a", "b", "c"]);
        t.push(vec![0.1.into(), 3usize.into(), 1.0.into()]);
        t.push(vec![1e-20.into(), 7usize.into(), (-2.5).into()]);
        let out = String::from_utf8(write_csv(&t, None).unwrap()).unwrap();
        assert_eq!(out, "a,b,c\n0.1,3,1.0\n1e-20,7,-2.5\n");
        assert_eq!(write_csv(&t, None).unwrap(), write_csv(&t, None).unwrap());
    }

    #[test]
    fn precision_option() {
        assert_eq!(format_float(0.123456789, Some(3)), "1.23e-1");
        assert_eq!("1.23e-1".parse::<f64>().unwrap(), 0.123);
    }

    #[test]
    fn ragged_table_rejected() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![1.0.into()]);
        assert!(write_csv(&t, None).is_err());
    }

    #[test]
    fn pgm_basics() {
        assert_eq!(
            write_pgm(&[0.0, 3.0], 2, 1, Normalization::MinMax).unwrap(),
            b"P2\n2 1\n255\n0 255\n"
        );
        assert_eq!(
            write_pgm(&[0.7; 4], 2, 2, Normalization::MinMax).unwrap(),
            b"P2\n2 2\n255\n0 0\n0 0\n"
        );
        // 0.5 * 255 = 127.5 rounds up
        assert_eq!(
            write_pgm(&[0.0, 0.5, 1.0], 3, 1, Normalization::Range { lo: 0.0, hi: 1.0 }).unwrap(),
            b"P2\n3 1\n255\n0 128 255\n"
        );
        let err = write_pgm(&[0.0, f64::NAN, 1.0, f64::INFINITY], 2, 2, Normalization::MinMax).unwrap_err();
        assert!(err.to_string().contains("(1, 0)") && err.to_string().contains("(1, 1)"));
        assert!(write_pgm(&[], 0, 0, Normalization::MinMax).is_err());
    }

    #[test]
    fn reads_series() {
        let s = read_kseries_csv("t,K\n0,1\n1,0\n2,1\n").unwrap();
        assert_eq!(s.values(), &[1.0, 0.0, 1.0]);
        assert_eq!((s.t0(), s.dt()), (0.0, 1.0));
        assert!(read_kseries_csv("t,K\n0,1\n1,0\n3,1\n").is_err());
        assert!(read_kseries_csv("t,K\n").is_err());
        assert!(read_kseries_csv("t,K\n0,x\n").is_err());
        assert!(read_kseries_csv("t,K,z\n0,1,2\n").is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first\n").unwrap();
        write_atomic(&path, b"second\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn csv_round_trip(vals in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 1..50)) {
            let mut t = Table::new(["t", "K"]);
            for (i, v) in vals.iter().enumerate() {
                t.push(vec![(i as f64).into(), (*v).into()]);
            }
            let text = String::from_utf8(write_csv(&t, None).unwrap()).unwrap();
            let parsed: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
            prop_assert_eq!(parsed, vals);
        }
    }
}
