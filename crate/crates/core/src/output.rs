//! CSV emission. Every file has a fixed header; floats carry 12 significant
//! digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::meanfield::{CompartmentState, SweepGrid, Trajectory};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.<sig>g`: shortest of fixed or scientific notation, trailing zeros
/// dropped.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// [`fmt_sig`] at the default precision.
pub fn num(x: f64) -> String {
    fmt_sig(x, SIGNIFICANT_DIGITS)
}

/// `num(x)`, or an empty field for `None`.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

pub fn write_table<W, R>(out: W, header: &[&str], rows: R) -> std::io::Result<()>
where
    W: Write,
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()
}

/// Writes a table to `path`, creating parent directories.
pub fn save_table<R>(path: &Path, header: &[&str], rows: R) -> Result<()>
where
    R: IntoIterator<Item = Vec<String>>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_table(std::io::BufWriter::new(file), header, rows).map_err(|e| Error::io(path, e))
}

pub fn render_table<R>(header: &[&str], rows: R) -> String
where
    R: IntoIterator<Item = Vec<String>>,
{
    let mut buf = Vec::new();
    write_table(&mut buf, header, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub const TRAJECTORY_HEADER: [&str; 7] = ["t", "S", "A", "B", "AB", "a", "b"];
pub const GRID_HEADER: [&str; 9] = ["beta1", "beta2", "S", "A", "B", "AB", "a", "b", "a_over_ab"];
pub const GRID_PEAKS_HEADER: [&str; 8] = [
    "beta1", "beta2", "peak_A", "peak_B", "peak_AB", "final_t", "steady_t", "error",
];
pub const CONTOUR_HEADER: [&str; 2] = ["beta1", "beta2"];

fn state_fields(s: &CompartmentState) -> impl Iterator<Item = String> {
    s.to_array().into_iter().map(num)
}

pub fn trajectory_rows(tr: &Trajectory) -> Vec<Vec<String>> {
    tr.times
        .iter()
        .zip(&tr.states)
        .map(|(&t, s)| std::iter::once(num(t)).chain(state_fields(s)).collect())
        .collect()
}

/// One row per cell; failed cells keep their rates and leave the rest empty.
pub fn grid_rows(grid: &SweepGrid) -> Vec<Vec<String>> {
    grid.cells
        .iter()
        .map(|c| {
            let mut row = vec![num(c.beta1), num(c.beta2)];
            match c.final_state() {
                Some(s) => row.extend(state_fields(s)),
                None => row.extend(std::iter::repeat_n(String::new(), 6)),
            }
            row.push(opt_num(c.ratio()));
            row
        })
        .collect()
}

pub fn grid_peak_rows(grid: &SweepGrid) -> Vec<Vec<String>> {
    grid.cells
        .iter()
        .map(|c| {
            let mut row = vec![num(c.beta1), num(c.beta2)];
            match &c.summary {
                Some(s) => row.extend([
                    num(s.peak_a),
                    num(s.peak_b),
                    num(s.peak_ab),
                    num(s.final_time),
                    opt_num(s.steady_time),
                ]),
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
            row.push(c.error.clone().unwrap_or_default());
            row
        })
        .collect()
}

pub fn contour_rows(points: &[(f64, f64)]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|&(b1, b2)| vec![num(b1), num(b2)])
        .collect()
}

/// Fails with the offending path when `path` exists but is not a directory.
pub fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
    if path.is_dir() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{} is not a directory",
            path.display()
        )))
    }
}
