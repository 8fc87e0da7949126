//! CSV rendering and crash-safe file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::runner::SweepRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "sweep_value,abs_term,unruh_term,ratio,concurrence";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn comment_line(config_hash: &str) -> String {
    format!("# ait-lab v{VERSION} config-hash={config_hash}")
}

/// Plain decimal notation rounded to `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    // The scientific form gives correctly rounded digits and the exponent.
    let sci = format!("{:.*e}", digits - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let mut sig: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let point = exp + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), sig)
    } else if point as usize >= sig.len() {
        sig.push_str(&"0".repeat(point as usize - sig.len()));
        sig
    } else {
        let (int, frac) = sig.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

pub fn render_csv(rows: &[SweepRow], config_hash: &str, digits: usize) -> String {
    let mut out = String::new();
    out.push_str(&comment_line(config_hash));
    out.push('\n');
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cells =
            [r.sweep_value, r.abs_term, r.unruh_term, r.ratio, r.concurrence].map(|v| format_significant(v, digits));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `<path>.partial`
pub fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".partial");
    PathBuf::from(name)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Writes `<path>.partial` and renames it over `path` once complete.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = partial_path(path);
    {
        let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(contents.as_bytes()).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Leaves whatever completed at `<path>.partial`; the final name is not touched.
pub fn write_partial(path: &Path, contents: &str) -> Result<PathBuf> {
    let tmp = partial_path(path);
    fs::write(&tmp, contents).map_err(|e| io_err(&tmp, e))?;
    Ok(tmp)
}
