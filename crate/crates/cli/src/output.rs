use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::failure::CmdResult;

/// Round-trip decimal with 17 significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.16e}")
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn print_json<T: Serialize + ?Sized>(value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value)?;
    let mut out = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Write a header and string rows as CSV.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CmdResult {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// File-name-safe form of a graph id.
pub fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn num_round_trips() {
        for x in [0.1, 1.0 / 3.0, 7.491647, -2.5e-300, 123456.789] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.0), "0");
    }

    #[test]
    fn stems() {
        assert_eq!(file_stem("cub10:3"), "cub10_3");
        assert_eq!(file_stem("a/b c"), "a_b_c");
    }
}
