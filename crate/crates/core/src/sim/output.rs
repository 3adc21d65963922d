//! CSV and metadata emission.
//!
//! The CSV is the contract with downstream plotting tools:
//!
//! ```text
//! sweep_var,sweep_value,strategy,mean_stm,std_stm,mean_sse,mean_see,n_drops
//! ```
//!
//! Floats use 9 significant digits in `%.9g` style, `.` as decimal separator
//! and `\n` line endings. A sibling `<path>.meta` records the run settings.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;

use super::rng::{PRNG_NAME, STREAM_RULE};
use super::sweep::SweepTable;

pub const CSV_HEADER: &str = "sweep_var,sweep_value,strategy,mean_stm,std_stm,mean_sse,mean_see,n_drops";

pub const ARTIFACT_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Formats like C's `%.{sig}g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
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

pub fn csv_string(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.sweep_var,
            format_sig(r.sweep_value, 9),
            r.strategy,
            format_sig(r.mean_stm, 9),
            format_sig(r.std_stm, 9),
            format_sig(r.mean_sse, 9),
            format_sig(r.mean_see, 9),
            r.n_drops
        );
    }
    out
}

pub fn meta_string(table: &SweepTable) -> String {
    let mut out = String::new();
    let values: Vec<String> = table.values.iter().map(|v| format_sig(*v, 9)).collect();
    let strategies: Vec<&str> = table.strategies.iter().map(|s| s.as_str()).collect();
    let sync = &table.options.kb_sync;
    let _ = writeln!(out, "artifact_version = {ARTIFACT_VERSION}");
    let _ = writeln!(out, "prng = {PRNG_NAME}");
    let _ = writeln!(out, "stream_rule = {STREAM_RULE}");
    let _ = writeln!(out, "seed = {}", table.config.seed);
    let _ = writeln!(out, "n_drops = {}", table.config.n_drops);
    let _ = writeln!(out, "sweep_var = {}", table.vary);
    let _ = writeln!(out, "sweep_values = {}", values.join(","));
    let _ = writeln!(out, "strategies = {}", strategies.join(","));
    let _ = writeln!(out, "kb_sync = {}", if sync.enabled { "on" } else { "off" });
    let _ = writeln!(out, "kb_payload_bits_per_version = {:?}", sync.payload_bits_per_version);
    let _ = writeln!(out, "kb_cost_weight = {:?}", sync.cost_weight);
    let _ = writeln!(out, "oracle_grid = {}", table.options.oracle_grid);
    out.push_str("\n# configuration\n");
    out.push_str(&table.config.to_cfg_string());
    out
}

/// `<path>.meta`
pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// Writes the table CSV and its metadata sibling.
pub fn write_csv(table: &SweepTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, csv_string(table))?;
    std::fs::write(meta_path(path), meta_string(table))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        // expected strings from printf("%.9g")
        let cases = [
            (0.0, "0"),
            (100.0, "100"),
            (0.7, "0.7"),
            (123456.789, "123456.789"),
            (1234567890.0, "1.23456789e+09"),
            (1e-5, "1e-05"),
            (0.0001, "0.0001"),
            (2.5e-3, "0.0025"),
            (-42.5, "-42.5"),
            (1.0 / 3.0, "0.333333333"),
            (999999999.5, "1e+09"),
            (12345.6789012, "12345.6789"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig(x, 9), want, "{x}");
        }
    }

    #[test]
    fn meta_path_appends_suffix() {
        assert_eq!(meta_path(Path::new("out/sweep.csv")), PathBuf::from("out/sweep.csv.meta"));
    }
}
