//! Simulation configuration: the `key = value` file format and validation.
//!
//! The file format is line oriented. Blank lines and `#` comments are ignored,
//! every other line must be `key = value` with a known key. Keys not present in
//! the file keep their default values.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{ConfigErrors, Error, RangeError, Result};

/// The shipped defaults, byte for byte.
pub const DEFAULT_CFG: &str = include_str!("../default.cfg");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    /// Side of the square deployment area (m).
    pub area_side: f64,
    pub n_bs: usize,
    pub n_td: usize,
    /// Fraction of traffic pairs that are terminal-server; the rest are terminal-terminal.
    pub scenario3_fraction: f64,
    /// Bandwidth budget per base station (Hz).
    pub bw_per_bs: f64,
    /// Terminal transmit power (mW).
    pub tx_power_td: f64,
    /// Base-station transmit power per downlink (mW).
    pub tx_power_bs: f64,
    /// Noise power spectral density (mW/Hz).
    pub noise_psd: f64,
    /// Uncompressed message length (bits).
    pub msg_len_source: f64,
    /// Maximum semantic compression ratio, strictly below 1.
    pub compress_max: f64,
    /// Logistic slope of the accuracy curves (1/dB).
    pub acc_slope: f64,
    pub acc_midpoint_sem: f64,
    pub acc_midpoint_bit: f64,
    pub tau_mean: f64,
    /// Pairs matched below this degree must use bit transmission.
    pub tau_min_semcom: f64,
    pub coding_ability_range: (f64, f64),
    pub interference_enabled: bool,
    /// Computing power per unit coding ability of a semantic endpoint (mW).
    pub p_comp_coeff: f64,
    pub n_drops: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            area_side: 2000.0,
            n_bs: 16,
            n_td: 200,
            scenario3_fraction: 0.5,
            bw_per_bs: 10e6,
            tx_power_td: 200.0,
            tx_power_bs: 1000.0,
            noise_psd: 3.9811e-18,
            msg_len_source: 8000.0,
            compress_max: 0.8,
            acc_slope: 0.3,
            acc_midpoint_sem: 5.0,
            acc_midpoint_bit: 8.0,
            tau_mean: 0.7,
            tau_min_semcom: 0.3,
            coding_ability_range: (0.6, 1.0),
            interference_enabled: false,
            p_comp_coeff: 100.0,
            n_drops: 100,
            seed: 42,
        }
    }
}

const KEYS: [&str; 20] = [
    "area_side",
    "n_bs",
    "n_td",
    "scenario3_fraction",
    "bw_per_bs",
    "tx_power_td",
    "tx_power_bs",
    "noise_psd",
    "msg_len_source",
    "compress_max",
    "acc_slope",
    "acc_midpoint_sem",
    "acc_midpoint_bit",
    "tau_mean",
    "tau_min_semcom",
    "coding_ability_range",
    "interference_enabled",
    "p_comp_coeff",
    "n_drops",
    "seed",
];

impl SimConfig {
    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<SimConfig> {
        let mut cfg = SimConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            cfg.set(key, value).map_err(|message| Error::Parse {
                line: line_no,
                message,
            })?;
            seen.push(key.to_string());
        }
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<SimConfig> {
        let text = std::fs::read_to_string(path)?;
        SimConfig::parse(&text)
    }

    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num(v: &str) -> std::result::Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("`{v}` is not a number"))
        }
        fn count(v: &str) -> std::result::Result<usize, String> {
            if let Ok(n) = v.parse::<usize>() {
                return Ok(n);
            }
            let x = num(v)?;
            if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 {
                Ok(x as usize)
            } else {
                Err(format!("`{v}` is not a non-negative integer"))
            }
        }
        match key {
            "area_side" => self.area_side = num(value)?,
            "n_bs" => self.n_bs = count(value)?,
            "n_td" => self.n_td = count(value)?,
            "scenario3_fraction" => self.scenario3_fraction = num(value)?,
            "bw_per_bs" => self.bw_per_bs = num(value)?,
            "tx_power_td" => self.tx_power_td = num(value)?,
            "tx_power_bs" => self.tx_power_bs = num(value)?,
            "noise_psd" => self.noise_psd = num(value)?,
            "msg_len_source" => self.msg_len_source = num(value)?,
            "compress_max" => self.compress_max = num(value)?,
            "acc_slope" => self.acc_slope = num(value)?,
            "acc_midpoint_sem" => self.acc_midpoint_sem = num(value)?,
            "acc_midpoint_bit" => self.acc_midpoint_bit = num(value)?,
            "tau_mean" => self.tau_mean = num(value)?,
            "tau_min_semcom" => self.tau_min_semcom = num(value)?,
            "coding_ability_range" => {
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| format!("expected `[lo, hi]`, got `{value}`"))?;
                let (lo, hi) = inner
                    .split_once(',')
                    .ok_or_else(|| format!("expected `[lo, hi]`, got `{value}`"))?;
                self.coding_ability_range = (num(lo.trim())?, num(hi.trim())?);
            }
            "interference_enabled" => {
                self.interference_enabled = match value {
                    "true" | "on" | "1" => true,
                    "false" | "off" | "0" => false,
                    _ => return Err(format!("`{value}` is not a boolean")),
                }
            }
            "p_comp_coeff" => self.p_comp_coeff = num(value)?,
            "n_drops" => self.n_drops = count(value)?,
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| format!("`{value}` is not a 64-bit unsigned integer"))?
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Renders the configuration in the file format, one key per line in
    /// canonical order. `parse(to_cfg_string())` reproduces the config exactly.
    pub fn to_cfg_string(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.value_string(key));
        }
        out
    }

    fn value_string(&self, key: &str) -> String {
        match key {
            "area_side" => format!("{:?}", self.area_side),
            "n_bs" => self.n_bs.to_string(),
            "n_td" => self.n_td.to_string(),
            "scenario3_fraction" => format!("{:?}", self.scenario3_fraction),
            "bw_per_bs" => format!("{:?}", self.bw_per_bs),
            "tx_power_td" => format!("{:?}", self.tx_power_td),
            "tx_power_bs" => format!("{:?}", self.tx_power_bs),
            "noise_psd" => format!("{:?}", self.noise_psd),
            "msg_len_source" => format!("{:?}", self.msg_len_source),
            "compress_max" => format!("{:?}", self.compress_max),
            "acc_slope" => format!("{:?}", self.acc_slope),
            "acc_midpoint_sem" => format!("{:?}", self.acc_midpoint_sem),
            "acc_midpoint_bit" => format!("{:?}", self.acc_midpoint_bit),
            "tau_mean" => format!("{:?}", self.tau_mean),
            "tau_min_semcom" => format!("{:?}", self.tau_min_semcom),
            "coding_ability_range" => format!(
                "[{:?}, {:?}]",
                self.coding_ability_range.0, self.coding_ability_range.1
            ),
            "interference_enabled" => self.interference_enabled.to_string(),
            "p_comp_coeff" => format!("{:?}", self.p_comp_coeff),
            "n_drops" => self.n_drops.to_string(),
            "seed" => self.seed.to_string(),
            _ => unreachable!("unknown key {key}"),
        }
    }
}

/// Checks every constraint and reports all violations at once.
pub fn validate_config(raw: SimConfig) -> Result<SimConfig> {
    let mut errors = Vec::new();
    let mut check = |ok: bool, field: &'static str, value: String, allowed: &'static str| {
        if !ok {
            errors.push(RangeError {
                field,
                value,
                allowed,
            });
        }
    };
    let pos = |x: f64| x.is_finite() && x > 0.0;
    let unit = |x: f64| (0.0..=1.0).contains(&x);

    check(pos(raw.area_side), "area_side", raw.area_side.to_string(), "> 0");
    check(raw.n_bs >= 1, "n_bs", raw.n_bs.to_string(), ">= 1");
    check(raw.n_td >= 1, "n_td", raw.n_td.to_string(), ">= 1");
    check(
        unit(raw.scenario3_fraction),
        "scenario3_fraction",
        raw.scenario3_fraction.to_string(),
        "[0, 1]",
    );
    check(pos(raw.bw_per_bs), "bw_per_bs", raw.bw_per_bs.to_string(), "> 0");
    check(pos(raw.tx_power_td), "tx_power_td", raw.tx_power_td.to_string(), "> 0");
    check(pos(raw.tx_power_bs), "tx_power_bs", raw.tx_power_bs.to_string(), "> 0");
    check(pos(raw.noise_psd), "noise_psd", raw.noise_psd.to_string(), "> 0");
    check(
        pos(raw.msg_len_source),
        "msg_len_source",
        raw.msg_len_source.to_string(),
        "> 0",
    );
    check(
        (0.0..1.0).contains(&raw.compress_max),
        "compress_max",
        raw.compress_max.to_string(),
        "[0, 1)",
    );
    check(pos(raw.acc_slope), "acc_slope", raw.acc_slope.to_string(), "> 0");
    check(
        raw.acc_midpoint_sem.is_finite(),
        "acc_midpoint_sem",
        raw.acc_midpoint_sem.to_string(),
        "finite",
    );
    check(
        raw.acc_midpoint_bit.is_finite(),
        "acc_midpoint_bit",
        raw.acc_midpoint_bit.to_string(),
        "finite",
    );
    check(unit(raw.tau_mean), "tau_mean", raw.tau_mean.to_string(), "[0, 1]");
    check(
        unit(raw.tau_min_semcom),
        "tau_min_semcom",
        raw.tau_min_semcom.to_string(),
        "[0, 1]",
    );
    let (lo, hi) = raw.coding_ability_range;
    check(
        lo > 0.0 && lo <= hi && hi <= 1.0,
        "coding_ability_range",
        format!("[{lo}, {hi}]"),
        "0 < lo <= hi <= 1",
    );
    check(
        raw.p_comp_coeff.is_finite() && raw.p_comp_coeff >= 0.0,
        "p_comp_coeff",
        raw.p_comp_coeff.to_string(),
        ">= 0",
    );
    check(raw.n_drops >= 1, "n_drops", raw.n_drops.to_string(), ">= 1");

    if errors.is_empty() {
        Ok(raw)
    } else {
        Err(Error::Config(ConfigErrors(errors)))
    }
}
