//! Monte Carlo sweeps over one configuration parameter.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::allocator::Strategy;
use crate::config::{validate_config, SimConfig};
use crate::error::{Error, Result};
use crate::semantics::MetricReport;

use super::run::{run_drop_all, RunOptions};
use super::scenario::{generate_drop, oracle_instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVar {
    NTd,
    NBs,
    TauMean,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::NTd => "n_td",
            SweepVar::NBs => "n_bs",
            SweepVar::TauMean => "tau_mean",
        }
    }

    /// Applies `value` to a copy of `base`.
    pub fn apply(self, base: &SimConfig, value: f64) -> Result<SimConfig> {
        let mut cfg = base.clone();
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Sweep(format!("{} needs positive integers, got {v}", self.as_str())))
            }
        };
        match self {
            SweepVar::NTd => cfg.n_td = as_count(value)?,
            SweepVar::NBs => cfg.n_bs = as_count(value)?,
            SweepVar::TauMean => cfg.tau_mean = value,
        }
        Ok(cfg)
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n_td" => Ok(SweepVar::NTd),
            "n_bs" => Ok(SweepVar::NBs),
            "tau_mean" => Ok(SweepVar::TauMean),
            other => Err(Error::Sweep(format!("cannot sweep `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub vary: SweepVar,
    pub values: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub base: SimConfig,
    pub n_drops: usize,
    pub seed: u64,
    pub options: RunOptions,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub workers: Option<usize>,
}

impl SweepSpec {
    /// A sweep with the base configuration's drop count and seed.
    pub fn new(base: SimConfig, vary: SweepVar, values: Vec<f64>) -> Self {
        SweepSpec {
            vary,
            values,
            strategies: Strategy::COMPARED.to_vec(),
            n_drops: base.n_drops,
            seed: base.seed,
            base,
            options: RunOptions::default(),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Sweep("no sweep values".into()));
        }
        if self.values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Sweep("sweep values must be strictly increasing".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Sweep("no strategies".into()));
        }
        let mut seen = self.strategies.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.strategies.len() {
            return Err(Error::Sweep("duplicate strategies".into()));
        }
        if self.n_drops == 0 {
            return Err(Error::Sweep("n_drops must be at least 1".into()));
        }
        for &v in &self.values {
            validate_config(self.point_config(v)?)?;
        }
        Ok(())
    }

    /// Configuration of one sweep point.
    pub fn point_config(&self, value: f64) -> Result<SimConfig> {
        let mut cfg = self.vary.apply(&self.base, value)?;
        cfg.n_drops = self.n_drops;
        cfg.seed = self.seed;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sweep_var: SweepVar,
    pub sweep_value: f64,
    pub strategy: Strategy,
    pub mean_stm: f64,
    pub std_stm: f64,
    pub mean_sse: f64,
    pub mean_see: f64,
    pub n_drops: usize,
}

/// Aggregated sweep results plus what the metadata file echoes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub vary: SweepVar,
    pub values: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub config: SimConfig,
    pub options: RunOptions,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn row(&self, value: f64, strategy: Strategy) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.sweep_value == value && r.strategy == strategy)
    }

    /// Mean STM per sweep value for one strategy, in value order.
    pub fn stm_series(&self, strategy: Strategy) -> Vec<f64> {
        self.values
            .iter()
            .filter_map(|&v| self.row(v, strategy).map(|r| r.mean_stm))
            .collect()
    }
}

/// Mean and sample standard deviation, accumulated in slice order.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Sweep(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn aggregate(
    vary: SweepVar,
    value: f64,
    strategies: &[Strategy],
    per_drop: &[Vec<MetricReport>],
) -> Vec<SweepRow> {
    strategies
        .iter()
        .enumerate()
        .map(|(k, &strategy)| {
            let stm: Vec<f64> = per_drop.iter().map(|d| d[k].stm).collect();
            let sse: Vec<f64> = per_drop.iter().map(|d| d[k].sse).collect();
            let see: Vec<f64> = per_drop.iter().map(|d| d[k].see).collect();
            let (mean_stm, std_stm) = mean_std(&stm);
            SweepRow {
                sweep_var: vary,
                sweep_value: value,
                strategy,
                mean_stm,
                std_stm,
                mean_sse: mean_std(&sse).0,
                mean_see: mean_std(&see).0,
                n_drops: per_drop.len(),
            }
        })
        .collect()
}

fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| {
        a.sweep_value
            .total_cmp(&b.sweep_value)
            .then(a.strategy.as_str().cmp(b.strategy.as_str()))
    });
}

/// Evaluates every strategy on the same drops (common random numbers) at
/// every sweep value. Drops run in parallel; aggregation is in drop order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &value in &spec.values {
        let cfg = spec.point_config(value)?;
        let per_drop: Vec<Vec<MetricReport>> = with_workers(spec.workers, || {
            (0..spec.n_drops as u64)
                .into_par_iter()
                .map(|d| {
                    let snap = generate_drop(&cfg, d)?;
                    let mut reports = run_drop_all(&snap, &spec.strategies, &spec.options)?;
                    for r in reports.iter_mut() {
                        r.pairs.clear();
                    }
                    Ok(reports)
                })
                .collect::<Result<Vec<_>>>()
        })??;
        rows.extend(aggregate(spec.vary, value, &spec.strategies, &per_drop));
    }
    sort_rows(&mut rows);
    Ok(SweepTable {
        vary: spec.vary,
        values: spec.values.clone(),
        strategies: spec.strategies.clone(),
        config: SimConfig {
            n_drops: spec.n_drops,
            seed: spec.seed,
            ..spec.base.clone()
        },
        options: spec.options,
        rows,
    })
}

/// Oracle comparison over small instances.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleStudy {
    pub table: SweepTable,
    /// Per drop, STM of each strategy in `table.strategies` order.
    pub stm: Vec<Vec<f64>>,
    /// Mean over drops of STM(kb_aware) / STM(oracle), skipping drops where
    /// the oracle delivers nothing.
    pub mean_kb_ratio: f64,
}

/// Runs all four strategies on `n_drops` oracle-sized drops.
pub fn run_oracle_study(
    config: &SimConfig,
    max_endpoints: usize,
    options: &RunOptions,
    workers: Option<usize>,
) -> Result<OracleStudy> {
    let cfg = validate_config(config.clone())?;
    let strategies = vec![
        Strategy::KbAware,
        Strategy::MaxSinrWaterfill,
        Strategy::MaxSinrEven,
        Strategy::Oracle,
    ];
    let per_drop: Vec<Vec<MetricReport>> = with_workers(workers, || {
        (0..cfg.n_drops as u64)
            .into_par_iter()
            .map(|d| {
                let snap = oracle_instance(&cfg, d, max_endpoints)?;
                run_drop_all(&snap, &strategies, options)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let stm: Vec<Vec<f64>> = per_drop
        .iter()
        .map(|d| d.iter().map(|r| r.stm).collect())
        .collect();
    let ratios: Vec<f64> = stm
        .iter()
        .filter(|s| s[3] > 0.0)
        .map(|s| s[0] / s[3])
        .collect();
    let n_td = cfg.n_td.min(3).min(max_endpoints.max(1)) as f64;
    let mut rows = aggregate(SweepVar::NTd, n_td, &strategies, &per_drop);
    sort_rows(&mut rows);
    Ok(OracleStudy {
        table: SweepTable {
            vary: SweepVar::NTd,
            values: vec![n_td],
            strategies,
            config: cfg,
            options: *options,
            rows,
        },
        stm,
        mean_kb_ratio: mean_std(&ratios).0,
    })
}
