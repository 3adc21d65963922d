use serde::Serialize;

use crate::allocator::{
    allocate, associate_max_sinr, bandwidth_even, oracle_exhaustive, AllocationDecision, Strategy,
    MAX_ORACLE_GRID,
};
use crate::channel::e2e_compose;
use crate::error::Result;
use crate::kbsync::{align_snapshot, KbSyncParams};
use crate::model::{Endpoint, NetworkSnapshot};
use crate::semantics::{endpoint_link, system_metrics, MetricReport, SemanticModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOptions {
    pub kb_sync: KbSyncParams,
    /// Grid levels used when the oracle strategy is requested.
    pub oracle_grid: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            kb_sync: KbSyncParams::default(),
            oracle_grid: MAX_ORACLE_GRID,
        }
    }
}

/// A drop after knowledge alignment and mode probing, ready for allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDrop {
    pub snapshot: NetworkSnapshot,
    /// Knowledge-sync cost charged against throughput (msg/s).
    pub penalty: f64,
}

/// Aligns knowledge bases (if enabled) and records each pair's probe mode:
/// the mode selected at its max-SINR, even-share operating point.
pub fn prepare_drop(snapshot: &NetworkSnapshot, options: &RunOptions) -> Result<PreparedDrop> {
    let sync = align_snapshot(snapshot, &options.kb_sync)?;
    let mut snap = sync.snapshot;
    let assoc = associate_max_sinr(&snap);
    let bw = bandwidth_even(&snap, &assoc);
    let probe = AllocationDecision::from_parts(&snap, &assoc, &bw, Strategy::MaxSinrEven);
    let model = SemanticModel::from_config(&snap.config);
    let mut modes = Vec::with_capacity(snap.pairs.len());
    for pair in &snap.pairs {
        let links = pair
            .hops()
            .iter()
            .map(|&hop| endpoint_link(&snap, &probe, Endpoint { pair: pair.id, hop }))
            .collect::<Result<Vec<_>>>()?;
        let link = links
            .iter()
            .skip(1)
            .fold(links[0], |acc, l| e2e_compose(&acc, l));
        let c = snap.pair_coding_ability(pair);
        modes.push(model.select_mode(pair.tau, c, link.sinr_db));
    }
    for (pair, mode) in snap.pairs.iter_mut().zip(modes) {
        pair.mode = mode;
    }
    Ok(PreparedDrop {
        snapshot: snap,
        penalty: sync.penalty,
    })
}

/// Allocates and scores one strategy on a prepared drop.
pub fn evaluate_prepared(
    prepared: &PreparedDrop,
    strategy: Strategy,
    options: &RunOptions,
) -> Result<MetricReport> {
    let snap = &prepared.snapshot;
    let decision = match strategy {
        Strategy::Oracle => oracle_exhaustive(snap, options.oracle_grid)?,
        other => allocate(snap, other)?,
    };
    let report = system_metrics(snap, &decision)?;
    Ok(report.with_penalty(prepared.penalty, snap.total_bandwidth()))
}

/// Full drop pipeline for one strategy: knowledge sync, mode probing,
/// allocation, metrics, sync penalty.
pub fn run_drop(
    snapshot: &NetworkSnapshot,
    strategy: Strategy,
    options: &RunOptions,
) -> Result<MetricReport> {
    let prepared = prepare_drop(snapshot, options)?;
    evaluate_prepared(&prepared, strategy, options)
}

/// Runs several strategies on the same drop, preparing it once.
pub fn run_drop_all(
    snapshot: &NetworkSnapshot,
    strategies: &[Strategy],
    options: &RunOptions,
) -> Result<Vec<MetricReport>> {
    let prepared = prepare_drop(snapshot, options)?;
    strategies
        .iter()
        .map(|&s| evaluate_prepared(&prepared, s, options))
        .collect()
}
