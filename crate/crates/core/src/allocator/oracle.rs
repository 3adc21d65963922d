//! Exhaustive reference allocation for small instances.
//!
//! Enumerates every association and every per-BS split of the budget on a
//! discrete simplex, scoring each candidate with the exact network metrics.
//! The best grid point of each association is then polished by a pattern
//! search that moves bandwidth between endpoints of the same base station
//! with geometrically shrinking steps, accepting only strict improvements.

use crate::error::{Error, Result};
use crate::model::NetworkSnapshot;
use crate::semantics::system_metrics;

use super::{members_by_bs, AllocationDecision, Strategy};

pub const MAX_ORACLE_ENDPOINTS: usize = 4;
pub const MAX_ORACLE_BS: usize = 2;
pub const MAX_ORACLE_GRID: usize = 8;

/// Smallest pattern-search step, relative to the budget.
const MIN_STEP: f64 = 1e-9;

fn stm(snapshot: &NetworkSnapshot, assoc: &[usize], bw: &[f64]) -> Result<f64> {
    let d = AllocationDecision::from_parts(snapshot, assoc, bw, Strategy::Oracle);
    Ok(system_metrics(snapshot, &d)?.stm)
}

/// All ways to write `total` as an ordered sum of `parts` non-negative integers,
/// in lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return vec![Vec::new()];
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exhaustive search over associations and grid bandwidth splits.
pub fn oracle_exhaustive(snapshot: &NetworkSnapshot, grid_levels: usize) -> Result<AllocationDecision> {
    let n_ep = snapshot.endpoints().len();
    let n_bs = snapshot.n_bs();
    if n_ep > MAX_ORACLE_ENDPOINTS {
        return Err(Error::Size(format!(
            "{n_ep} endpoints exceed the limit of {MAX_ORACLE_ENDPOINTS}"
        )));
    }
    if n_bs > MAX_ORACLE_BS {
        return Err(Error::Size(format!(
            "{n_bs} base stations exceed the limit of {MAX_ORACLE_BS}"
        )));
    }
    if grid_levels == 0 || grid_levels > MAX_ORACLE_GRID {
        return Err(Error::Size(format!(
            "grid of {grid_levels} levels outside 1..={MAX_ORACLE_GRID}"
        )));
    }

    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    let n_assoc = n_bs.pow(n_ep as u32);
    for code in 0..n_assoc {
        // First endpoint is the most significant digit: lexicographic order.
        let mut assoc = vec![0; n_ep];
        let mut rest = code;
        for slot in assoc.iter_mut().rev() {
            *slot = rest % n_bs;
            rest /= n_bs;
        }
        let (score, bw) = best_on_grid(snapshot, &assoc, grid_levels)?;
        let (score, bw) = polish(snapshot, &assoc, bw, score, grid_levels)?;
        if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
            best = Some((score, assoc, bw));
        }
    }
    let (_, assoc, bw) = best.expect("at least one association");
    Ok(AllocationDecision::from_parts(snapshot, &assoc, &bw, Strategy::Oracle))
}

fn best_on_grid(
    snapshot: &NetworkSnapshot,
    assoc: &[usize],
    grid_levels: usize,
) -> Result<(f64, Vec<f64>)> {
    let members = members_by_bs(assoc, snapshot.n_bs());
    let per_bs: Vec<Vec<Vec<usize>>> = members
        .iter()
        .map(|m| compositions(grid_levels, m.len()))
        .collect();
    let mut idx = vec![0usize; per_bs.len()];
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let mut bw = vec![0.0; assoc.len()];
        for (bs, eps) in members.iter().enumerate() {
            let split = &per_bs[bs][idx[bs]];
            let budget = snapshot.base_stations[bs].bw_budget;
            for (&e, &k) in eps.iter().zip(split) {
                bw[e] = budget * k as f64 / grid_levels as f64;
            }
        }
        let score = stm(snapshot, assoc, &bw)?;
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, bw));
        }
        // odometer over per-BS compositions
        let mut pos = per_bs.len();
        loop {
            if pos == 0 {
                return Ok(best.expect("non-empty grid"));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_bs[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn polish(
    snapshot: &NetworkSnapshot,
    assoc: &[usize],
    mut bw: Vec<f64>,
    mut score: f64,
    grid_levels: usize,
) -> Result<(f64, Vec<f64>)> {
    let members = members_by_bs(assoc, snapshot.n_bs());
    let mut step = 0.5 / grid_levels as f64;
    while step >= MIN_STEP {
        let mut improved = true;
        while improved {
            improved = false;
            for (bs, eps) in members.iter().enumerate() {
                let delta = step * snapshot.base_stations[bs].bw_budget;
                for &from in eps {
                    for &to in eps {
                        if from == to || bw[from] <= 0.0 {
                            continue;
                        }
                        let moved = delta.min(bw[from]);
                        let mut cand = bw.clone();
                        cand[from] -= moved;
                        cand[to] += moved;
                        let s = stm(snapshot, assoc, &cand)?;
                        if s > score {
                            score = s;
                            bw = cand;
                            improved = true;
                        }
                    }
                }
            }
        }
        step *= 0.5;
    }
    Ok((score, bw))
}

/// Rounds a decision's bandwidths onto the oracle grid, keeping its
/// association and every per-BS total (largest-remainder rounding).
pub fn round_to_grid(
    snapshot: &NetworkSnapshot,
    decision: &AllocationDecision,
    grid_levels: usize,
) -> AllocationDecision {
    let assoc = decision.assoc();
    let raw = decision.bandwidths();
    let members = members_by_bs(&assoc, snapshot.n_bs());
    let mut bw = vec![0.0; assoc.len()];
    for (bs, eps) in members.iter().enumerate() {
        if eps.is_empty() {
            continue;
        }
        let budget = snapshot.base_stations[bs].bw_budget;
        let exact: Vec<f64> = eps
            .iter()
            .map(|&e| raw[e] / budget * grid_levels as f64)
            .collect();
        let mut levels: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let assigned: usize = levels.iter().sum();
        let mut order: Vec<usize> = (0..eps.len()).collect();
        order.sort_by(|&a, &b| {
            (exact[b] - exact[b].floor())
                .total_cmp(&(exact[a] - exact[a].floor()))
                .then(a.cmp(&b))
        });
        for &i in order.iter().take(grid_levels.saturating_sub(assigned)) {
            levels[i] += 1;
        }
        for (&e, &k) in eps.iter().zip(&levels) {
            bw[e] = budget * k as f64 / grid_levels as f64;
        }
    }
    AllocationDecision::from_parts(snapshot, &assoc, &bw, decision.strategy)
}
