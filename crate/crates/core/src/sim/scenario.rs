//! Random network generation for one drop.

use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1};

use crate::config::{validate_config, SimConfig};
use crate::error::{Error, Result};
use crate::model::{
    pair_matching_degree, BaseStationNode, KnowledgeProfile, Mode, NetworkSnapshot, PairKind,
    TerminalDevice, TrafficPair, MAX_KB_VERSION,
};

use super::rng::{drop_rng, DropRng};

/// Jitter of each base station around its grid point, as a fraction of the cell size.
const BS_JITTER: f64 = 0.25;

/// Base-station positions on a jittered grid of `floor(sqrt(n))` rows; rows
/// share the stations as evenly as possible.
fn place_base_stations(cfg: &SimConfig, rng: &mut DropRng) -> Vec<BaseStationNode> {
    let n = cfg.n_bs;
    let rows = ((n as f64).sqrt().floor() as usize).max(1);
    let side = cfg.area_side;
    let mut out = Vec::with_capacity(n);
    for r in 0..rows {
        let in_row = n / rows + usize::from(r < n % rows);
        let cell_w = side / in_row as f64;
        let cell_h = side / rows as f64;
        for j in 0..in_row {
            let jx: f64 = rng.random_range(-0.5..0.5) * BS_JITTER * cell_w;
            let jy: f64 = rng.random_range(-0.5..0.5) * BS_JITTER * cell_h;
            out.push(BaseStationNode {
                id: out.len(),
                position: ((j as f64 + 0.5) * cell_w + jx, (r as f64 + 0.5) * cell_h + jy),
                bw_budget: cfg.bw_per_bs,
                tx_power: cfg.tx_power_bs,
            });
        }
    }
    out
}

/// Beta-shaped draw with the requested mean: `Beta(2m / (1 - m), 2)`.
fn base_match_sampler(mean: f64) -> Option<Beta<f64>> {
    if mean <= 0.0 || mean >= 1.0 {
        return None;
    }
    Some(Beta::new(2.0 * mean / (1.0 - mean), 2.0).expect("positive shape parameters"))
}

/// Generates drop `drop_index` of a run. The result depends only on the
/// configuration (including its seed) and the index.
pub fn generate_drop(config: &SimConfig, drop_index: u64) -> Result<NetworkSnapshot> {
    let cfg = validate_config(config.clone())?;
    let mut rng = drop_rng(cfg.seed, drop_index);

    let base_stations = place_base_stations(&cfg, &mut rng);

    let sampler = base_match_sampler(cfg.tau_mean);
    let (c_lo, c_hi) = cfg.coding_ability_range;
    let mut terminals = Vec::with_capacity(cfg.n_td);
    for id in 0..cfg.n_td {
        let x = rng.random_range(0.0..cfg.area_side);
        let y = rng.random_range(0.0..cfg.area_side);
        let base_match = match &sampler {
            Some(beta) => beta.sample(&mut rng).clamp(0.0, 1.0),
            None => cfg.tau_mean,
        };
        let version = rng.random_range(0..=MAX_KB_VERSION);
        let coding_ability = if c_lo < c_hi {
            rng.random_range(c_lo..=c_hi)
        } else {
            c_lo
        };
        terminals.push(TerminalDevice {
            id,
            position: (x, y),
            knowledge: KnowledgeProfile::new(version, base_match),
            coding_ability,
            tx_power: cfg.tx_power_td,
        });
    }

    let fading: Vec<f64> = (0..cfg.n_td * cfg.n_bs)
        .map(|_| {
            let f: f64 = Exp1.sample(&mut rng);
            f.max(f64::MIN_POSITIVE)
        })
        .collect();

    let mut pairs = Vec::with_capacity(cfg.n_td);
    for src in 0..cfg.n_td {
        let u: f64 = rng.random();
        let scenario3 = u < cfg.scenario3_fraction || cfg.n_td < 2;
        let (kind, dst_td) = if scenario3 {
            if rng.random_bool(0.5) {
                (PairKind::Scenario3Uplink, None)
            } else {
                (PairKind::Scenario3Downlink, None)
            }
        } else {
            // uniform over the other terminals
            let k = rng.random_range(0..cfg.n_td - 1);
            (PairKind::Scenario2, Some(if k >= src { k + 1 } else { k }))
        };
        let peer = match dst_td {
            Some(d) => terminals[d].knowledge,
            None => KnowledgeProfile::server(),
        };
        pairs.push(TrafficPair {
            id: src,
            kind,
            src_td: src,
            dst_td,
            tau: pair_matching_degree(&terminals[src].knowledge, &peer),
            mode: Mode::Bit,
        });
    }

    Ok(NetworkSnapshot::new(cfg, base_stations, terminals, pairs, fading))
}

/// Converts terminal-to-terminal pairs into terminal-to-server uplinks, in
/// pair order, until the endpoint count fits `max_endpoints`.
pub fn restrict_endpoints(snapshot: &NetworkSnapshot, max_endpoints: usize) -> Result<NetworkSnapshot> {
    if snapshot.pairs.len() > max_endpoints {
        return Err(Error::Size(format!(
            "{} pairs cannot fit in {max_endpoints} endpoints",
            snapshot.pairs.len()
        )));
    }
    let mut out = snapshot.clone();
    let mut remaining_single = out.pairs.len();
    let mut used = 0;
    for pair in out.pairs.iter_mut() {
        remaining_single -= 1;
        let hops = pair.hops().len();
        if used + hops + remaining_single > max_endpoints {
            pair.kind = PairKind::Scenario3Uplink;
            pair.dst_td = None;
        }
        used += pair.hops().len();
    }
    out.refresh_tau();
    Ok(out)
}

/// A drop small enough for the exhaustive oracle: at most two base stations,
/// at most three pairs, at most `max_endpoints` endpoints.
pub fn oracle_instance(config: &SimConfig, drop_index: u64, max_endpoints: usize) -> Result<NetworkSnapshot> {
    let cfg = SimConfig {
        n_bs: config.n_bs.min(crate::allocator::MAX_ORACLE_BS),
        n_td: config.n_td.min(3).min(max_endpoints.max(1)),
        ..config.clone()
    };
    let snap = generate_drop(&cfg, drop_index)?;
    restrict_endpoints(&snap, max_endpoints)
}
