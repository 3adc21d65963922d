//! Hand-built networks for integration tests.
#![allow(dead_code)]

use sran::model::{BaseStationNode, TerminalDevice, TrafficPair};
use sran::{AllocationDecision, KnowledgeProfile, Mode, NetworkSnapshot, PairKind, SimConfig};

pub struct Td {
    pub at: (f64, f64),
    pub version: u32,
    pub base_match: f64,
    pub coding: f64,
}

/// Terminal with an up-to-date knowledge base of the given quality.
pub fn td(x: f64, y: f64, base_match: f64) -> Td {
    Td {
        at: (x, y),
        version: 5,
        base_match,
        coding: 1.0,
    }
}

/// Builds a snapshot with unit fading unless `fading` is given.
pub fn network(
    cfg: &SimConfig,
    stations: &[(f64, f64)],
    terminals: &[Td],
    pairs: &[(PairKind, usize, Option<usize>)],
    fading: Option<Vec<f64>>,
) -> NetworkSnapshot {
    let cfg = SimConfig {
        n_bs: stations.len().max(1),
        n_td: terminals.len().max(1),
        ..cfg.clone()
    };
    let base_stations = stations
        .iter()
        .enumerate()
        .map(|(id, &position)| BaseStationNode {
            id,
            position,
            bw_budget: cfg.bw_per_bs,
            tx_power: cfg.tx_power_bs,
        })
        .collect();
    let tds = terminals
        .iter()
        .enumerate()
        .map(|(id, t)| TerminalDevice {
            id,
            position: t.at,
            knowledge: KnowledgeProfile::new(t.version, t.base_match),
            coding_ability: t.coding,
            tx_power: cfg.tx_power_td,
        })
        .collect();
    let pairs = pairs
        .iter()
        .enumerate()
        .map(|(id, &(kind, src_td, dst_td))| TrafficPair {
            id,
            kind,
            src_td,
            dst_td,
            tau: 0.0,
            mode: Mode::Bit,
        })
        .collect();
    let fading = fading.unwrap_or_else(|| vec![1.0; terminals.len() * stations.len()]);
    let mut snap = NetworkSnapshot::new(cfg, base_stations, tds, pairs, fading);
    snap.refresh_tau();
    snap
}

/// Logistic function, written out independently of the library.
pub fn sigma(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Best of the bit and semantic message rates for a link, from the
/// closed-form model with default constants.
pub fn hand_rate(tau: f64, c: f64, sinr: f64, bits_per_s: f64) -> f64 {
    let db = 10.0 * sinr.log10();
    let bit = bits_per_s / 8000.0 * sigma(0.3 * (db - 8.0));
    if tau < 0.3 {
        return bit;
    }
    let len = 8000.0 * (1.0 - 0.8 * tau * c);
    let sem = bits_per_s / len * (tau * c * sigma(0.3 * (db - 5.0)));
    sem.max(bit)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Two copies of the same network, far enough apart that every endpoint
/// stays in its own half.
pub fn doubled(snap: &NetworkSnapshot) -> NetworkSnapshot {
    let offset = 1e6;
    let n_td = snap.terminals.len();
    let n_bs = snap.n_bs();
    let mut base_stations = snap.base_stations.clone();
    for bs in &snap.base_stations {
        let mut b = bs.clone();
        b.id += n_bs;
        b.position.0 += offset;
        base_stations.push(b);
    }
    let mut terminals = snap.terminals.clone();
    for t in &snap.terminals {
        let mut t = t.clone();
        t.id += n_td;
        t.position.0 += offset;
        terminals.push(t);
    }
    let mut pairs = snap.pairs.clone();
    for p in &snap.pairs {
        let mut p = p.clone();
        p.id += snap.pairs.len();
        p.src_td += n_td;
        p.dst_td = p.dst_td.map(|d| d + n_td);
        pairs.push(p);
    }
    let mut fading = Vec::with_capacity(4 * n_td * n_bs);
    for half in 0..2 {
        for td in 0..n_td {
            for _ in 0..half {
                fading.extend(std::iter::repeat_n(1.0, n_bs));
            }
            fading.extend_from_slice(&snap.fading[td * n_bs..(td + 1) * n_bs]);
            for _ in half..1 {
                fading.extend(std::iter::repeat_n(1.0, n_bs));
            }
        }
    }
    let config = SimConfig {
        n_bs: 2 * n_bs,
        n_td: 2 * n_td,
        ..snap.config.clone()
    };
    NetworkSnapshot::new(config, base_stations, terminals, pairs, fading)
}

/// The same decision in both halves.
pub fn mirrored(half: &NetworkSnapshot, both: &NetworkSnapshot, d: &AllocationDecision) -> AllocationDecision {
    let n_bs = half.n_bs();
    let mut assoc = d.assoc();
    assoc.extend(d.assoc().iter().map(|b| b + n_bs));
    let mut bw = d.bandwidths();
    bw.extend(d.bandwidths());
    AllocationDecision::from_parts(both, &assoc, &bw, d.strategy)
}
