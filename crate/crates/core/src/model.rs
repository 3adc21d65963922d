//! Network entities of one simulation drop and the knowledge matching rule.

use serde::Serialize;

use crate::channel::path_loss_linear;
use crate::config::SimConfig;

/// Per-version decay of the matching degree between two knowledge bases.
pub const VERSION_DECAY: f64 = 0.9;

/// Highest knowledge-base version a terminal can hold; servers always hold it.
pub const MAX_KB_VERSION: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnowledgeProfile {
    pub version: u32,
    /// Matching degree against the reference knowledge base, in [0, 1].
    pub base_match: f64,
}

impl KnowledgeProfile {
    pub fn new(version: u32, base_match: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&base_match));
        KnowledgeProfile {
            version,
            base_match,
        }
    }

    /// The profile of an application server: complete and up to date.
    pub fn server() -> Self {
        KnowledgeProfile::new(MAX_KB_VERSION, 1.0)
    }
}

/// Matching degree of two knowledge bases: the weaker base match, decayed
/// geometrically with the version gap.
pub fn pair_matching_degree(a: &KnowledgeProfile, b: &KnowledgeProfile) -> f64 {
    let gap = a.version.abs_diff(b.version);
    let tau = a.base_match.min(b.base_match) * VERSION_DECAY.powi(gap as i32);
    tau.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseStationNode {
    pub id: usize,
    pub position: (f64, f64),
    pub bw_budget: f64,
    pub tx_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TerminalDevice {
    pub id: usize,
    pub position: (f64, f64),
    pub knowledge: KnowledgeProfile,
    /// Encoder/decoder capability in (0, 1].
    pub coding_ability: f64,
    pub tx_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairKind {
    /// Terminal to terminal across two radio access networks (uplink + downlink).
    Scenario2,
    /// Terminal to server.
    Scenario3Uplink,
    /// Server to terminal.
    Scenario3Downlink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    Semantic,
    Bit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrafficPair {
    pub id: usize,
    pub kind: PairKind,
    pub src_td: usize,
    /// Destination terminal, only for `Scenario2`.
    pub dst_td: Option<usize>,
    pub tau: f64,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Hop {
    Uplink,
    Downlink,
}

/// One radio hop of a traffic pair: the unit that is associated with a base
/// station and receives bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Endpoint {
    pub pair: usize,
    pub hop: Hop,
}

impl TrafficPair {
    pub fn hops(&self) -> &'static [Hop] {
        match self.kind {
            PairKind::Scenario2 => &[Hop::Uplink, Hop::Downlink],
            PairKind::Scenario3Uplink => &[Hop::Uplink],
            PairKind::Scenario3Downlink => &[Hop::Downlink],
        }
    }

    /// The terminal on the radio side of `hop`.
    pub fn terminal(&self, hop: Hop) -> usize {
        match (self.kind, hop) {
            (PairKind::Scenario2, Hop::Downlink) => {
                self.dst_td.expect("scenario 2 pair without destination")
            }
            _ => self.src_td,
        }
    }

    /// Terminals that run a semantic codec when the pair uses semantic mode.
    pub fn terminals(&self) -> Vec<usize> {
        match self.dst_td {
            Some(dst) => vec![self.src_td, dst],
            None => vec![self.src_td],
        }
    }
}

/// One Monte Carlo drop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSnapshot {
    pub config: SimConfig,
    pub base_stations: Vec<BaseStationNode>,
    pub terminals: Vec<TerminalDevice>,
    pub pairs: Vec<TrafficPair>,
    /// Small-scale fading power gain, row-major `[terminal][bs]`.
    pub fading: Vec<f64>,
    /// Path loss times fading, row-major `[terminal][bs]`.
    gains: Vec<f64>,
}

impl NetworkSnapshot {
    /// Builds a snapshot and caches link gains from positions and fading.
    pub fn new(
        config: SimConfig,
        base_stations: Vec<BaseStationNode>,
        terminals: Vec<TerminalDevice>,
        pairs: Vec<TrafficPair>,
        fading: Vec<f64>,
    ) -> Self {
        let n_bs = base_stations.len();
        assert_eq!(fading.len(), terminals.len() * n_bs, "fading matrix shape");
        let mut gains = Vec::with_capacity(fading.len());
        for td in &terminals {
            for bs in &base_stations {
                let dx = td.position.0 - bs.position.0;
                let dy = td.position.1 - bs.position.1;
                let d = (dx * dx + dy * dy).sqrt();
                gains.push(path_loss_linear(d) * fading[td.id * n_bs + bs.id]);
            }
        }
        NetworkSnapshot {
            config,
            base_stations,
            terminals,
            pairs,
            fading,
            gains,
        }
    }

    pub fn n_bs(&self) -> usize {
        self.base_stations.len()
    }

    /// Power gain between a terminal and a base station (path loss and fading).
    pub fn gain(&self, td: usize, bs: usize) -> f64 {
        self.gains[td * self.n_bs() + bs]
    }

    /// All endpoints in pair order, uplink before downlink.
    pub fn endpoints(&self) -> Vec<Endpoint> {
        self.pairs
            .iter()
            .flat_map(|p| p.hops().iter().map(move |&hop| Endpoint { pair: p.id, hop }))
            .collect()
    }

    pub fn pair(&self, id: usize) -> &TrafficPair {
        &self.pairs[id]
    }

    pub fn endpoint_terminal(&self, ep: Endpoint) -> usize {
        self.pairs[ep.pair].terminal(ep.hop)
    }

    /// Transmit power on the endpoint's hop: the terminal on the uplink, the
    /// serving base station on the downlink.
    pub fn endpoint_tx_power(&self, ep: Endpoint, bs: usize) -> f64 {
        match ep.hop {
            Hop::Uplink => self.terminals[self.endpoint_terminal(ep)].tx_power,
            Hop::Downlink => self.base_stations[bs].tx_power,
        }
    }

    /// Received power over noise density, `p * g / N0` (Hz).
    pub fn endpoint_q(&self, ep: Endpoint, bs: usize) -> f64 {
        self.endpoint_tx_power(ep, bs) * self.gain(self.endpoint_terminal(ep), bs)
            / self.config.noise_psd
    }

    /// Profile of the far end of a pair: the destination terminal or the server.
    pub fn peer_profile(&self, pair: &TrafficPair) -> KnowledgeProfile {
        match pair.dst_td {
            Some(dst) => self.terminals[dst].knowledge,
            None => KnowledgeProfile::server(),
        }
    }

    /// Coding ability of a pair: the weaker coder of its terminals (servers count as 1).
    pub fn pair_coding_ability(&self, pair: &TrafficPair) -> f64 {
        pair.terminals()
            .into_iter()
            .map(|t| self.terminals[t].coding_ability)
            .fold(1.0, f64::min)
    }

    /// Recomputes every pair's matching degree from the terminal profiles.
    pub fn refresh_tau(&mut self) {
        for i in 0..self.pairs.len() {
            let src = self.terminals[self.pairs[i].src_td].knowledge;
            let peer = self.peer_profile(&self.pairs[i]);
            self.pairs[i].tau = pair_matching_degree(&src, &peer);
        }
    }

    /// Total bandwidth over all base stations (Hz).
    pub fn total_bandwidth(&self) -> f64 {
        self.base_stations.iter().map(|b| b.bw_budget).sum()
    }
}
