//! Association and bandwidth allocation strategies.
//!
//! Every strategy produces an [`AllocationDecision`]: one serving base station
//! and one bandwidth share per endpoint (radio hop of a traffic pair).
//!
//! | identifier      | association                         | bandwidth                     |
//! |-----------------|-------------------------------------|-------------------------------|
//! | `kb_aware`      | greedy marginal-throughput + passes | water-filling, semantic weights |
//! | `maxsinr_wf`    | max full-band SINR                  | water-filling, unit weights   |
//! | `maxsinr_even`  | max full-band SINR                  | equal split                   |
//! | `oracle`        | exhaustive (small instances)        | exhaustive grid, then polished |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Endpoint, NetworkSnapshot};

mod baseline;
mod kb_aware;
mod oracle;
pub mod waterfill;

pub use baseline::{associate_max_sinr, bandwidth_even, bandwidth_waterfill};
pub use kb_aware::{allocate_kb_aware, allocate_kb_aware_traced, KbAwareTrace, MAX_IMPROVEMENT_PASSES};
pub use oracle::{oracle_exhaustive, round_to_grid, MAX_ORACLE_BS, MAX_ORACLE_ENDPOINTS, MAX_ORACLE_GRID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Strategy {
    KbAware,
    MaxSinrWaterfill,
    MaxSinrEven,
    Oracle,
}

impl Strategy {
    /// The three strategies compared in sweeps, in legend order.
    pub const COMPARED: [Strategy; 3] = [
        Strategy::KbAware,
        Strategy::MaxSinrWaterfill,
        Strategy::MaxSinrEven,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::KbAware => "kb_aware",
            Strategy::MaxSinrWaterfill => "maxsinr_wf",
            Strategy::MaxSinrEven => "maxsinr_even",
            Strategy::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kb_aware" => Ok(Strategy::KbAware),
            "maxsinr_wf" => Ok(Strategy::MaxSinrWaterfill),
            "maxsinr_even" => Ok(Strategy::MaxSinrEven),
            "oracle" => Ok(Strategy::Oracle),
            other => Err(Error::Sweep(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Serving base station and bandwidth of one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slot {
    pub endpoint: Endpoint,
    pub bs: usize,
    pub bw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationDecision {
    pub strategy: Strategy,
    /// Sorted by endpoint, matching [`NetworkSnapshot::endpoints`].
    slots: Vec<Slot>,
}

impl AllocationDecision {
    /// Builds a decision from association and bandwidth vectors aligned with
    /// `snapshot.endpoints()`.
    pub fn from_parts(
        snapshot: &NetworkSnapshot,
        assoc: &[usize],
        bw: &[f64],
        strategy: Strategy,
    ) -> Self {
        let endpoints = snapshot.endpoints();
        assert_eq!(endpoints.len(), assoc.len());
        assert_eq!(endpoints.len(), bw.len());
        let slots = endpoints
            .into_iter()
            .zip(assoc.iter().zip(bw))
            .map(|(endpoint, (&bs, &bw))| Slot { endpoint, bs, bw })
            .collect();
        AllocationDecision { strategy, slots }
    }

    pub fn from_slots(mut slots: Vec<Slot>, strategy: Strategy) -> Self {
        slots.sort_by_key(|s| s.endpoint);
        AllocationDecision { strategy, slots }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, ep: Endpoint) -> Option<&Slot> {
        self.slots
            .binary_search_by_key(&ep, |s| s.endpoint)
            .ok()
            .map(|i| &self.slots[i])
    }

    pub fn serving_bs(&self, ep: Endpoint) -> Option<usize> {
        self.slot(ep).map(|s| s.bs)
    }

    pub fn bandwidth(&self, ep: Endpoint) -> Option<f64> {
        self.slot(ep).map(|s| s.bw)
    }

    pub fn assoc(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.bs).collect()
    }

    pub fn bandwidths(&self) -> Vec<f64> {
        self.slots.iter().map(|s| s.bw).collect()
    }

    /// Allocated bandwidth per base station, summed in endpoint order.
    pub fn bs_loads(&self, n_bs: usize) -> Vec<f64> {
        let mut loads = vec![0.0; n_bs];
        for s in &self.slots {
            if s.bs < n_bs {
                loads[s.bs] += s.bw;
            }
        }
        loads
    }

    /// Number of endpoints served by each base station.
    pub fn bs_counts(&self, n_bs: usize) -> Vec<usize> {
        let mut counts = vec![0; n_bs];
        for s in &self.slots {
            if s.bs < n_bs {
                counts[s.bs] += 1;
            }
        }
        counts
    }
}

/// Runs one strategy on a snapshot.
pub fn allocate(snapshot: &NetworkSnapshot, strategy: Strategy) -> Result<AllocationDecision> {
    match strategy {
        Strategy::KbAware => allocate_kb_aware(snapshot),
        Strategy::MaxSinrWaterfill => {
            let assoc = associate_max_sinr(snapshot);
            let ones = vec![1.0; assoc.len()];
            let bw = bandwidth_waterfill(snapshot, &assoc, &ones)?;
            Ok(AllocationDecision::from_parts(snapshot, &assoc, &bw, strategy))
        }
        Strategy::MaxSinrEven => {
            let assoc = associate_max_sinr(snapshot);
            let bw = bandwidth_even(snapshot, &assoc);
            Ok(AllocationDecision::from_parts(snapshot, &assoc, &bw, strategy))
        }
        Strategy::Oracle => oracle_exhaustive(snapshot, MAX_ORACLE_GRID),
    }
}

/// Groups endpoint indices by serving base station.
pub(crate) fn members_by_bs(assoc: &[usize], n_bs: usize) -> Vec<Vec<usize>> {
    let mut members = vec![Vec::new(); n_bs];
    for (i, &b) in assoc.iter().enumerate() {
        members[b].push(i);
    }
    members
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_identifiers_roundtrip() {
        for s in [
            Strategy::KbAware,
            Strategy::MaxSinrWaterfill,
            Strategy::MaxSinrEven,
            Strategy::Oracle,
        ] {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
        }
        assert!("max_sinr".parse::<Strategy>().is_err());
    }
}
