//! Knowledge-base alignment between the two ends of a traffic pair.
//!
//! ```text
//! Idle --exchange_versions--> VersionsExchanged --decide_update(true)--> Transferring --complete_transfer--> Aligned
//!                                               \--decide_update(false)--> Declined
//! ```
//!
//! The end holding the older version downloads the newer one. Transfers are
//! charged as a throughput penalty of `cost_weight` msg/s per transferred bit.

use serde::Serialize;

use crate::allocator::{associate_max_sinr, bandwidth_even, AllocationDecision, Strategy};
use crate::channel::{e2e_bit_rate, e2e_compose};
use crate::error::{Error, Result};
use crate::model::{pair_matching_degree, Endpoint, KnowledgeProfile, NetworkSnapshot};
use crate::semantics::{endpoint_link, SemanticModel};

pub const DEFAULT_PAYLOAD_BITS_PER_VERSION: f64 = 1e6;
/// msg/s of throughput charged per transferred bit.
pub const DEFAULT_COST_WEIGHT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SyncState {
    Idle,
    VersionsExchanged,
    Transferring,
    Aligned,
    Declined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncSession {
    state: SyncState,
    src: KnowledgeProfile,
    dst: KnowledgeProfile,
    payload_bits_per_version: f64,
    gap: Option<u32>,
    transferred: f64,
}

impl SyncSession {
    pub fn new(src: KnowledgeProfile, dst: KnowledgeProfile, payload_bits_per_version: f64) -> Self {
        SyncSession {
            state: SyncState::Idle,
            src,
            dst,
            payload_bits_per_version,
            gap: None,
            transferred: 0.0,
        }
    }

    pub fn state(&self) -> SyncState {
        self.state
    }

    /// Version gap, known once versions have been exchanged.
    pub fn gap(&self) -> Option<u32> {
        self.gap
    }

    pub fn transferred(&self) -> f64 {
        self.transferred
    }

    pub fn profiles(&self) -> (KnowledgeProfile, KnowledgeProfile) {
        (self.src, self.dst)
    }

    pub fn tau(&self) -> f64 {
        pair_matching_degree(&self.src, &self.dst)
    }

    /// Matching degree the pair would reach with equal versions.
    pub fn aligned_tau(&self) -> f64 {
        let v = self.src.version.max(self.dst.version);
        pair_matching_degree(
            &KnowledgeProfile::new(v, self.src.base_match),
            &KnowledgeProfile::new(v, self.dst.base_match),
        )
    }

    pub fn projected_tau_gain(&self) -> f64 {
        self.aligned_tau() - self.tau()
    }

    /// Bits the lagging end would download.
    pub fn transfer_cost_bits(&self) -> f64 {
        let gap = self.src.version.abs_diff(self.dst.version);
        self.payload_bits_per_version * gap as f64
    }

    fn expect(&self, state: SyncState, action: &'static str) -> Result<()> {
        if self.state == state {
            Ok(())
        } else {
            Err(Error::State {
                state: self.state,
                action,
            })
        }
    }

    pub fn exchange_versions(&mut self) -> Result<()> {
        self.expect(SyncState::Idle, "exchange versions")?;
        self.gap = Some(self.src.version.abs_diff(self.dst.version));
        self.state = SyncState::VersionsExchanged;
        Ok(())
    }

    /// Accepts the update iff the projected throughput gain (msg/s) covers the
    /// weighted transfer cost. Equal versions are always accepted.
    pub fn decide_update(
        &mut self,
        projected_stm_gain: f64,
        est_cost_bits: f64,
        cost_weight: f64,
    ) -> Result<bool> {
        self.expect(SyncState::VersionsExchanged, "decide on an update")?;
        let accept = self.gap == Some(0) || projected_stm_gain >= cost_weight * est_cost_bits;
        self.state = if accept {
            SyncState::Transferring
        } else {
            SyncState::Declined
        };
        Ok(accept)
    }

    /// Downloads the newer version to the lagging end.
    pub fn complete_transfer(&mut self) -> Result<(KnowledgeProfile, KnowledgeProfile)> {
        self.expect(SyncState::Transferring, "complete a transfer")?;
        let gap = self.gap.unwrap_or(0);
        let v = self.src.version.max(self.dst.version);
        self.src.version = v;
        self.dst.version = v;
        self.transferred = self.payload_bits_per_version * gap as f64;
        self.state = SyncState::Aligned;
        Ok((self.src, self.dst))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KbSyncParams {
    pub enabled: bool,
    pub payload_bits_per_version: f64,
    pub cost_weight: f64,
}

impl Default for KbSyncParams {
    fn default() -> Self {
        KbSyncParams {
            enabled: true,
            payload_bits_per_version: DEFAULT_PAYLOAD_BITS_PER_VERSION,
            cost_weight: DEFAULT_COST_WEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncOutcome {
    pub snapshot: NetworkSnapshot,
    pub transferred_bits: f64,
    /// `cost_weight * transferred_bits` (msg/s).
    pub penalty: f64,
    pub accepted: usize,
    pub declined: usize,
}

/// Probe message rate of every pair at matching degree `tau`, using max-SINR
/// association with even bandwidth shares.
struct RateProbe {
    model: SemanticModel,
    /// Per pair: (bottleneck SINR in dB, end-to-end bit rate, coding ability).
    links: Vec<(f64, f64, f64)>,
}

impl RateProbe {
    fn new(snapshot: &NetworkSnapshot) -> Result<Self> {
        let assoc = associate_max_sinr(snapshot);
        let bw = bandwidth_even(snapshot, &assoc);
        let probe = AllocationDecision::from_parts(snapshot, &assoc, &bw, Strategy::MaxSinrEven);
        let mut links = Vec::with_capacity(snapshot.pairs.len());
        for pair in &snapshot.pairs {
            let hops = pair
                .hops()
                .iter()
                .map(|&hop| endpoint_link(snapshot, &probe, Endpoint { pair: pair.id, hop }))
                .collect::<Result<Vec<_>>>()?;
            let (link, rate) = match hops.as_slice() {
                [one] => (*one, one.bit_rate()),
                [up, down] => (e2e_compose(up, down), e2e_bit_rate(up, down)),
                _ => unreachable!("a pair has one or two hops"),
            };
            links.push((link.sinr_db, rate, snapshot.pair_coding_ability(pair)));
        }
        Ok(RateProbe {
            model: SemanticModel::from_config(&snapshot.config),
            links,
        })
    }

    fn rate(&self, pair: usize, tau: f64) -> f64 {
        let (db, bits, c) = self.links[pair];
        self.model.pair_rate(tau, c, db, bits)
    }
}

/// Runs one alignment session per pair before allocation.
///
/// Each pair aligns its own copy of the two drawn profiles (a task-specific
/// knowledge base at each end), so sessions are independent of each other
/// and of their order, and a pair's matching degree can only rise. Terminal
/// profiles in the returned snapshot stay as drawn; pairs carry the result.
pub fn align_snapshot(snapshot: &NetworkSnapshot, params: &KbSyncParams) -> Result<SyncOutcome> {
    let mut out = snapshot.clone();
    if !params.enabled {
        return Ok(SyncOutcome {
            snapshot: out,
            transferred_bits: 0.0,
            penalty: 0.0,
            accepted: 0,
            declined: 0,
        });
    }
    let probe = RateProbe::new(snapshot)?;
    let mut transferred_bits = 0.0;
    let (mut accepted, mut declined) = (0, 0);
    for (i, pair) in snapshot.pairs.iter().enumerate() {
        let src = snapshot.terminals[pair.src_td].knowledge;
        let peer = snapshot.peer_profile(pair);
        let mut session = SyncSession::new(src, peer, params.payload_bits_per_version);
        session.exchange_versions()?;
        let gain = probe.rate(i, session.aligned_tau()) - probe.rate(i, session.tau());
        let cost = session.transfer_cost_bits();
        if session.decide_update(gain, cost, params.cost_weight)? {
            session.complete_transfer()?;
            transferred_bits += session.transferred();
            accepted += 1;
        } else {
            declined += 1;
        }
        out.pairs[i].tau = session.tau();
    }
    Ok(SyncOutcome {
        snapshot: out,
        transferred_bits,
        penalty: params.cost_weight * transferred_bits,
        accepted,
        declined,
    })
}
