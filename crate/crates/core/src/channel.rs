//! Physical-layer link math: path loss, SINR, Shannon rate and two-hop composition.

use serde::Serialize;

use crate::allocator::AllocationDecision;
use crate::error::{Error, Result};
use crate::model::{Endpoint, Hop, NetworkSnapshot};

/// Distances below this are clamped (m).
pub const MIN_DISTANCE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkState {
    pub gain: f64,
    pub sinr: f64,
    pub sinr_db: f64,
    pub bandwidth: f64,
}

impl LinkState {
    pub fn new(gain: f64, sinr: f64, bandwidth: f64) -> Self {
        LinkState {
            gain,
            sinr,
            sinr_db: to_db(sinr),
            bandwidth,
        }
    }

    /// A hop that received no bandwidth and carries nothing.
    pub fn idle(gain: f64) -> Self {
        LinkState::new(gain, 0.0, 0.0)
    }

    pub fn bit_rate(&self) -> f64 {
        bit_rate(self.bandwidth, self.sinr)
    }
}

/// `10 log10(x)`; zero maps to negative infinity.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Macro-cell log-distance path loss in dB, `128.1 + 37.6 log10(d / 1 km)`.
pub fn path_loss_db(distance: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::Domain(format!(
            "path loss needs a positive distance, got {distance}"
        )));
    }
    Ok(path_loss_db_clamped(distance))
}

fn path_loss_db_clamped(distance: f64) -> f64 {
    let d = distance.max(MIN_DISTANCE);
    128.1 + 37.6 * (d / 1000.0).log10()
}

/// Linear power gain corresponding to the path loss at `distance`.
/// Coincident positions are treated as the clamp distance.
pub fn path_loss_linear(distance: f64) -> f64 {
    from_db(-path_loss_db_clamped(distance))
}

/// `p * g / (N0 * B + I)`; noise grows with the occupied bandwidth.
pub fn sinr(p_tx: f64, gain: f64, bandwidth: f64, noise_psd: f64, interference: f64) -> Result<f64> {
    if !(bandwidth > 0.0) {
        return Err(Error::Domain(format!(
            "SINR needs a positive bandwidth, got {bandwidth}"
        )));
    }
    Ok(p_tx * gain / (noise_psd * bandwidth + interference))
}

/// Shannon rate `B log2(1 + sinr)` in bit/s.
pub fn bit_rate(bandwidth: f64, sinr: f64) -> f64 {
    if bandwidth <= 0.0 {
        return 0.0;
    }
    bandwidth * sinr.ln_1p() / std::f64::consts::LN_2
}

/// Bottleneck composition of the two radio hops of a terminal-to-terminal pair.
/// The core network between them is lossless.
pub fn e2e_compose(uplink: &LinkState, downlink: &LinkState) -> LinkState {
    LinkState::new(
        uplink.gain.min(downlink.gain),
        uplink.sinr.min(downlink.sinr),
        uplink.bandwidth.min(downlink.bandwidth),
    )
}

/// End-to-end bit rate: the slower hop.
pub fn e2e_bit_rate(uplink: &LinkState, downlink: &LinkState) -> f64 {
    uplink.bit_rate().min(downlink.bit_rate())
}

/// Co-channel interference (mW) received by `victim` under full frequency reuse.
///
/// Downlink victims hear every other base station at its budget-wide power
/// spectral density. Uplink victims hear the uplink terminals of other cells
/// at their own allocated spectral density. Transmitters inside the serving
/// cell are orthogonal and do not interfere.
pub fn interference_at(
    victim: Endpoint,
    snapshot: &NetworkSnapshot,
    decision: &AllocationDecision,
) -> f64 {
    if !snapshot.config.interference_enabled {
        return 0.0;
    }
    let Some(slot) = decision.slot(victim) else {
        return 0.0;
    };
    let victim_bw = slot.bw;
    if victim_bw <= 0.0 {
        return 0.0;
    }
    let serving = slot.bs;
    let td = snapshot.endpoint_terminal(victim);
    let mut total = 0.0;
    match victim.hop {
        Hop::Downlink => {
            for bs in &snapshot.base_stations {
                if bs.id == serving {
                    continue;
                }
                let psd = bs.tx_power / bs.bw_budget;
                total += psd * snapshot.gain(td, bs.id) * victim_bw;
            }
        }
        Hop::Uplink => {
            for other in decision.slots() {
                if other.endpoint == victim
                    || other.endpoint.hop != Hop::Uplink
                    || other.bs == serving
                    || other.bw <= 0.0
                {
                    continue;
                }
                let other_td = snapshot.endpoint_terminal(other.endpoint);
                let psd = snapshot.terminals[other_td].tx_power / other.bw;
                total += psd * snapshot.gain(other_td, serving) * victim_bw;
            }
        }
    }
    total
}
