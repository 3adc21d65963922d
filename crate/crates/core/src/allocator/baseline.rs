use crate::channel::sinr;
use crate::error::Result;
use crate::model::NetworkSnapshot;

use super::members_by_bs;
use super::waterfill;

/// Attaches every endpoint to the base station with the highest full-band
/// SINR in its direction. Ties go to the lowest BS id.
pub fn associate_max_sinr(snapshot: &NetworkSnapshot) -> Vec<usize> {
    let noise = snapshot.config.noise_psd;
    snapshot
        .endpoints()
        .into_iter()
        .map(|ep| {
            let td = snapshot.endpoint_terminal(ep);
            let mut best = (0, f64::NEG_INFINITY);
            for bs in &snapshot.base_stations {
                let p = snapshot.endpoint_tx_power(ep, bs.id);
                let s = sinr(p, snapshot.gain(td, bs.id), bs.bw_budget, noise, 0.0)
                    .expect("validated bandwidth budget");
                if s > best.1 {
                    best = (bs.id, s);
                }
            }
            best.0
        })
        .collect()
}

/// Equal split of each base station's budget among its endpoints.
pub fn bandwidth_even(snapshot: &NetworkSnapshot, assoc: &[usize]) -> Vec<f64> {
    let members = members_by_bs(assoc, snapshot.n_bs());
    let mut bw = vec![0.0; assoc.len()];
    for (bs, eps) in members.iter().enumerate() {
        if eps.is_empty() {
            continue;
        }
        let share = snapshot.base_stations[bs].bw_budget / eps.len() as f64;
        for &i in eps {
            bw[i] = share;
        }
    }
    bw
}

/// Per-BS weighted water-filling (see [`waterfill::solve`]).
pub fn bandwidth_waterfill(
    snapshot: &NetworkSnapshot,
    assoc: &[usize],
    weights: &[f64],
) -> Result<Vec<f64>> {
    assert_eq!(assoc.len(), weights.len());
    let endpoints = snapshot.endpoints();
    let members = members_by_bs(assoc, snapshot.n_bs());
    let mut bw = vec![0.0; assoc.len()];
    for (bs, eps) in members.iter().enumerate() {
        if eps.is_empty() {
            continue;
        }
        let q: Vec<f64> = eps.iter().map(|&i| snapshot.endpoint_q(endpoints[i], bs)).collect();
        let u: Vec<f64> = eps.iter().map(|&i| weights[i]).collect();
        let sol = waterfill::solve(snapshot.base_stations[bs].bw_budget, &q, &u)?;
        for (&i, b) in eps.iter().zip(sol.bw) {
            bw[i] = b;
        }
    }
    Ok(bw)
}
