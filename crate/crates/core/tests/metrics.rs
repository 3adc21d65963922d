mod common;

use common::{doubled, hand_rate, mirrored, network, rel_close, td};
use sran::allocator::associate_max_sinr;
use sran::channel::interference_at;
use sran::model::{Endpoint, Hop};
use sran::{
    allocate, generate_drop, system_metrics, AllocationDecision, Mode, NetworkSnapshot, PairKind, SimConfig,
    Strategy,
};

#[test]
fn no_pairs_no_throughput() {
    let cfg = SimConfig::default();
    let snap = network(&cfg, &[(0.0, 0.0)], &[td(10.0, 10.0, 0.7)], &[], None);
    let d = AllocationDecision::from_parts(&snap, &[], &[], Strategy::MaxSinrEven);
    let r = system_metrics(&snap, &d).unwrap();
    assert_eq!(r.stm, 0.0);
    assert_eq!(r.sse, 0.0);
    assert_eq!(r.see, 0.0);
}

#[test]
fn single_downlink_composes_by_hand() {
    let cfg = SimConfig::default();
    let mut t = td(400.0, 300.0, 0.85);
    t.version = 4;
    t.coding = 0.7;
    let snap = network(&cfg, &[(0.0, 0.0)], &[t], &[(PairKind::Scenario3Downlink, 0, None)], Some(vec![0.6]));
    let d = allocate(&snap, Strategy::MaxSinrEven).unwrap();
    let r = system_metrics(&snap, &d).unwrap();

    // 500 m with fading 0.6
    let pl_db = 128.1 + 37.6 * (0.5f64).log10();
    let gain = 10f64.powf(-pl_db / 10.0) * 0.6;
    let gamma = 1000.0 * gain / (3.9811e-18 * 10e6);
    let bits = 10e6 * (1.0 + gamma).log2();
    let tau = 0.85 * 0.9;
    let want = hand_rate(tau, 0.7, gamma, bits);
    assert!(rel_close(r.stm, want, 1e-12), "{} vs {want}", r.stm);
    assert!(rel_close(r.sse, want / 10e6, 1e-12));
    assert_eq!(r.pairs[0].mode, Mode::Semantic);
    // radio power of the serving BS plus the terminal's codec
    assert!(rel_close(r.total_power, 1000.0 + 100.0 * 0.7, 1e-15));
}

#[test]
fn disjoint_halves_add_up() {
    let cfg = SimConfig {
        n_bs: 3,
        n_td: 20,
        ..SimConfig::default()
    };
    for drop in 0..5 {
        let half = generate_drop(&cfg, drop).unwrap();
        let both = doubled(&half);
        for s in Strategy::COMPARED {
            let d = allocate(&half, s).unwrap();
            let one = system_metrics(&half, &d).unwrap();
            let two = system_metrics(&both, &mirrored(&half, &both, &d)).unwrap();
            assert!(rel_close(two.stm, 2.0 * one.stm, 1e-9), "{s}: {} vs {}", two.stm, one.stm);
            assert!(rel_close(two.sse, one.sse, 1e-9));
            assert!(rel_close(two.see, one.see, 1e-9));
        }
    }
}

#[test]
fn baselines_stay_local_on_disjoint_halves() {
    let cfg = SimConfig {
        n_bs: 3,
        n_td: 20,
        ..SimConfig::default()
    };
    for drop in 0..5 {
        let half = generate_drop(&cfg, drop).unwrap();
        let both = doubled(&half);
        let n_ep = half.endpoints().len();
        let assoc = associate_max_sinr(&both);
        assert!(assoc[..n_ep].iter().all(|&b| b < half.n_bs()));
        assert!(assoc[n_ep..].iter().all(|&b| b >= half.n_bs()));
        for s in [Strategy::MaxSinrWaterfill, Strategy::MaxSinrEven] {
            let one = system_metrics(&half, &allocate(&half, s).unwrap()).unwrap();
            let two = system_metrics(&both, &allocate(&both, s).unwrap()).unwrap();
            assert!(rel_close(two.stm, 2.0 * one.stm, 1e-9), "{s}: {} vs {}", two.stm, one.stm);
        }
    }
}

fn two_cell(interference: bool) -> NetworkSnapshot {
    let cfg = SimConfig {
        interference_enabled: interference,
        ..SimConfig::default()
    };
    network(
        &cfg,
        &[(0.0, 0.0), (600.0, 0.0)],
        &[td(100.0, 0.0, 0.7), td(500.0, 50.0, 0.7)],
        &[(PairKind::Scenario3Downlink, 0, None), (PairKind::Scenario3Uplink, 1, None)],
        Some(vec![1.0, 0.5, 0.8, 1.2]),
    )
}

#[test]
fn interference_off_is_zero() {
    let snap = two_cell(false);
    let d = allocate(&snap, Strategy::MaxSinrEven).unwrap();
    for ep in snap.endpoints() {
        assert_eq!(interference_at(ep, &snap, &d), 0.0);
    }
}

#[test]
fn lone_station_downlink_hears_nothing() {
    let cfg = SimConfig {
        interference_enabled: true,
        ..SimConfig::default()
    };
    let snap = network(
        &cfg,
        &[(0.0, 0.0)],
        &[td(100.0, 0.0, 0.7), td(-80.0, 30.0, 0.7)],
        &[(PairKind::Scenario3Downlink, 0, None), (PairKind::Scenario3Downlink, 1, None)],
        None,
    );
    let d = allocate(&snap, Strategy::MaxSinrEven).unwrap();
    for ep in snap.endpoints() {
        assert_eq!(interference_at(ep, &snap, &d), 0.0);
    }
}

#[test]
fn two_cells_single_interferer_term() {
    let snap = two_cell(true);
    let d = allocate(&snap, Strategy::MaxSinrEven).unwrap();
    assert_eq!(d.assoc(), vec![0, 1]);

    // Downlink victim at BS0 hears BS1 across its 10 MHz share.
    let down = Endpoint { pair: 0, hop: Hop::Downlink };
    let want = 1000.0 / 10e6 * snap.gain(0, 1) * 10e6;
    assert!(rel_close(interference_at(down, &snap, &d), want, 1e-12));

    // The uplink victim at BS1 has no other-cell uplink transmitter.
    let up = Endpoint { pair: 1, hop: Hop::Uplink };
    assert_eq!(interference_at(up, &snap, &d), 0.0);

    let quiet = system_metrics(&two_cell(false), &d).unwrap();
    let loud = system_metrics(&snap, &d).unwrap();
    assert!(loud.pairs[0].link.sinr < quiet.pairs[0].link.sinr);
    assert_eq!(loud.pairs[1].link.sinr, quiet.pairs[1].link.sinr);
}

#[test]
fn reported_modes_respect_the_threshold() {
    let cfg = SimConfig {
        n_bs: 4,
        n_td: 60,
        tau_mean: 0.4,
        ..SimConfig::default()
    };
    for drop in 0..5 {
        let snap = generate_drop(&cfg, drop).unwrap();
        for s in Strategy::COMPARED {
            let r = system_metrics(&snap, &allocate(&snap, s).unwrap()).unwrap();
            for (e, p) in r.pairs.iter().zip(&snap.pairs) {
                if p.tau < cfg.tau_min_semcom {
                    assert_eq!(e.mode, Mode::Bit);
                }
            }
        }
    }
}
