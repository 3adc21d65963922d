//! Knowledge-base alignment: one session step by step, then a whole drop
//! under increasing transfer prices.
//!
//! ```bash
//! cargo run --release -p sran --example kb_alignment
//! ```

use sran::kbsync::{align_snapshot, KbSyncParams, SyncSession};
use sran::{generate_drop, KnowledgeProfile, SimConfig};

fn main() -> sran::Result<()> {
    // A terminal two versions behind the application server.
    let terminal = KnowledgeProfile::new(3, 0.8);
    let mut session = SyncSession::new(terminal, KnowledgeProfile::server(), 1e6);
    println!("{:?}: tau {:.3}", session.state(), session.tau());
    session.exchange_versions()?;
    println!(
        "{:?}: gap {:?}, aligned tau {:.3}, download {:.0} bits",
        session.state(),
        session.gap().unwrap(),
        session.aligned_tau(),
        session.transfer_cost_bits()
    );
    // Accept: pretend the throughput gain is worth 5 msg/s against 1e-6 msg/s per bit.
    session.decide_update(5.0, session.transfer_cost_bits(), 1e-6)?;
    println!("{:?}", session.state());
    let (a, b) = session.complete_transfer()?;
    println!("{:?}: versions {} / {}, tau {:.3}", session.state(), a.version, b.version, session.tau());

    // A whole drop: the pricier the transfer, the fewer sessions pay off.
    let snap = generate_drop(&SimConfig::default(), 0)?;
    let mean = |taus: &mut dyn Iterator<Item = f64>| {
        let v: Vec<f64> = taus.collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    println!("\ndrop 0, {} pairs, mean tau as drawn {:.4}", snap.pairs.len(), mean(&mut snap.pairs.iter().map(|p| p.tau)));
    println!("{:>10} {:>9} {:>9} {:>10} {:>12} {:>12}", "cost/bit", "accepted", "declined", "mean tau", "bits", "penalty");
    for cost_weight in [0.0, 1e-7, 1e-6, 1e-5, 1e-4] {
        let params = KbSyncParams {
            cost_weight,
            ..KbSyncParams::default()
        };
        let out = align_snapshot(&snap, &params)?;
        println!(
            "{:>10.0e} {:>9} {:>9} {:>10.4} {:>12.3e} {:>12.3}",
            cost_weight,
            out.accepted,
            out.declined,
            mean(&mut out.snapshot.pairs.iter().map(|p| p.tau)),
            out.transferred_bits,
            out.penalty
        );
    }
    Ok(())
}
