//! One Monte Carlo drop on the default 16-cell layout, scored under every
//! strategy.
//!
//! ```bash
//! cargo run --release -p sran --example single_drop
//! cargo run --release -p sran --example single_drop -- 7    # another drop index
//! ```

use sran::allocator::allocate_kb_aware_traced;
use sran::sim::run_drop_all;
use sran::{generate_drop, Mode, PairKind, RunOptions, SimConfig, Strategy};

fn main() -> sran::Result<()> {
    let drop: u64 = std::env::args().nth(1).map_or(0, |s| s.parse().expect("drop index"));
    let cfg = SimConfig::default();
    let snap = generate_drop(&cfg, drop)?;

    let count = |k: PairKind| snap.pairs.iter().filter(|p| p.kind == k).count();
    let mean_tau = snap.pairs.iter().map(|p| p.tau).sum::<f64>() / snap.pairs.len() as f64;
    println!(
        "drop {drop}: {} cells, {} terminals, {} pairs ({} td-to-td, {} uplink, {} downlink), mean tau {:.3}",
        snap.n_bs(),
        snap.terminals.len(),
        snap.pairs.len(),
        count(PairKind::Scenario2),
        count(PairKind::Scenario3Uplink),
        count(PairKind::Scenario3Downlink),
        mean_tau
    );

    let reports = run_drop_all(&snap, &Strategy::COMPARED, &RunOptions::default())?;
    println!("\n{:<13} {:>12} {:>12} {:>12} {:>9} {:>9}", "strategy", "STM msg/s", "SSE", "SEE", "semantic", "sync");
    for (s, r) in Strategy::COMPARED.iter().zip(&reports) {
        let semantic = r.pairs.iter().filter(|p| p.mode == Mode::Semantic).count();
        println!(
            "{:<13} {:>12.1} {:>12.4e} {:>12.4e} {:>9} {:>9.2}",
            s.as_str(),
            r.stm,
            r.sse,
            r.see,
            semantic,
            r.kb_sync_penalty
        );
    }

    // How the greedy association and its improvement passes progress.
    let (decision, trace) = allocate_kb_aware_traced(&snap)?;
    println!("\nkb_aware estimates per pass: {:.1?}", trace.pass_estimates);
    println!("moves during improvement: {}", trace.moves);
    println!("endpoints per cell: {:?}", decision.bs_counts(snap.n_bs()));
    Ok(())
}
