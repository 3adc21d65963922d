//! Network load sweep: mean STM of every strategy as the number of
//! terminals grows on a 16-cell layout.
//!
//! ```bash
//! cargo run --release -p sran --example td_sweep          # 100 drops
//! cargo run --release -p sran --example td_sweep -- 20    # quicker
//! ```

use std::time::Instant;

use sran::{run_sweep, SimConfig, Strategy, SweepSpec, SweepVar};

fn main() -> sran::Result<()> {
    let mut base = SimConfig::default();
    base.n_bs = 16;
    base.tau_mean = 0.7;
    if let Some(n) = std::env::args().nth(1) {
        base.n_drops = n.parse().expect("drop count");
    }

    let spec = SweepSpec::new(base, SweepVar::NTd, vec![100.0, 150.0, 200.0, 250.0, 300.0]);
    let start = Instant::now();
    let table = run_sweep(&spec)?;
    let elapsed = start.elapsed();

    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "n_td", "kb_aware", "maxsinr_wf", "maxsinr_even", "gain");
    let kb = table.stm_series(Strategy::KbAware);
    let wf = table.stm_series(Strategy::MaxSinrWaterfill);
    let even = table.stm_series(Strategy::MaxSinrEven);
    for (i, n) in table.values.iter().enumerate() {
        let best = wf[i].max(even[i]);
        println!(
            "{:>6} {:>12.1} {:>12.1} {:>12.1} {:>10.1}",
            n, kb[i], wf[i], even[i], kb[i] - best
        );
    }
    println!("{} drops per point in {:.1?}", spec.n_drops, elapsed);
    Ok(())
}
