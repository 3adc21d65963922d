//! Densification sweep: 200 terminals served by 8 to 24 base stations.
//!
//! ```bash
//! cargo run --release -p sran --example bs_sweep
//! cargo run --release -p sran --example bs_sweep -- 20
//! ```

use sran::{run_sweep, SimConfig, Strategy, SweepSpec, SweepVar};

fn main() -> sran::Result<()> {
    let mut base = SimConfig::default();
    base.n_td = 200;
    if let Some(n) = std::env::args().nth(1) {
        base.n_drops = n.parse().expect("drop count");
    }
    let spec = SweepSpec::new(base, SweepVar::NBs, vec![8.0, 12.0, 16.0, 20.0, 24.0]);
    let table = run_sweep(&spec)?;

    print!("{:>6}", "n_bs");
    for s in Strategy::COMPARED {
        print!(" {:>14}", s.as_str());
    }
    println!();
    for &v in &table.values {
        print!("{v:>6}");
        for s in Strategy::COMPARED {
            let r = table.row(v, s).expect("row per strategy");
            print!(" {:>14.1}", r.mean_stm);
        }
        println!();
    }

    // Per-drop spread, the same numbers the CSV carries.
    let r = table.row(16.0, Strategy::KbAware).expect("n_bs = 16 row");
    println!(
        "\nkb_aware at 16 cells: {:.1} +/- {:.1} msg/s, SSE {:.3e} msg/s/Hz, SEE {:.3e} msg/s/mW",
        r.mean_stm, r.std_stm, r.mean_sse, r.mean_see
    );
    Ok(())
}
