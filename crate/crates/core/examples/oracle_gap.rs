//! How close the heuristics get to the exhaustive optimum on small drops
//! (at most two cells and three endpoints).
//!
//! ```bash
//! cargo run --release -p sran --example oracle_gap
//! cargo run --release -p sran --example oracle_gap -- 200
//! ```

use sran::sim::run_oracle_study;
use sran::{RunOptions, SimConfig};

fn main() -> sran::Result<()> {
    let mut cfg = SimConfig::default();
    cfg.n_drops = std::env::args().nth(1).map_or(50, |s| s.parse().expect("drop count"));
    let study = run_oracle_study(&cfg, 3, &RunOptions::default(), None)?;

    println!("{} drops", cfg.n_drops);
    println!("{:<13} {:>12} {:>12} {:>14}", "strategy", "mean STM", "sd", "worst/oracle");
    let oracle = study.table.strategies.len() - 1;
    for (k, s) in study.table.strategies.iter().enumerate() {
        let worst = study
            .stm
            .iter()
            .filter(|d| d[oracle] > 0.0)
            .map(|d| d[k] / d[oracle])
            .fold(f64::INFINITY, f64::min);
        let row = study.table.row(study.table.values[0], *s).expect("row per strategy");
        println!("{:<13} {:>12.1} {:>12.1} {:>14.4}", s.as_str(), row.mean_stm, row.std_stm, worst);
    }
    println!("mean STM(kb_aware) / STM(oracle) = {:.4}", study.mean_kb_ratio);
    Ok(())
}
