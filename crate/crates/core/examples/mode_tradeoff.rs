//! Semantic versus bit transmission.
//!
//! Semantic mode shortens messages as knowledge matching `tau` and coding
//! ability `c` grow, but its accuracy is capped by `tau * c`. Below the
//! matching threshold bits are mandatory. The table shows recovered messages
//! per second on a 1 MHz link and the mode the selector picks.
//!
//! ```bash
//! cargo run --release -p sran --example mode_tradeoff
//! ```

use sran::semantics::SemanticModel;
use sran::{Mode, SimConfig};

fn main() {
    let model = SemanticModel::from_config(&SimConfig::default());
    let c = 0.9;
    let bw = 1e6;
    let taus = [0.1, 0.25, 0.3, 0.5, 0.7, 0.9, 1.0];

    for sinr_db in [0.0, 5.0, 10.0, 20.0] {
        let bits = bw * (1.0 + 10f64.powf(sinr_db / 10.0)).log2();
        println!("SINR {sinr_db} dB, {:.2} Mbit/s, coding ability {c}", bits / 1e6);
        println!("{:>6} {:>10} {:>10} {:>9}", "tau", "semantic", "bit", "chosen");
        for tau in taus {
            let sem = bits * model.efficiency(tau, c, sinr_db, Mode::Semantic);
            let bit = bits * model.efficiency(tau, c, sinr_db, Mode::Bit);
            let chosen = model.select_mode(tau, c, sinr_db);
            println!("{tau:>6} {sem:>10.1} {bit:>10.1} {:>9?}", chosen);
        }
        println!();
    }
}
