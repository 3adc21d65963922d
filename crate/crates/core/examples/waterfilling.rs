//! Weighted water-filling inside one cell.
//!
//! Four endpoints share 10 MHz. Each has a received-power-to-noise-density
//! ratio `q` and a weight `u` (messages recovered per bit). The solver
//! equalizes the weighted marginals `u f'(B)`; an even split does not.
//!
//! ```bash
//! cargo run --release -p sran --example waterfilling
//! ```

use sran::allocator::waterfill::{marginal, solve, utility};

fn main() -> sran::Result<()> {
    let budget = 10e6;
    let q = [4e12, 6e11, 9e10, 2e10];
    let u = [1.0e-4, 1.3e-4, 1.6e-4, 1.8e-4];

    let sol = solve(budget, &q, &u)?;
    let even = vec![budget / q.len() as f64; q.len()];

    println!("{:>3} {:>10} {:>9} {:>12} {:>12} {:>10}", "i", "q", "u", "share MHz", "u f'(B)", "SINR dB");
    for i in 0..q.len() {
        let b = sol.bw[i];
        println!(
            "{:>3} {:>10.2e} {:>9.2e} {:>12.4} {:>12.6e} {:>10.2}",
            i,
            q[i],
            u[i],
            b / 1e6,
            u[i] * marginal(q[i], b),
            10.0 * (q[i] / b).log10()
        );
    }
    println!("water level lambda = {:.6e} after {} bisection steps", sol.lambda, sol.iterations);

    let score = |bw: &[f64]| -> f64 { (0..q.len()).map(|i| u[i] * utility(q[i], bw[i])).sum() };
    let (wf, ev) = (score(&sol.bw), score(&even));
    println!("\nweighted throughput: water-filling {wf:.1} msg/s, even split {ev:.1} msg/s (+{:.2}%)", 100.0 * (wf / ev - 1.0));
    Ok(())
}
