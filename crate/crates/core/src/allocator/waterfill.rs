//! Weighted bandwidth water-filling under bandwidth-proportional noise.
//!
//! Maximizes `sum_i u_i f_i(B_i)` subject to `sum_i B_i = W`, `B_i >= 0`, with
//! `f_i(B) = B log2(1 + q_i / B)` and `q_i = p_i g_i / N0`. Each `f_i` is
//! strictly concave, so the optimum equalizes the weighted marginals
//! `u_i f_i'(B_i)` at a common multiplier `lambda`. The solver bisects on
//! `lambda` (in log space) and inverts each marginal by a safeguarded Newton
//! iteration.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Outer iterations before giving up.
pub const MAX_OUTER_ITERATIONS: usize = 200;
/// Required relative accuracy of the budget constraint before rescaling.
pub const BUDGET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillSolution {
    pub bw: Vec<f64>,
    /// Common weighted marginal utility at the optimum.
    pub lambda: f64,
    pub iterations: usize,
}

/// `f'(B)` written in terms of the SINR `s = q / B`:
/// `log2(1 + s) - s / (ln2 (1 + s))`.
pub fn marginal_at_sinr(s: f64) -> f64 {
    if s.is_infinite() {
        return f64::INFINITY;
    }
    if s < 1e-4 {
        let s2 = s * s;
        return (0.5 * s2 - 2.0 / 3.0 * s2 * s + 0.75 * s2 * s2) / LN_2;
    }
    (s.ln_1p() - s / (1.0 + s)) / LN_2
}

/// `f'(B)` for received-power-to-noise-density ratio `q`.
pub fn marginal(q: f64, bw: f64) -> f64 {
    if bw <= 0.0 {
        return f64::INFINITY;
    }
    marginal_at_sinr(q / bw)
}

/// `f(B) = B log2(1 + q / B)`.
pub fn utility(q: f64, bw: f64) -> f64 {
    if bw <= 0.0 {
        return 0.0;
    }
    bw * (q / bw).ln_1p() / LN_2
}

/// Solves `marginal_at_sinr(s) = target` for `s > 0`.
fn invert_marginal(target: f64) -> f64 {
    debug_assert!(target > 0.0 && target.is_finite());
    // Work in x = ln s, where the marginal is increasing and nearly linear for large s.
    let h = |x: f64| marginal_at_sinr(x.exp()) - target;
    let mut lo = -1.0;
    while h(lo) > 0.0 {
        lo *= 2.0;
    }
    let mut hi = 1.0;
    while h(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = h(x);
        if fx.abs() <= 1e-15 * target {
            break;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
        let s = x.exp();
        let slope = s * s / (LN_2 * (1.0 + s) * (1.0 + s));
        let newton = x - fx / slope;
        if newton == x {
            break;
        }
        x = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    x.exp()
}

/// Bandwidth at which `u f'(B) = lambda`.
/// Zero when even the largest finite SINR cannot reach the target; the true
/// share is then far below anything representable.
fn demand(q: f64, u: f64, lambda: f64) -> f64 {
    let target = lambda / u;
    if target >= marginal_at_sinr(f64::MAX) {
        return 0.0;
    }
    q / invert_marginal(target)
}

/// Splits `budget` among endpoints with ratios `q` and weights `u`.
///
/// Endpoints with zero weight (or zero `q`) receive nothing. If no endpoint
/// has positive weight the budget is split evenly.
pub fn solve(budget: f64, q: &[f64], u: &[f64]) -> Result<WaterfillSolution> {
    assert_eq!(q.len(), u.len());
    let n = q.len();
    if n == 0 {
        return Ok(WaterfillSolution {
            bw: Vec::new(),
            lambda: 0.0,
            iterations: 0,
        });
    }
    let active: Vec<usize> = (0..n).filter(|&i| u[i] > 0.0 && q[i] > 0.0).collect();
    let mut bw = vec![0.0; n];
    match active.len() {
        0 => {
            bw.iter_mut().for_each(|b| *b = budget / n as f64);
            return Ok(WaterfillSolution {
                bw,
                lambda: 0.0,
                iterations: 0,
            });
        }
        1 => {
            let i = active[0];
            bw[i] = budget;
            return Ok(WaterfillSolution {
                bw,
                lambda: u[i] * marginal(q[i], budget),
                iterations: 0,
            });
        }
        _ => {}
    }

    // At lambda_lo every active endpoint wants at least the whole budget; at
    // lambda_hi each wants at most an equal share.
    let m = active.len() as f64;
    let mut lo = active
        .iter()
        .map(|&i| u[i] * marginal(q[i], budget))
        .fold(f64::INFINITY, f64::min);
    let mut hi = active
        .iter()
        .map(|&i| u[i] * marginal(q[i], budget / m))
        .fold(0.0, f64::max);

    let total = |lambda: f64, out: &mut [f64]| -> f64 {
        let mut sum = 0.0;
        for &i in &active {
            out[i] = demand(q[i], u[i], lambda);
            sum += out[i];
        }
        sum
    };

    let mut lambda = (lo * hi).sqrt();
    let mut sum = total(lambda, &mut bw);
    let mut iterations = 1;
    while iterations < MAX_OUTER_ITERATIONS {
        if (sum - budget).abs() <= 1e-13 * budget || hi / lo - 1.0 <= 1e-15 {
            break;
        }
        if sum > budget {
            lo = lambda;
        } else {
            hi = lambda;
        }
        lambda = (lo * hi).sqrt();
        sum = total(lambda, &mut bw);
        iterations += 1;
    }
    let residual = (sum - budget).abs() / budget;
    if !(residual <= BUDGET_TOL) {
        return Err(Error::Convergence {
            iterations,
            residual,
        });
    }
    let scale = budget / sum;
    for &i in &active {
        bw[i] *= scale;
    }
    Ok(WaterfillSolution {
        bw,
        lambda,
        iterations,
    })
}
