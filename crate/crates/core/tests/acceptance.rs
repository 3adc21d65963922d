//! Acceptance checks at full size. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.
//!
//! ```bash
//! cargo test --release -p sran --test acceptance
//! ```

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use common::{doubled, mirrored, rel_close};
use sran::allocator::waterfill::{marginal, marginal_at_sinr, solve};
use sran::kbsync::SyncSession;
use sran::model::pair_matching_degree;
use sran::semantics::SemanticModel;
use sran::sim::run_oracle_study;
use sran::{
    allocate, generate_drop, run_sweep, system_metrics, KnowledgeProfile, Mode, RunOptions, SimConfig, Strategy,
    SweepSpec, SweepTable, SweepVar,
};

struct Verdict {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { name, pass, detail }
}

/// Number of steps where `xs` decreases.
fn decreases(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| w[1] < w[0]).count()
}

fn series(table: &SweepTable) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    (
        table.stm_series(Strategy::KbAware),
        table.stm_series(Strategy::MaxSinrWaterfill),
        table.stm_series(Strategy::MaxSinrEven),
    )
}

fn fmt(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.0}")).collect::<Vec<_>>().join(" ")
}

fn load_trend() -> Verdict {
    let base = SimConfig {
        n_bs: 16,
        tau_mean: 0.7,
        n_drops: 100,
        ..SimConfig::default()
    };
    let spec = SweepSpec::new(base, SweepVar::NTd, vec![100.0, 150.0, 200.0, 250.0, 300.0]);
    let start = Instant::now();
    let table = run_sweep(&spec).unwrap();
    let elapsed = start.elapsed();
    let (kb, wf, even) = series(&table);
    let wins = (0..kb.len()).all(|i| kb[i] > wf[i] && kb[i] > even[i]);
    let gap: Vec<f64> = (0..kb.len()).map(|i| kb[i] - wf[i].max(even[i])).collect();
    let fast = elapsed <= Duration::from_secs(300);
    verdict(
        "load trend (n_td 100..300, 16 cells)",
        wins && decreases(&gap) <= 1 && fast,
        format!("kb_aware {} | gap {} | {:.1?}", fmt(&kb), fmt(&gap), elapsed),
    )
}

fn density_trend() -> Verdict {
    let base = SimConfig {
        n_td: 200,
        n_drops: 100,
        ..SimConfig::default()
    };
    let spec = SweepSpec::new(base, SweepVar::NBs, vec![8.0, 12.0, 16.0, 20.0, 24.0]);
    let table = run_sweep(&spec).unwrap();
    let (kb, wf, even) = series(&table);
    let wins = (0..kb.len()).all(|i| kb[i] > wf[i] && kb[i] > even[i]);
    let grows = [&kb, &wf, &even].iter().all(|s| decreases(s) <= 1);
    verdict(
        "density trend (n_bs 8..24, 200 TDs)",
        wins && grows,
        format!("kb_aware {} | maxsinr_wf {} | maxsinr_even {}", fmt(&kb), fmt(&wf), fmt(&even)),
    )
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Ratios `q` and weights `u` of one cell.
type Instance = (Vec<f64>, Vec<f64>);

/// `sum u_i B_i log2(1 + q_i / B_i)`, written out directly.
fn objective(q: &[f64], u: &[f64], bw: &[f64]) -> f64 {
    (0..q.len())
        .filter(|&i| bw[i] > 0.0)
        .map(|i| u[i] * bw[i] * (1.0 + q[i] / bw[i]).log2())
        .sum()
}

fn solver() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_kkt = 0.0f64;
    let mut worst_sum = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=8);
        let q: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e3, 1e10)).collect();
        let u: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-5, 1e-2)).collect();
        let budget = rng.random_range(1e5..2e7);
        let sol = solve(budget, &q, &u).unwrap();
        let sum: f64 = sol.bw.iter().sum();
        worst_sum = worst_sum.max((sum - budget).abs() / budget);
        for i in 0..n {
            let r = if sol.bw[i] > 0.0 {
                (u[i] * marginal(q[i], sol.bw[i]) - sol.lambda).abs() / sol.lambda
            } else {
                // a zero share must not be worth more than the water level
                ((u[i] * marginal_at_sinr(f64::MAX) - sol.lambda) / sol.lambda).max(0.0)
            };
            worst_kkt = worst_kkt.max(r);
        }
    }

    // Three endpoints sharing one 10 MHz cell as drops produce them: Rayleigh
    // faded path loss from 10 to 500 m, weights eps / L.
    let mut cell = |rng: &mut ChaCha8Rng| -> Instance {
        let q = (0..3)
            .map(|_| {
                let d: f64 = rng.random_range(10.0..500.0);
                let fade: f64 = Exp1.sample(rng);
                let pl_db = 128.1 + 37.6 * (d / 1000.0).log10();
                200.0 * 10f64.powf(-pl_db / 10.0) * fade / 3.9811e-18
            })
            .collect();
        let u = (0..3)
            .map(|_| {
                let tc: f64 = rng.random_range(0.0..1.0);
                rng.random_range(0.05..1.0) * tc / (8000.0 * (1.0 - 0.8 * tc))
            })
            .collect();
        (q, u)
    };
    // Far wider spreads, where some optimal shares fall below one grid step.
    let mut stress = |rng: &mut ChaCha8Rng| -> Instance {
        (
            (0..3).map(|_| log_uniform(rng, 1e4, 1e9)).collect(),
            (0..3).map(|_| log_uniform(rng, 1e-4, 1e-2)).collect(),
        )
    };
    let (grid_gap, grid_below) = grid_study(&mut rng, &mut cell);
    let (stress_gap, stress_below) = grid_study(&mut rng, &mut stress);
    verdict(
        "water-filling solver",
        worst_kkt <= 1e-6 && worst_sum <= 1e-9 && grid_gap <= 1e-3 && !grid_below && !stress_below,
        format!(
            "max KKT {worst_kkt:.2e}, max budget error {worst_sum:.2e}, max grid gap {grid_gap:.2e} \
             (wide-spread set {stress_gap:.2e}, never below the grid: {})",
            !grid_below && !stress_below
        ),
    )
}

/// 100 three-endpoint instances against a 10,011-point simplex grid
/// (m = 140). Returns the largest relative gap and whether the solver ever
/// fell below the grid's best point.
fn grid_study(
    rng: &mut ChaCha8Rng,
    draw: &mut dyn FnMut(&mut ChaCha8Rng) -> Instance,
) -> (f64, bool) {
    let m = 140;
    let budget = 1e7;
    let mut worst = 0.0f64;
    let mut below = false;
    for _ in 0..100 {
        let (q, u) = draw(rng);
        let sol = solve(budget, &q, &u).unwrap();
        let mut best = f64::NEG_INFINITY;
        for i in 0..=m {
            for j in 0..=(m - i) {
                let bw = [i, j, m - i - j].map(|x| budget * x as f64 / m as f64);
                best = best.max(objective(&q, &u, &bw));
            }
        }
        let ours = objective(&q, &u, &sol.bw);
        worst = worst.max((ours - best).abs() / ours);
        below |= ours < best * (1.0 - 1e-12);
    }
    (worst, below)
}

fn oracle_bounds() -> Verdict {
    let cfg = SimConfig {
        n_drops: 200,
        ..SimConfig::default()
    };
    let opts = RunOptions {
        oracle_grid: 8,
        ..RunOptions::default()
    };
    let study = run_oracle_study(&cfg, 3, &opts, None).unwrap();
    let oracle = study.table.strategies.iter().position(|&s| s == Strategy::Oracle).unwrap();
    let violations = study
        .stm
        .iter()
        .flat_map(|d| d.iter().map(move |&x| x > d[oracle] * (1.0 + 1e-9)))
        .filter(|&v| v)
        .count();
    verdict(
        "oracle bounds (200 instances, grid 8)",
        violations == 0,
        format!(
            "{violations} violations, mean STM(kb_aware)/STM(oracle) = {:.4}",
            study.mean_kb_ratio
        ),
    )
}

fn invariants() -> Verdict {
    let model = SemanticModel::from_config(&SimConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rate = |tau: f64, c: f64, db: f64| {
        let bits = 1e6 * (1.0 + 10f64.powf(db / 10.0)).log2();
        model.pair_rate(tau, c, db, bits)
    };
    let acc = |tau: f64, c: f64, db: f64| model.semantic_accuracy(tau, c, db, Mode::Semantic);
    let not_below = |a: f64, b: f64| b >= a - 1e-12 * a.abs();

    // Sorted random sweeps along each axis from random base points.
    let mut monotone = 0;
    for _ in 0..2000 {
        let (tau, c, db) = (rng.random_range(0.0..1.0), rng.random_range(0.6..1.0), rng.random_range(-10.0..40.0));
        let mut axis = |lo: f64, hi: f64| {
            let mut v: Vec<f64> = (0..20).map(|_| rng.random_range(lo..hi)).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let (taus, cs, dbs) = (axis(0.0, 1.0), axis(0.0, 1.0), axis(-20.0, 50.0));
        let point = |k: usize, x: f64| match k {
            0 => (x, c, db),
            1 => (tau, x, db),
            _ => (tau, c, x),
        };
        for (k, xs) in [taus, cs, dbs].iter().enumerate() {
            for w in xs.windows(2) {
                let (a, b) = (point(k, w[0]), point(k, w[1]));
                if !not_below(acc(a.0, a.1, a.2), acc(b.0, b.1, b.2)) {
                    monotone += 1;
                }
                if !not_below(rate(a.0, a.1, a.2), rate(b.0, b.1, b.2)) {
                    monotone += 1;
                }
            }
        }
    }

    let mut alignment = 0;
    for _ in 0..10_000 {
        let mut draw = || KnowledgeProfile::new(rng.random_range(0..=5), rng.random_range(0.0..=1.0));
        let (a, b) = (draw(), draw());
        let before = pair_matching_degree(&a, &b);
        let mut s = SyncSession::new(a, b, 1e6);
        s.exchange_versions().unwrap();
        s.decide_update(1.0, 0.0, 0.0).unwrap();
        s.complete_transfer().unwrap();
        let after = s.tau();
        if !(0.0..=1.0).contains(&before) || !(0.0..=1.0).contains(&after) || after < before {
            alignment += 1;
        }
    }

    let mut modes = 0;
    for _ in 0..10_000 {
        let tau = rng.random_range(0.0..model.tau_min_semcom);
        let mode = model.select_mode(tau, rng.random_range(0.0..=1.0), rng.random_range(-20.0..60.0));
        if mode == Mode::Semantic {
            modes += 1;
        }
    }

    let mut additivity = 0;
    let cfg = SimConfig {
        n_bs: 3,
        n_td: 20,
        ..SimConfig::default()
    };
    for drop in 0..10 {
        let half = generate_drop(&cfg, drop).unwrap();
        let both = doubled(&half);
        for s in Strategy::COMPARED {
            let d = allocate(&half, s).unwrap();
            let one = system_metrics(&half, &d).unwrap();
            let two = system_metrics(&both, &mirrored(&half, &both, &d)).unwrap();
            if !rel_close(two.stm, 2.0 * one.stm, 1e-9) {
                additivity += 1;
            }
        }
    }

    verdict(
        "invariant suites",
        monotone + alignment + modes + additivity == 0,
        format!(
            "violations: monotonicity {monotone}, alignment {alignment}, mode threshold {modes}, additivity {additivity}"
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.cfg");
    std::fs::write(&cfg, "n_bs = 4\nn_td = 40\nn_drops = 12\nseed = 31\n").unwrap();
    let mut outputs = Vec::new();
    for (run, workers) in ["1", "1", "2", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{run}"));
        let status = Command::new(env!("CARGO_BIN_EXE_sran-sim"))
            .args(["sweep", "--config", cfg.to_str().unwrap(), "--vary", "n_td", "--values", "20,40"])
            .args(["--workers", workers, "--out", out.to_str().unwrap()])
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        outputs.push((
            std::fs::read(out.join("sweep.csv")).unwrap(),
            std::fs::read(out.join("sweep.csv.meta")).unwrap(),
        ));
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    verdict(
        "CLI determinism (workers 1, 1, 2, 4)",
        same,
        format!("{} runs, csv and meta byte-identical: {same}", outputs.len()),
    )
}

fn main() -> ExitCode {
    let checks: [fn() -> Verdict; 6] = [load_trend, density_trend, solver, oracle_bounds, invariants, determinism];
    let mut failed = 0;
    for check in checks {
        let v = check();
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
