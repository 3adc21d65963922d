use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sran::allocator::{Strategy, MAX_ORACLE_ENDPOINTS, MAX_ORACLE_GRID};
use sran::error::{Error, Result};
use sran::kbsync::KbSyncParams;
use sran::sim::{run_oracle_study, run_sweep, write_csv, RunOptions, SweepSpec, SweepTable, SweepVar};
use sran::{validate_config, SimConfig};

#[derive(Parser)]
#[command(name = "sran-sim", version, about = "Semantic-aware RAN system-level simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo run of the configuration as given.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Single strategy; all three compared strategies when omitted.
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, value_enum, default_value = "on")]
        kb_sync: Toggle,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep one parameter and write `sweep.csv`.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        vary: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        strategies: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "on")]
        kb_sync: Toggle,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare every strategy against the exhaustive oracle on small drops.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_endpoints: usize,
        #[arg(long, default_value_t = MAX_ORACLE_GRID)]
        grid: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "on")]
        kb_sync: Toggle,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<SimConfig> {
    let mut cfg = SimConfig::from_file(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    validate_config(cfg)
}

fn options(kb_sync: Toggle) -> RunOptions {
    RunOptions {
        kb_sync: KbSyncParams {
            enabled: matches!(kb_sync, Toggle::On),
            ..KbSyncParams::default()
        },
        ..RunOptions::default()
    }
}

fn parse_strategies(ids: &[String]) -> Result<Vec<Strategy>> {
    ids.iter().map(|s| s.parse()).collect()
}

fn emit(table: &SweepTable, dir: &Path, name: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    write_csv(table, &path)?;
    for r in &table.rows {
        println!(
            "{}={} {:<13} stm={:.1} (sd {:.1}) sse={:.4e} see={:.4e}",
            r.sweep_var, r.sweep_value, r.strategy.as_str(), r.mean_stm, r.std_stm, r.mean_sse, r.mean_see
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, seed, strategy, kb_sync, workers, out } => {
            let cfg = load(&config, seed)?;
            let mut spec = SweepSpec::new(cfg.clone(), SweepVar::NTd, vec![cfg.n_td as f64]);
            if let Some(s) = strategy {
                spec.strategies = vec![s.parse()?];
            }
            spec.options = options(kb_sync);
            spec.workers = workers;
            emit(&run_sweep(&spec)?, &out, "run.csv")
        }
        Command::Sweep { config, vary, values, strategies, seed, kb_sync, workers, out } => {
            let cfg = load(&config, seed)?;
            let mut spec = SweepSpec::new(cfg, vary.parse()?, values);
            if let Some(ids) = strategies {
                spec.strategies = parse_strategies(&ids)?;
            }
            spec.options = options(kb_sync);
            spec.workers = workers;
            emit(&run_sweep(&spec)?, &out, "sweep.csv")
        }
        Command::Oracle { config, max_endpoints, grid, seed, kb_sync, workers, out } => {
            let cfg = load(&config, seed)?;
            if max_endpoints == 0 || max_endpoints > MAX_ORACLE_ENDPOINTS {
                return Err(Error::Size(format!(
                    "--max-endpoints {max_endpoints} outside 1..={MAX_ORACLE_ENDPOINTS}"
                )));
            }
            if grid == 0 || grid > MAX_ORACLE_GRID {
                return Err(Error::Size(format!("--grid {grid} outside 1..={MAX_ORACLE_GRID}")));
            }
            let mut opts = options(kb_sync);
            opts.oracle_grid = grid;
            let study = run_oracle_study(&cfg, max_endpoints, &opts, workers)?;
            emit(&study.table, &out, "oracle.csv")?;
            println!("mean STM(kb_aware) / STM(oracle) = {:.6}", study.mean_kb_ratio);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
