//! Drop generation, the per-drop pipeline, sweeps and result files.

pub mod output;
pub mod rng;
mod run;
mod scenario;
mod sweep;

pub use output::{csv_string, format_sig, meta_path, meta_string, write_csv, CSV_HEADER};
pub use run::{evaluate_prepared, prepare_drop, run_drop, run_drop_all, PreparedDrop, RunOptions};
pub use scenario::{generate_drop, oracle_instance, restrict_endpoints};
pub use sweep::{
    mean_std, run_oracle_study, run_sweep, OracleStudy, SweepRow, SweepSpec, SweepTable, SweepVar,
};
