//! # sran
//!
//! System-level simulation and radio resource management for semantic-aware
//! radio access networks.
//!
//! Terminals exchange messages either as plain bits or through semantic
//! codecs whose success depends on how well the two ends' knowledge bases
//! match. A drop places base stations and terminals, draws fading and
//! knowledge profiles, aligns knowledge bases, allocates association and
//! bandwidth with one of several strategies, and scores the result in
//! recovered messages per second.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`config`] | `key = value` configuration file and validation |
//! | [`model`] | base stations, terminals, traffic pairs, knowledge matching |
//! | [`channel`] | path loss, SINR, Shannon rate, two-hop composition, interference |
//! | [`semantics`] | accuracy, message length, mode selection, network metrics |
//! | [`allocator`] | `kb_aware`, `maxsinr_wf`, `maxsinr_even` and the exhaustive oracle |
//! | [`kbsync`] | version-exchange alignment protocol |
//! | [`sim`] | drop generation, sweeps, CSV output |
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --release -p sran --example single_drop
//! cargo run --release -p sran --example waterfilling
//! cargo run --release -p sran --example kb_alignment
//! cargo run --release -p sran --example mode_tradeoff
//! cargo run --release -p sran --example oracle_gap
//! cargo run --release -p sran --example td_sweep
//! cargo run --release -p sran --example bs_sweep
//! ```

pub mod allocator;
pub mod channel;
pub mod config;
pub mod error;
pub mod kbsync;
pub mod model;
pub mod semantics;
pub mod sim;

pub use allocator::{allocate, AllocationDecision, Strategy};
pub use config::{validate_config, SimConfig};
pub use error::{Error, Result};
pub use model::{KnowledgeProfile, Mode, NetworkSnapshot, PairKind};
pub use semantics::{system_metrics, MetricReport};
pub use sim::{generate_drop, run_drop, run_sweep, write_csv, RunOptions, SweepSpec, SweepTable, SweepVar};
