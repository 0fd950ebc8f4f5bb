//! Command-line harness for the grasswig toolkit: oracle file generation,
//! preservation checks, map classification, and subspace-pair diagnostics,
//! all speaking JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod generate;
pub mod json;

pub use commands::{cmd_angles, cmd_aset_probe, cmd_check, cmd_gen_map, cmd_reconstruct, CmdOutput};
pub use config::{ExperimentConfig, GeneratorKind, GeneratorSpec, Tolerances};
pub use error::{CliError, Result};
