//! Configuration, run directories and the batch commands.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{
    available_memory, cmd_param_scan, cmd_run_forced, cmd_run_unforced, cmd_verify, preflight, CliOptions,
    ScanSpec, FORCED_FIELDS, UNFORCED_FIELDS,
};
pub use config::{Flags, GridSpec, RunConfig, Scheme};
