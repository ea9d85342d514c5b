//! Library half of the `bpec` command-line tool.

pub mod commands;
pub mod config;
pub mod format;

pub use commands::{cmd_figure, cmd_region, cmd_simulate, cmd_sweep, sweep_csv, Figure, SWEEP_HEADER};
pub use config::{parse_number, EtaGrid, FileConfig, RunConfig, SchemeArg};
