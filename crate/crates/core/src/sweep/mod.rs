//! Configured parameter sweeps and their file outputs.

pub mod config;
pub mod output;
pub mod runner;
pub mod svg;

pub use config::{parse_config, GapSearch, Outputs, RunConfig, Sweep};
pub use output::{render_csv, write_atomic, write_partial, CSV_HEADER};
pub use runner::{
    evaluate_point, gap_values, run_gap_sweep, run_temperature_sweep, temperature_values, SweepFailure, SweepOutcome,
    SweepRow,
};
