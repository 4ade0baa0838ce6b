//! Experiment configuration, report rendering and the commands behind the
//! `projgap` binary.

mod commands;
mod config;
mod fit;
mod table;

use std::fs;

pub use commands::{
    default_gamma, evolve, exit_code_for, mu_grid, scaling, spectrum, summary, validate,
    CommandOutput, Status,
};
pub use config::{
    parse_random_spec, ExperimentConfig, OutputFormat, ScheduleName, DEFAULT_GRID, DEFAULT_NS,
    DEFAULT_STEPS, DEFAULT_TARGET,
};
pub use fit::{fit_power_law, ScalingFitResult};
pub use table::{fmt_float, Cell, Report, SCHEMA};

use crate::Result;

/// Renders `out` in the configured format and writes it to `--out`, or
/// returns it for printing when no path is set.
pub fn emit(cfg: &ExperimentConfig, out: &CommandOutput) -> Result<Option<String>> {
    let text = match cfg.format() {
        OutputFormat::Csv => out.report.to_csv(),
        OutputFormat::Json => out.report.to_json(),
    };
    match &cfg.out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
