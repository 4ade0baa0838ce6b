use std::process::ExitCode;

use clap::{Parser, Subcommand};

use projgap::harness::{self, CommandOutput, ExperimentConfig};

#[derive(Parser)]
#[command(name = "projgap", version, about = "Spectral gaps and adiabatic dynamics for projector-target interpolations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and effective spectrum on a μ grid.
    Spectrum(ExperimentConfig),
    /// Crossover point, minimum gap, interval and runtime estimates.
    Summary(ExperimentConfig),
    /// Simulate a schedule and report the trajectory.
    Evolve(ExperimentConfig),
    /// Fit required evolution time against α over Grover sizes.
    Scaling(ExperimentConfig),
    /// Cross-check exact, dense and effective results.
    Validate(ExperimentConfig),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, run): (ExperimentConfig, fn(&ExperimentConfig) -> projgap::Result<CommandOutput>) =
        match cli.command {
            Command::Spectrum(c) => (c, harness::spectrum),
            Command::Summary(c) => (c, harness::summary),
            Command::Evolve(c) => (c, harness::evolve),
            Command::Scaling(c) => (c, harness::scaling),
            Command::Validate(c) => (c, harness::validate),
        };
    let result = cfg.with_file().and_then(|cfg| {
        let out = run(&cfg)?;
        let text = harness::emit(&cfg, &out)?;
        Ok((out.status, text))
    });
    match result {
        Ok((status, text)) => {
            if let Some(t) = text {
                print!("{t}");
            }
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code_for(&e) as u8)
        }
    }
}
