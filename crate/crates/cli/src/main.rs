//! `wavespread`: reproducible runs of the free-expansion tools.
//!
//! Exit codes: 0 success, 2 configuration error, 3 tolerance breach (the
//! artifact is still written).

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Artifact, Report};
use config::{Command, Flags, RunConfig};

#[derive(Parser)]
#[command(
    name = "wavespread",
    version,
    about = "Free expansion of Gaussian and Fock wavepackets"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Position-space evolution of a Gaussian, closed form against the grid propagator.
    Evolve(Flags),
    /// Momentum distribution of a Gaussian or Fock level, closed form against the grid spectrum.
    Momentum(Flags),
    /// Truncated Fock-space evolution against the grid propagator.
    Fock(Flags),
    /// Operator identity checks with residuals and thresholds.
    Verify(Flags),
    /// Time-of-flight momentum measurement.
    Tof(Flags),
}

impl Sub {
    fn split(self) -> (Command, Flags) {
        match self {
            Sub::Evolve(f) => (Command::Evolve, f),
            Sub::Momentum(f) => (Command::Momentum, f),
            Sub::Fock(f) => (Command::Fock, f),
            Sub::Verify(f) => (Command::Verify, f),
            Sub::Tof(f) => (Command::Tof, f),
        }
    }
}

const CONFIG_ERROR: u8 = 2;
const TOLERANCE_BREACH: u8 = 3;

fn write_artifact(config: &RunConfig, report: &Report) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &config.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match (&report.artifact, config.format) {
        (Artifact::Table(t), config::Format::Csv) => t.write_csv(config, &mut sink)?,
        (Artifact::Table(t), config::Format::Json) => {
            output::write_json(&output::envelope(config, t.to_json()), &mut sink)?
        }
        (Artifact::Json(v), _) => {
            output::write_json(&output::envelope(config, v.clone()), &mut sink)?
        }
    }
    sink.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CONFIG_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (command, flags) = cli.command.split();
    let config = match RunConfig::resolve(command, &flags) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let report = match commands::run(&config) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    if let Err(e) = write_artifact(&config, &report) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(CONFIG_ERROR);
    }
    match report.breach {
        Some(msg) => {
            eprintln!("tolerance breach: {msg}");
            ExitCode::from(TOLERANCE_BREACH)
        }
        None => ExitCode::SUCCESS,
    }
}
