//! Run configuration: command-line flags merged over an optional config file.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use wavespread::{Displacement, PhysParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Evolve,
    Momentum,
    Fock,
    Verify,
    Tof,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Evolve => "evolve",
            Command::Momentum => "momentum",
            Command::Fock => "fock",
            Command::Verify => "verify",
            Command::Tof => "tof",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults of [`RunConfig`].
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Oscillator frequency defining the initial width.
    #[arg(long, conflicts_with = "sigma")]
    pub omega: Option<f64>,
    /// Initial position standard deviation; sets omega = hbar / (2 m sigma^2).
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Initial momentum offset.
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Initial position offset.
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Dimensionless times omega*t, comma separated.
    #[arg(long = "omega-t", value_delimiter = ',')]
    pub omega_t: Option<Vec<f64>>,
    #[arg(long = "grid-points")]
    pub grid_points: Option<usize>,
    /// Fock level of the initial state.
    #[arg(long = "fock-n")]
    pub fock_n: Option<usize>,
    /// Fock-space truncation dimension.
    #[arg(long = "trunc-N")]
    pub trunc_n: Option<usize>,
    /// Tolerance; exceeding it exits with code 3.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Disentangling parameters k, comma separated (verify).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub k: Option<Vec<f64>>,
    /// Only check the commutation relations (verify).
    #[arg(long)]
    pub commutators: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML or JSON file with run configuration fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved configuration, embedded in every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub mass: f64,
    pub hbar: f64,
    pub omega: f64,
    pub x0: f64,
    pub p0: f64,
    pub omega_t: Vec<f64>,
    pub grid_points: usize,
    pub fock_n: usize,
    pub trunc_n: usize,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub k: Vec<f64>,
    pub commutators_only: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Evolve,
            mass: 1.0,
            hbar: 1.0,
            omega: 1.0,
            x0: 0.0,
            p0: 0.0,
            omega_t: vec![0.0, 1.0, 2.0],
            grid_points: 4096,
            fock_n: 0,
            trunc_n: 256,
            tol: 1e-8,
            seed: 0,
            samples: 100_000,
            k: vec![0.1, 0.25, 0.5],
            commutators_only: false,
            format: Format::Csv,
            out: None,
        }
    }
}

/// Partial configuration as read from a file. `sigma` is accepted in place
/// of `omega`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<Command>,
    mass: Option<f64>,
    hbar: Option<f64>,
    omega: Option<f64>,
    sigma: Option<f64>,
    x0: Option<f64>,
    p0: Option<f64>,
    omega_t: Option<Vec<f64>>,
    grid_points: Option<usize>,
    fock_n: Option<usize>,
    trunc_n: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    samples: Option<usize>,
    k: Option<Vec<f64>>,
    commutators_only: Option<bool>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| format!("invalid config {}: {e}", path.display()))
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, String> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        if let Some(c) = file.command {
            if c != command {
                return Err(format!("config file is for `{c}`, not `{command}`"));
            }
        }
        if file.omega.is_some() && file.sigma.is_some() {
            return Err("config file sets both omega and sigma".into());
        }
        let d = RunConfig::default();
        let mass = flags.mass.or(file.mass).unwrap_or(d.mass);
        let hbar = flags.hbar.or(file.hbar).unwrap_or(d.hbar);
        let omega =
            match (flags.omega, flags.sigma, file.omega, file.sigma) {
                (Some(w), _, _, _) => w,
                (None, Some(s), _, _) => wavespread::params::omega_from_sigma(s, mass, hbar)
                    .map_err(|e| e.to_string())?,
                (None, None, Some(w), _) => w,
                (None, None, None, Some(s)) => wavespread::params::omega_from_sigma(s, mass, hbar)
                    .map_err(|e| e.to_string())?,
                (None, None, None, None) => d.omega,
            };
        let default_format = match command {
            Command::Verify | Command::Tof => Format::Json,
            _ => Format::Csv,
        };
        let default_times = match command {
            Command::Tof => vec![10.0],
            Command::Verify => vec![1.0],
            _ => d.omega_t,
        };
        let default_trunc = if command == Command::Verify {
            128
        } else {
            d.trunc_n
        };
        let default_p0 = if command == Command::Verify {
            1.0
        } else {
            d.p0
        };
        let config = RunConfig {
            command,
            mass,
            hbar,
            omega,
            x0: flags.x0.or(file.x0).unwrap_or(d.x0),
            p0: flags.p0.or(file.p0).unwrap_or(default_p0),
            omega_t: flags
                .omega_t
                .clone()
                .or(file.omega_t)
                .unwrap_or(default_times),
            grid_points: flags
                .grid_points
                .or(file.grid_points)
                .unwrap_or(d.grid_points),
            fock_n: flags.fock_n.or(file.fock_n).unwrap_or(d.fock_n),
            trunc_n: flags.trunc_n.or(file.trunc_n).unwrap_or(default_trunc),
            tol: flags.tol.or(file.tol).unwrap_or(d.tol),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            samples: flags.samples.or(file.samples).unwrap_or(d.samples),
            k: flags.k.clone().or(file.k).unwrap_or(d.k),
            commutators_only: flags.commutators || file.commutators_only.unwrap_or(false),
            format: flags.format.or(file.format).unwrap_or(default_format),
            out: flags.out.clone().or(file.out),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), String> {
        self.params()?;
        self.displacement()?;
        if self.omega_t.is_empty() {
            return Err("--omega-t needs at least one value".into());
        }
        if let Some(bad) = self.omega_t.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(format!("times must be nonnegative and finite, got {bad}"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        if self.k.iter().any(|k| !k.is_finite()) {
            return Err("--k values must be finite".into());
        }
        if matches!(self.command, Command::Verify | Command::Tof) && self.format == Format::Csv {
            return Err(format!("`{}` writes JSON only", self.command));
        }
        if self.command == Command::Tof {
            if self.samples == 0 {
                return Err("--samples must be positive".into());
            }
            if self.omega_t.contains(&0.0) {
                return Err("time of flight needs omega*t > 0".into());
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<PhysParams, String> {
        PhysParams::new(self.mass, self.omega, self.hbar).map_err(|e| e.to_string())
    }

    pub fn displacement(&self) -> Result<Displacement, String> {
        Displacement::new(self.x0, self.p0).map_err(|e| e.to_string())
    }

    /// Physical times `t = (omega t) / omega`.
    pub fn times(&self) -> Vec<f64> {
        self.omega_t.iter().map(|wt| wt / self.omega).collect()
    }
}
