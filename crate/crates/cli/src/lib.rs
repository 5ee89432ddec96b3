//! Command-line driver for `wigner-lab`.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage
//! errors (bad flags, bad config, inputs the library rejects).

pub mod commands;
pub mod config;
pub mod export;
pub mod verify;

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

pub use config::{load_config, ConfigError, Format, RunConfig};
pub use export::export_grid;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Options shared by every command. Values are kept as text and applied
/// through [`RunConfig::set`] so flags and config files validate alike.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// key=value config file, applied before the flags below
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// e, em-a1, em-a2 or em-a3
    #[arg(long)]
    pub system: Option<String>,
    /// w (standard Wigner) or fw (gauge-invariant)
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long = "sigma-r", value_name = "SIGMA")]
    pub sigma_r: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    /// Moyal truncation order K (0..=3)
    #[arg(short = 'K', long = "k", value_name = "K")]
    pub k: Option<String>,
    #[arg(long = "hermite-order", value_name = "N")]
    pub hermite_order: Option<String>,
    #[arg(long = "rel-tol", value_name = "TOL")]
    pub rel_tol: Option<String>,
    /// fast (closed and reduced forms) or direct (defining integral)
    #[arg(long)]
    pub route: Option<String>,
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Any config key, e.g. --set rho_count=40 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Common {
    /// Defaults, then the config file, then `--set`, then named flags.
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        for item in &self.set {
            let (k, v) = item.split_once('=').ok_or_else(|| ConfigError::OutOfRange {
                key: item.clone(),
                message: "expected KEY=VALUE".into(),
                line: None,
            })?;
            cfg.set(k, v, None)?;
        }
        let flags = [
            ("system", &self.system),
            ("kind", &self.kind),
            ("sigma_r", &self.sigma_r),
            ("eta", &self.eta),
            ("K", &self.k),
            ("hermite_order", &self.hermite_order),
            ("rel_tol", &self.rel_tol),
            ("route", &self.route),
            ("output", &self.output),
            ("format", &self.format),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v, None)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Parser, Debug)]
#[command(name = "wigner-lab", version, about = "Phase-space transforms, observables and Moyal dynamics of exact electromagnetic states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run named invariant checks and print PASS/FAIL per check ID
    Verify {
        /// all, numerics, phase-model, transforms, observables or moyal
        #[arg(long, default_value = "all")]
        suite: String,
        /// Print the check IDs of the suite without running them
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Mean energy of the selected transform
    Energy {
        /// combined or split
        #[arg(long, default_value = "combined")]
        mode: String,
        #[command(flatten)]
        common: Common,
    },
    /// Position marginal at --at, or momentum marginal at --at with --variable momentum
    Marginal {
        /// position or momentum
        #[arg(long, default_value = "position")]
        variable: String,
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Momentum distribution on the (prho, pz) grid
    MomentumDist {
        /// fw-a1, fw-a2, gaussian or numeric (default follows the system)
        #[arg(long)]
        dist: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Mean momentum of the transform at a position
    MeanMomentum {
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample a transform over a plane or box and report its negative part
    ScanNegativity {
        /// rho-pphi or box
        #[arg(long, default_value = "rho-pphi")]
        plane: String,
        /// Fixed z, P_rho and P_z of the rho-pphi plane
        #[arg(long, value_name = "Z,PRHO,PZ", allow_hyphen_values = true)]
        fixed: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated Moyal evolution residual at a phase point
    MoyalResidual {
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        at: Option<String>,
        /// Kinetic momentum
        #[arg(long, value_name = "PX,PY,PZ", allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Momentum-averaged Vlasov-Moyal force at a position
    ForceAverage {
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Characteristic curve of the Psi-model
    Characteristics {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Integer k of the model
        #[arg(long = "kk", default_value_t = 1, allow_hyphen_values = true)]
        kk: i32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i32,
        #[arg(long, default_value_t = 1.2)]
        theta0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi0: f64,
        #[arg(long = "t-max", default_value_t = 1.0)]
        t_max: f64,
        #[arg(long = "t-count", default_value_t = 51)]
        t_count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sample a potential or density on a coordinate plane
    Grid {
        /// U, U1, U2, Q, density, qA_x, qA_y, qA_z or B_z
        #[arg(long)]
        field: String,
        /// z0, y0 or x0
        #[arg(long, default_value = "z0")]
        plane: String,
        #[command(flatten)]
        common: Common,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<wigner_lab::Error> for Failure {
    fn from(e: wigner_lab::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::usage(format!("{e:#}"))
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let threads = std::env::var(wigner_lab::numerics::parallel::THREADS_ENV).ok();
    if let Some(raw) = &threads {
        if wigner_lab::numerics::parallel::parse_thread_cap(Some(raw)).is_none() {
            let _ = writeln!(err, "error: {} must be a positive integer, got '{raw}'", wigner_lab::numerics::parallel::THREADS_ENV);
            return EXIT_USAGE;
        }
    }
    match commands::dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if f.code == EXIT_USAGE {
                let _ = writeln!(err, "run 'wigner-lab --help' for usage");
            }
            f.code
        }
    }
}
