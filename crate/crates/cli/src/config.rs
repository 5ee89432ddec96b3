//! Run configuration: defaults, `key=value` files and command-line overrides.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use wigner_lab::{SystemVariant, WignerKind};

/// Output format for exported grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Sampling range of one grid axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    const fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    /// Sample coordinates; a single sample sits at `min`.
    pub fn coords(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + h * i as f64).collect()
    }
}

/// Names of the configurable grid axes.
pub const AXES: [&str; 9] = ["x", "y", "z", "px", "py", "pz", "rho", "pphi", "prho"];

/// Default ranges. Even counts keep Cartesian planes off the z-axis.
fn default_axis(name: &str) -> AxisSpec {
    match name {
        "x" | "y" => AxisSpec::new(-3.0, 3.0, 4),
        "z" => AxisSpec::new(-1.0, 1.0, 3),
        "px" | "py" | "pz" => AxisSpec::new(-2.0, 2.0, 3),
        "rho" => AxisSpec::new(0.05, 4.0, 24),
        "pphi" => AxisSpec::new(-4.0, 4.0, 25),
        "prho" => AxisSpec::new(0.0, 4.0, 41),
        _ => unreachable!("unknown axis {name}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemVariant,
    pub kind: WignerKind,
    pub sigma_r: f64,
    pub eta: f64,
    /// Moyal truncation order.
    pub k: usize,
    /// Gauss–Hermite order of the s-integral.
    pub hermite_order: usize,
    /// Transform tolerance relative to the phase-space bound.
    pub rel_tol: f64,
    /// Evaluate transforms from their defining integral instead of closed forms.
    pub direct: bool,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub axes: Vec<(String, AxisSpec)>,
    /// Keys set by a file or flag rather than left at their default.
    pub explicit: BTreeSet<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemVariant::EmA1,
            kind: WignerKind::GaugeFw,
            sigma_r: 1.0,
            eta: 1.0,
            k: 3,
            hermite_order: 32,
            rel_tol: 1e-10,
            direct: false,
            output: None,
            format: Format::Csv,
            axes: AXES.iter().map(|&n| (n.to_string(), default_axis(n))).collect(),
            explicit: BTreeSet::new(),
        }
    }
}

/// Why a configuration could not be built.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io { path: PathBuf, message: String },
    Syntax { line: usize, text: String },
    UnknownKey { key: String, line: Option<usize> },
    MalformedNumber { key: String, value: String, line: Option<usize> },
    OutOfRange { key: String, message: String, line: Option<usize> },
}

fn at_line(line: &Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io { path, message } => write!(f, "cannot read config {}: {message}", path.display()),
            Self::Syntax { line, text } => write!(f, "line {line}: expected key=value, found '{text}'"),
            Self::UnknownKey { key, line } => {
                write!(f, "{}unknown key '{key}'; valid keys: {}", at_line(line), valid_keys().join(", "))
            }
            Self::MalformedNumber { key, value, line } => {
                write!(f, "{}malformed number '{value}' for key '{key}'", at_line(line))
            }
            Self::OutOfRange { key, message, line } => write!(f, "{}{key}: {message}", at_line(line)),
        }
    }
}

impl std::error::Error for ConfigError {}

const SCALAR_KEYS: [&str; 10] = ["system", "kind", "sigma_r", "eta", "K", "hermite_order", "rel_tol", "route", "output", "format"];

/// Every key accepted in a config file or by `--set`.
pub fn valid_keys() -> Vec<String> {
    let mut keys: Vec<String> = SCALAR_KEYS.iter().map(|k| k.to_string()).collect();
    for axis in AXES {
        for part in ["min", "max", "count"] {
            keys.push(format!("{axis}_{part}"));
        }
    }
    keys
}

fn number<F: FromStr>(key: &str, value: &str, line: Option<usize>) -> Result<F, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::MalformedNumber { key: key.into(), value: value.trim().into(), line })
}

impl RunConfig {
    /// Sets one key; `line` is attached to errors from config files.
    pub fn set(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError::OutOfRange { key: key.into(), message, line };
        let key = key.trim();
        let value = value.trim();
        match key {
            "system" => self.system = value.parse().map_err(|e: wigner_lab::Error| bad(e.to_string()))?,
            "kind" => self.kind = value.parse().map_err(|e: wigner_lab::Error| bad(e.to_string()))?,
            "sigma_r" => {
                let v: f64 = number(key, value, line)?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(bad("must be positive".into()));
                }
                self.sigma_r = v;
            }
            "eta" => {
                let v: f64 = number(key, value, line)?;
                if !v.is_finite() {
                    return Err(bad("must be finite".into()));
                }
                self.eta = v;
            }
            "K" | "k" => {
                let v: usize = number(key, value, line)?;
                if v > wigner_lab::moyal::MAX_K {
                    return Err(bad(format!("must be at most {}", wigner_lab::moyal::MAX_K)));
                }
                self.k = v;
            }
            "hermite_order" => {
                let v: usize = number(key, value, line)?;
                if !(2..=400).contains(&v) {
                    return Err(bad("must lie in 2..=400".into()));
                }
                self.hermite_order = v;
            }
            "rel_tol" => {
                let v: f64 = number(key, value, line)?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(bad("must lie in (0, 1)".into()));
                }
                self.rel_tol = v;
            }
            "route" => {
                self.direct = match value.to_ascii_lowercase().as_str() {
                    "direct" => true,
                    "fast" => false,
                    other => return Err(bad(format!("unknown route '{other}' (expected fast or direct)"))),
                }
            }
            "output" => self.output = if value.is_empty() { None } else { Some(PathBuf::from(value)) },
            "format" => self.format = value.parse().map_err(bad)?,
            _ => {
                let (axis, part) = key.rsplit_once('_').ok_or_else(|| ConfigError::UnknownKey { key: key.into(), line })?;
                let slot = self
                    .axes
                    .iter_mut()
                    .find(|(name, _)| name == axis)
                    .ok_or_else(|| ConfigError::UnknownKey { key: key.into(), line })?;
                match part {
                    "min" | "max" => {
                        let v: f64 = number(key, value, line)?;
                        if !v.is_finite() {
                            return Err(bad("must be finite".into()));
                        }
                        if part == "min" {
                            slot.1.min = v;
                        } else {
                            slot.1.max = v;
                        }
                    }
                    "count" => {
                        let v: usize = number(key, value, line)?;
                        if !(1..=100_000).contains(&v) {
                            return Err(bad("must lie in 1..=100000".into()));
                        }
                        slot.1.count = v;
                    }
                    _ => return Err(ConfigError::UnknownKey { key: key.into(), line }),
                }
            }
        }
        self.explicit.insert(if key == "k" { "K".into() } else { key.to_string() });
        Ok(())
    }

    /// Parses `key=value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: line.into() })?;
            self.set(key, value, Some(i + 1))?;
        }
        Ok(())
    }

    /// Checks relations between keys that single assignments cannot.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, a) in &self.axes {
            if a.count > 1 && a.max <= a.min {
                return Err(ConfigError::OutOfRange {
                    key: format!("{name}_max"),
                    message: format!("must exceed {name}_min when {name}_count > 1"),
                    line: None,
                });
            }
        }
        Ok(())
    }

    pub fn axis(&self, name: &str) -> AxisSpec {
        self.axes.iter().find(|(n, _)| n == name).map(|(_, a)| *a).unwrap_or_else(|| default_axis(name))
    }

    pub fn params(&self) -> wigner_lab::Params {
        wigner_lab::Params::natural(self.sigma_r, self.eta).expect("validated on assignment")
    }

    pub fn transform_spec(&self) -> wigner_lab::TransformSpec<f64> {
        wigner_lab::TransformSpec::default().with_order(self.hermite_order).with_rel_tol(self.rel_tol)
    }
}

/// Reads a config file on top of the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    let mut cfg = RunConfig::default();
    cfg.apply_text(&text)?;
    cfg.validate()?;
    Ok(cfg)
}
