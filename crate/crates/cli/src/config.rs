use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Zeros, scattering data and kernel of a profile or potential.
    Forward,
    /// Zeros of a profile or potential.
    Resonances,
    /// Potential from a zero set.
    Invert,
    /// Shear modulus from potentials at two frequencies.
    RecoverMu,
    /// Seeded property checks on a profile or potential.
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Resonances => "resonances",
            Command::Invert => "invert",
            Command::RecoverMu => "recover-mu",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "love-res", version, about = "Resonances and inversion for Love-wave potentials")]
pub struct Args {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "LOVE_RES_WORKERS")]
    pub workers: Option<usize>,
    /// Truncation radius for search and inversion.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Zero-finder tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    /// Shear profile JSON.
    pub profile: Option<PathBuf>,
    /// Potential JSON.
    pub potential: Option<PathBuf>,
    /// Second potential JSON for `recover-mu`.
    pub potential2: Option<PathBuf>,
    /// Zero-set CSV for `invert`.
    pub zeros: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Quadrature {
    /// Intervals of the potential grid when calibrating a profile.
    pub intervals: usize,
    /// Marchenko grid steps per unit of x_I.
    pub steps_per_unit: usize,
    /// Kernel quadrature step times x_I.
    pub dk: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { intervals: 256, steps_per_unit: 256, dk: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub inputs: Inputs,
    pub out: Option<PathBuf>,
    /// Search rectangle; defaults to `[−R, R]²`.
    pub region: Option<Region>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Frequency of `profile` or of `potential`, and the first frequency of `recover-mu`.
    pub omega: Option<f64>,
    pub omega2: Option<f64>,
    pub mu_tail: Option<f64>,
    /// Support radius for `invert`.
    pub x_i: Option<f64>,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub seed: u64,
    pub workers: Option<usize>,
    /// Sector half-angle of the counting check.
    #[serde(default = "default_delta")]
    pub sector_delta: f64,
    /// Random probes of the `check` command.
    #[serde(default = "default_probes")]
    pub probes: usize,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_radius() -> f64 {
    50.0
}

fn default_delta() -> f64 {
    0.2
}

fn default_probes() -> usize {
    100
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

impl RunConfig {
    /// Reads `--config` if given, applies flag overrides and validates.
    /// Relative input paths resolve against the config file's directory.
    pub fn from_args(args: &Args) -> Result<(Self, PathBuf), CliError> {
        let (mut cfg, base) = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                let cfg: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
                (cfg, path.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (RunConfig::default(), PathBuf::new()),
        };
        if let Some(c) = args.command {
            cfg.command = Some(c);
        }
        if let Some(o) = &args.out {
            cfg.out = Some(o.clone());
        }
        if let Some(w) = args.workers {
            cfg.workers = Some(w);
        }
        if let Some(r) = args.radius {
            cfg.radius = r;
        }
        if let Some(t) = args.tol {
            cfg.tol = t;
        }
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok((cfg, base))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.command.is_none() {
            return bad("no command given (set \"command\" or pass --command)".into());
        }
        if self.out.is_none() {
            return bad("no output directory given (set \"out\" or pass --out)".into());
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.radius > 0.0) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if !(self.sector_delta > 0.0) {
            return bad(format!("sector_delta must be positive, got {}", self.sector_delta));
        }
        if let Some(r) = &self.region {
            if !(r.re_min < r.re_max && r.im_min < r.im_max) {
                return bad(format!("region is not well formed: {r:?}"));
            }
        }
        let q = &self.quadrature;
        if q.intervals < 2 || q.steps_per_unit < 2 || !(q.dk > 0.0) {
            return bad(format!("quadrature sizes must be positive: {q:?}"));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        for (name, v) in [("omega", self.omega), ("omega2", self.omega2), ("mu_tail", self.mu_tail), ("x_i", self.x_i)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        Ok(())
    }

    pub fn command(&self) -> Command {
        self.command.expect("validated")
    }

    pub fn region(&self) -> Region {
        self.region.unwrap_or(Region {
            re_min: -self.radius,
            re_max: self.radius,
            im_min: -self.radius,
            im_max: self.radius,
        })
    }
}
