//! Flags, the optional JSON config file, and the validated experiment config.

use std::path::{Path, PathBuf};

use awrlab_core::fv::GridConfig;
use awrlab_core::sweep::Schedule;
use awrlab_core::{PressureParams, State, System};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "AWRLAB_OUT";
const DEFAULT_OUT: &str = "awrlab-out";
const DEFAULT_SCHEDULE_POINTS: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "awrlab", version, about = "Riemann solvers, pressureless limits and finite-volume runs for Aw-Rascle type models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Classify,
    Sweep,
    Simulate,
    Weakcheck,
    Delta,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample the exact Riemann solution on a xi = x/t grid.
    Solve(Flags),
    /// Report the wave configuration of a Riemann problem.
    Classify(Flags),
    /// Drive A = B to zero and check the limit claims.
    Sweep(Flags),
    /// Run the finite-volume scheme and dump snapshots.
    Simulate(Flags),
    /// Weak-form residuals of an exact solution against bump test functions.
    Weakcheck(Flags),
    /// Delta shock of the pressureless limit for the given states.
    Delta(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Solve(f) => (CommandKind::Solve, f),
            Command::Classify(f) => (CommandKind::Classify, f),
            Command::Sweep(f) => (CommandKind::Sweep, f),
            Command::Simulate(f) => (CommandKind::Simulate, f),
            Command::Weakcheck(f) => (CommandKind::Weakcheck, f),
            Command::Delta(f) => (CommandKind::Delta, f),
        }
    }
}

/// Every flag is optional here; defaults are applied after merging with the
/// config file so that the file can supply anything the command line omits.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// JSON config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// original | perturbed | transport
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Left state as `u,rho`.
    #[arg(long, allow_hyphen_values = true)]
    pub left: Option<String>,
    /// Right state as `u,rho`.
    #[arg(long, allow_hyphen_values = true)]
    pub right: Option<String>,
    /// Coupled A = B schedule `start:end[:n]`, log-uniform.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Number of cells.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Spatial domain `x_min:x_max`.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Number of equally spaced snapshots up to T.
    #[arg(long)]
    pub snapshots: Option<usize>,
    /// Output directory (default: $AWRLAB_OUT, then ./awrlab-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the randomized test functions.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of xi samples for `solve`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of bump test functions for `weakcheck`.
    #[arg(long)]
    pub bumps: Option<usize>,
    /// Plot density on a log scale.
    #[arg(long)]
    pub log_density: bool,
}

/// A state written either as `"u,rho"` or `[u, rho]`.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum StateSpec {
    Text(String),
    Pair([f64; 2]),
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system: Option<String>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub left: Option<StateSpec>,
    pub right: Option<StateSpec>,
    pub schedule: Option<String>,
    pub grid: Option<usize>,
    pub cfl: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub domain: Option<String>,
    pub snapshots: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub bumps: Option<usize>,
    pub log_density: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(path.to_path_buf(), e))
    }
}

/// Validated configuration handed to a command.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub system: System,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub left: State,
    pub right: State,
    pub schedule: Option<Schedule>,
    pub grid: GridConfig,
    pub snapshots: usize,
    pub out: PathBuf,
    pub seed: u64,
    pub samples: usize,
    pub bumps: usize,
    pub log_density: bool,
}

impl ExperimentConfig {
    pub fn params(&self) -> Result<PressureParams, CliError> {
        Ok(PressureParams::relaxed(self.system, self.a, self.b, self.alpha)?)
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {msg}"))
}

fn parse_pair(field: &str, text: &str, sep: char) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(sep).map(str::trim).collect();
    let [x, y] = parts.as_slice() else {
        return Err(invalid(field, format!("expected two values separated by '{sep}', got {text:?}")));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|_| invalid(field, format!("{s:?} is not a number")));
    Ok((num(x)?, num(y)?))
}

pub fn parse_state(field: &str, spec: &StateSpec) -> Result<State, CliError> {
    let (u, rho) = match spec {
        StateSpec::Text(t) => parse_pair(field, t, ',')?,
        StateSpec::Pair([u, rho]) => (*u, *rho),
    };
    State::new(u, rho).map_err(|e| invalid(field, e))
}

/// `start:end[:n]`, log-uniform and coupled (A = B).
pub fn parse_schedule(text: &str) -> Result<Schedule, CliError> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| invalid("schedule", format!("{s:?} is not a number")));
    let (start, end, n) = match parts.as_slice() {
        [s, e] => (num(s)?, num(e)?, DEFAULT_SCHEDULE_POINTS),
        [s, e, n] => (
            num(s)?,
            num(e)?,
            n.parse::<usize>()
                .map_err(|_| invalid("schedule", format!("{n:?} is not a point count")))?,
        ),
        _ => return Err(invalid("schedule", format!("expected start:end[:n], got {text:?}"))),
    };
    Schedule::log_uniform(start, end, n).map_err(|e| invalid("schedule", e))
}

fn default_schedule(system: System) -> Schedule {
    let text = match system {
        System::Perturbed => "1e-1:1e-5:5",
        _ => "1e-1:1e-6",
    };
    parse_schedule(text).expect("built-in schedule")
}

fn pressured_system(system: System) -> bool {
    system != System::Transport
}

fn default_system(command: CommandKind) -> System {
    match command {
        CommandKind::Delta => System::Transport,
        CommandKind::Weakcheck => System::Perturbed,
        _ => System::Original,
    }
}

/// Merge flags over the file and validate. Flags win field by field.
pub fn resolve(command: CommandKind, flags: Flags) -> Result<ExperimentConfig, CliError> {
    let file = match &flags.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };

    let system = match flags.system.or(file.system) {
        Some(s) => s.parse::<System>().map_err(|e| invalid("system", e))?,
        None => default_system(command),
    };
    let left = flags.left.map(StateSpec::Text).or(file.left);
    let right = flags.right.map(StateSpec::Text).or(file.right);
    let left = parse_state("left", &left.ok_or_else(|| invalid("left", "required"))?)?;
    let right = parse_state("right", &right.ok_or_else(|| invalid("right", "required"))?)?;

    // sweeps take A = B from the schedule; `delta` only uses them for the
    // finite-pressure comparison
    let coefficients_optional = !pressured_system(system) || matches!(command, CommandKind::Sweep | CommandKind::Delta);
    let (a, b) = match (flags.a.or(file.a), flags.b.or(file.b)) {
        (Some(a), Some(b)) => (a, b),
        (Some(x), None) | (None, Some(x)) => (x, x),
        (None, None) if coefficients_optional => (0.0, 0.0),
        (None, None) => (0.1, 0.1),
    };
    let alpha = flags.alpha.or(file.alpha).unwrap_or(0.5);
    if pressured_system(system) {
        PressureParams::relaxed(system, a.max(0.0), b.max(0.0), alpha).map_err(|e| invalid("alpha", e))?;
    } else if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
        return Err(invalid("A/B", format!("must be finite and non-negative, got A = {a}, B = {b}")));
    }
    if a == 0.0 && b == 0.0 && !coefficients_optional {
        return Err(invalid("A/B", format!("the {system} system needs A or B positive")));
    }

    let schedule = match flags.schedule.or(file.schedule) {
        Some(s) => Some(parse_schedule(&s)?),
        None if command == CommandKind::Sweep => Some(default_schedule(system)),
        None => None,
    };

    let mut grid = GridConfig::default();
    if let Some(n) = flags.grid.or(file.grid) {
        grid.cells = n;
    }
    if let Some(c) = flags.cfl.or(file.cfl) {
        grid.cfl = c;
    }
    if let Some(t) = flags.t.or(file.t) {
        grid.t_end = t;
    }
    if let Some(d) = flags.domain.or(file.domain) {
        (grid.x_min, grid.x_max) = parse_pair("domain", &d, ':')?;
    }
    if command == CommandKind::Simulate {
        grid.validate().map_err(|e| invalid("grid", e))?;
    }
    let snapshots = flags.snapshots.or(file.snapshots).unwrap_or(4);
    if snapshots == 0 {
        return Err(invalid("snapshots", "must be at least 1"));
    }

    let samples = flags.samples.or(file.samples).unwrap_or(401);
    if samples < 2 {
        return Err(invalid("samples", "must be at least 2"));
    }
    let bumps = flags.bumps.or(file.bumps).unwrap_or(5);
    if bumps == 0 {
        return Err(invalid("bumps", "must be at least 1"));
    }

    let out = flags
        .out
        .or(file.out)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

    Ok(ExperimentConfig {
        command,
        system,
        a,
        b,
        alpha,
        left,
        right,
        schedule,
        grid,
        snapshots,
        out,
        seed: flags.seed.or(file.seed).unwrap_or(0),
        samples,
        bumps,
        log_density: flags.log_density || file.log_density.unwrap_or(false),
    })
}
