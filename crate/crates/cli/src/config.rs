//! Run configuration: a JSON document overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use qcollide::{CollisionSpec, Interaction, QubitState};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_TAU: f64 = 1.0;
pub const DEFAULT_COLLISIONS: usize = 10;
pub const DEFAULT_RESERVOIR: [f64; 3] = [0.0, 0.0, 0.0];
pub const DEFAULT_INITIAL: [f64; 3] = [0.5, 0.0, 0.0];
/// Continuous samples per collision period when `dt` is not given.
pub const DEFAULT_SAMPLES_PER_PERIOD: f64 = 20.0;

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Collision family: swap, cnot-target or cnot-control.
    #[arg(long)]
    pub interaction: Option<String>,
    /// Mixing angle η in radians, within [0, π/2].
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Collision period τ.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Reservoir Bloch vector as x,y,z (|r| ≤ 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub reservoir: Option<String>,
    /// Initial system Bloch vector as x,y,z (|r| ≤ 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    /// Number of collisions.
    #[arg(long)]
    pub collisions: Option<usize>,
    /// Sampling step of the continuous trajectory (default τ/20).
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    interaction: Option<String>,
    eta: Option<f64>,
    tau: Option<f64>,
    reservoir: Option<[f64; 3]>,
    initial: Option<[f64; 3]>,
    collisions: Option<usize>,
    dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub interaction: Interaction,
    pub eta: f64,
    pub tau: f64,
    pub reservoir: QubitState,
    pub initial: QubitState,
    pub collisions: usize,
    pub dt: f64,
}

impl RunConfig {
    pub fn spec(&self) -> CollisionSpec {
        CollisionSpec::new(self.interaction, self.eta, self.tau, self.reservoir)
            .expect("validated at resolution")
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_triple(name: &str, raw: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(config_error(format!("--{name} expects x,y,z, got {raw:?}")));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| config_error(format!("--{name}: cannot parse {part:?} as a number")))?;
    }
    Ok(out)
}

fn read_file(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| config_error(format!("invalid config {}: {e}", path.display())))
}

fn state(name: &str, v: [f64; 3]) -> Result<QubitState, CliError> {
    QubitState::from_components(v[0], v[1], v[2]).map_err(|e| config_error(format!("{name}: {e}")))
}

/// Merges file values with flags (flags win) and validates the result.
pub fn resolve(args: &ConfigArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => read_file(path)?,
        None => ConfigFile::default(),
    };

    let interaction = args
        .interaction
        .clone()
        .or(file.interaction)
        .ok_or_else(|| config_error("missing interaction (swap, cnot-target or cnot-control)"))?;
    let interaction: Interaction = interaction.parse().map_err(|e| config_error(format!("{e}")))?;

    let eta = args.eta.or(file.eta).ok_or_else(|| config_error("missing eta"))?;
    let tau = args.tau.or(file.tau).unwrap_or(DEFAULT_TAU);

    let reservoir = match &args.reservoir {
        Some(raw) => parse_triple("reservoir", raw)?,
        None => file.reservoir.unwrap_or(DEFAULT_RESERVOIR),
    };
    let initial = match &args.initial {
        Some(raw) => parse_triple("initial", raw)?,
        None => file.initial.unwrap_or(DEFAULT_INITIAL),
    };
    let reservoir = state("reservoir", reservoir)?;
    let initial = state("initial", initial)?;

    let collisions = args.collisions.or(file.collisions).unwrap_or(DEFAULT_COLLISIONS);
    let dt = args.dt.or(file.dt).unwrap_or(tau / DEFAULT_SAMPLES_PER_PERIOD);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(config_error(format!("dt = {dt} must be positive")));
    }

    CollisionSpec::new(interaction, eta, tau, reservoir).map_err(|e| config_error(e.to_string()))?;
    Ok(RunConfig { interaction, eta, tau, reservoir, initial, collisions, dt })
}
