//! Versioned JSON configuration.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thermalink::operators::ModelParams;

pub const SCHEMA_VERSION: u32 = 1;

/// Solver route for steady states, sweeps and time traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Exact,
    Stochastic,
    Bourret,
    Cfrac,
    Quasistatic,
    Markov,
    PhaseDiffusion,
    Bidirectional,
}

impl Route {
    pub const ALL: [Route; 8] = [
        Route::Exact,
        Route::Stochastic,
        Route::Bourret,
        Route::Cfrac,
        Route::Quasistatic,
        Route::Markov,
        Route::PhaseDiffusion,
        Route::Bidirectional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Exact => "exact",
            Route::Stochastic => "stochastic",
            Route::Bourret => "bourret",
            Route::Cfrac => "cfrac",
            Route::Quasistatic => "quasistatic",
            Route::Markov => "markov",
            Route::PhaseDiffusion => "phase-diffusion",
            Route::Bidirectional => "bidirectional",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Route::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| format!("unknown route `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StochasticOptions {
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    /// Integration step; stability-limited default when absent.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub burn_in: Option<f64>,
    #[serde(default)]
    pub window: Option<f64>,
}

fn default_trajectories() -> usize {
    thermalink::stochastic::DEFAULT_TRAJECTORIES
}

impl Default for StochasticOptions {
    fn default() -> Self {
        StochasticOptions { trajectories: default_trajectories(), dt: None, burn_in: None, window: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfracOptions {
    /// Fixed truncation; escalates from √n_th when absent.
    #[serde(default)]
    pub n_max: Option<usize>,
    /// Mode levels for time traces.
    #[serde(default)]
    pub levels: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiffusionOptions {
    /// Fixed field radius; √(n_th/2) when absent.
    #[serde(default)]
    pub r0: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidirectionalOptions {
    /// Solve the full qubit-cavity master equation instead of the phase-space model.
    #[serde(default)]
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// Names accepted as sweep axes.
pub const AXIS_NAMES: [&str; 11] =
    ["gamma1", "gamma2", "kappa", "n_th", "delta1", "delta2", "gamma_phi", "p_loss", "fock_cutoff", "k0z1", "k0z2"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub points: Option<usize>,
    /// Explicit values, used instead of start/stop/points.
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

impl Axis {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let bad = |msg: String| CliError::Config(format!("axis `{}`: {msg}", self.name));
        if !AXIS_NAMES.contains(&self.name.as_str()) {
            return Err(bad(format!("not a model parameter (expected one of {})", AXIS_NAMES.join(", "))));
        }
        if let Some(v) = &self.values {
            if self.start.is_some() || self.stop.is_some() || self.points.is_some() {
                return Err(bad("give either `values` or `start`/`stop`/`points`".into()));
            }
            if v.is_empty() {
                return Err(bad("`values` is empty".into()));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(bad("non-finite value".into()));
            }
            return Ok(v.clone());
        }
        let (start, stop, points) = match (self.start, self.stop, self.points) {
            (Some(a), Some(b), Some(n)) => (a, b, n),
            _ => return Err(bad("needs `start`, `stop` and `points`".into())),
        };
        if points < 1 {
            return Err(bad("`points` must be at least 1".into()));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad("non-finite bound".into()));
        }
        if points == 1 {
            return Ok(vec![start]);
        }
        let frac = |k: usize| k as f64 / (points - 1) as f64;
        match self.scale {
            Scale::Linear => Ok((0..points).map(|k| start + (stop - start) * frac(k)).collect()),
            Scale::Log => {
                if !(start > 0.0 && stop > 0.0) {
                    return Err(bad("log axis needs positive bounds".into()));
                }
                let (a, b) = (start.log10(), stop.log10());
                Ok((0..points).map(|k| 10f64.powf(a + (b - a) * frac(k))).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<Axis>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    #[default]
    Ground,
    Singlet,
    Triplet,
    Excited,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    pub points: usize,
    #[serde(default)]
    pub initial: InitialState,
}

impl TimeSection {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.t_end > self.t_start) || !self.t_end.is_finite() || !self.t_start.is_finite() {
            return Err(CliError::Config("time: need finite t_start < t_end".into()));
        }
        if self.points < 2 {
            return Err(CliError::Config("time: `points` must be at least 2".into()));
        }
        let h = (self.t_end - self.t_start) / (self.points - 1) as f64;
        Ok((0..self.points).map(|k| self.t_start + h * k as f64).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub route: Option<Route>,
    #[serde(default)]
    pub params: Option<ModelParams>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub stochastic: StochasticOptions,
    #[serde(default)]
    pub cfrac: CfracOptions,
    #[serde(default)]
    pub phase_diffusion: PhaseDiffusionOptions,
    #[serde(default)]
    pub bidirectional: BidirectionalOptions,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub time: Option<TimeSection>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            schema_version: SCHEMA_VERSION,
            route: None,
            params: None,
            seed: None,
            workers: None,
            output: None,
            format: None,
            stochastic: StochasticOptions::default(),
            cfrac: CfracOptions::default(),
            phase_diffusion: PhaseDiffusionOptions::default(),
            bidirectional: BidirectionalOptions::default(),
            sweep: None,
            time: None,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if let Some(p) = &self.params {
            p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(s) = &self.sweep {
            if s.axes.is_empty() {
                return Err(CliError::Config("sweep: no axes".into()));
            }
            for a in &s.axes {
                a.grid()?;
            }
        }
        if let Some(t) = &self.time {
            t.grid()?;
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<&ModelParams, CliError> {
        self.params.as_ref().ok_or_else(|| CliError::Config("missing `params`".into()))
    }

    pub fn route(&self) -> Result<Route, CliError> {
        self.route.ok_or_else(|| CliError::Config("missing `route` (set it in the config or pass --route)".into()))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Sets the model parameter named by a sweep axis.
pub fn set_axis(p: &mut ModelParams, name: &str, value: f64) -> Result<(), CliError> {
    match name {
        "gamma1" => p.gamma1 = value,
        "gamma2" => p.gamma2 = value,
        "kappa" => p.kappa = value,
        "n_th" => p.n_th = value,
        "delta1" => p.delta1 = value,
        "delta2" => p.delta2 = value,
        "gamma_phi" => p.gamma_phi = value,
        "p_loss" => p.p_loss = value,
        "fock_cutoff" => {
            if !(value >= 1.0) || value.fract() != 0.0 {
                return Err(CliError::Config(format!("fock_cutoff must be a positive integer, got {value}")));
            }
            p.fock_cutoff = Some(value as usize);
        }
        "k0z1" | "k0z2" => {
            let mut z = p.positions.unwrap_or([0.0, 0.0]);
            z[if name == "k0z1" { 0 } else { 1 }] = value;
            p.positions = Some(z);
        }
        _ => return Err(CliError::Config(format!("unknown axis `{name}`"))),
    }
    Ok(())
}
