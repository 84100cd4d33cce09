//! Experiment configuration: a small strict envelope plus a per-experiment
//! settings payload parsed with field-path error reporting.

use std::path::PathBuf;

use modmet_core::gauge::Bracket;
use modmet_core::modular::LambdaGrid;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Axioms,
    Gauges,
    TopologyCompare,
    Delta2,
    Cauchy,
    Nets,
    Kr,
    Fuzzy,
    Adequacy,
}

impl ExperimentKind {
    pub fn parse(name: &str) -> Option<ExperimentKind> {
        serde_json::from_value(serde_json::Value::String(name.to_string())).ok()
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Axioms => "axioms",
            ExperimentKind::Gauges => "gauges",
            ExperimentKind::TopologyCompare => "topology_compare",
            ExperimentKind::Delta2 => "delta2",
            ExperimentKind::Cauchy => "cauchy",
            ExperimentKind::Nets => "nets",
            ExperimentKind::Kr => "kr",
            ExperimentKind::Fuzzy => "fuzzy",
            ExperimentKind::Adequacy => "adequacy",
        }
    }
}

/// Top-level config file shape. The settings payload is experiment-specific
/// and parsed by the experiment runner.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_settings")]
    pub settings: serde_json::Value,
}

fn default_settings() -> serde_json::Value {
    serde_json::Value::Object(serde_json::Map::new())
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> Result<ExperimentConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            CliError::Config(format!(
                "{}: field `{}`: {}",
                path.display(),
                e.path(),
                e.inner()
            ))
        })
    }

    /// Parses the settings payload into the experiment's typed struct,
    /// reporting schema violations with field paths.
    pub fn settings<T: serde::de::DeserializeOwned>(&self) -> Result<T, CliError> {
        let value = self.settings.clone();
        serde_path_to_error::deserialize(value)
            .map_err(|e| CliError::Config(format!("settings.{}: {}", e.path(), e.inner())))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSource {
    /// JSON document {"labels": [...], "distance": [[...]]}.
    Path { path: PathBuf },
    /// Seeded random Euclidean point cloud.
    Random {
        n: usize,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// Seeded jittered hexagon on the unit circle (distances ≈ [0.68, 2]).
    Hexagon,
    /// Points on a line at the given coordinates.
    Line { coords: Vec<f64> },
}

fn default_scale() -> f64 {
    4.0
}

impl Default for SpaceSource {
    fn default() -> Self {
        SpaceSource::Random { n: 6, scale: default_scale() }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModularConfig {
    /// w = d / λ^p.
    Scaled {
        #[serde(default = "default_p")]
        p: f64,
    },
    /// w = d / (λ^q + d).
    Saturating {
        #[serde(default = "default_q")]
        q: f64,
    },
    /// w = sup_t e^{-λt} |x(t) - y(t)| over sampled trajectories.
    Exponential { times: Vec<f64>, trajectories: Vec<Vec<f64>> },
    /// w = 0 if d ≤ λ, +inf otherwise.
    Step,
    /// w(λ,u,v) = ρ((u-v)/λ) over a registered function family.
    Orlicz {
        integrand: IntegrandConfig,
        omega: OmegaConfig,
        family: FamilyConfig,
    },
}

fn default_p() -> f64 {
    1.0
}

fn default_q() -> f64 {
    1.0
}

impl Default for ModularConfig {
    fn default() -> Self {
        ModularConfig::Scaled { p: default_p() }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegrandConfig {
    Lp {
        #[serde(default = "default_lp")]
        p: f64,
    },
    ExpSquared,
    VariableExponent { exponents: Vec<f64> },
}

fn default_lp() -> f64 {
    2.0
}

impl Default for IntegrandConfig {
    fn default() -> Self {
        IntegrandConfig::Lp { p: default_lp() }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct OmegaConfig {
    pub cells: Option<usize>,
    pub mesh: Option<f64>,
    pub masses: Option<Vec<f64>>,
    /// Path to a JSON sidecar {"masses": [...], "grid": ...}.
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyConfig {
    /// CSV: rows = functions, columns = cells.
    Path { path: PathBuf },
    /// {c·x : c ∈ m evenly spaced values in [0,1]} on the grid cells.
    Lipschitz { m: usize },
    /// Walsh sign patterns: pairwise L¹ distance exactly 1 under uniform mass.
    Rademacher { m: usize },
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct GridConfig {
    pub floor: f64,
    pub cap: f64,
    pub count: Option<usize>,
    pub per_decade: Option<usize>,
}

impl GridConfig {
    pub fn build(&self) -> Result<LambdaGrid, CliError> {
        let grid = match (self.count, self.per_decade) {
            (Some(c), _) => LambdaGrid::geometric(self.floor, self.cap, c),
            (None, Some(d)) => LambdaGrid::per_decade(self.floor, self.cap, d),
            (None, None) => LambdaGrid::geometric(self.floor, self.cap, 25),
        };
        grid.map_err(CliError::Core)
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct BracketConfig {
    pub floor: Option<f64>,
    pub cap: Option<f64>,
    pub tol: Option<f64>,
}

impl BracketConfig {
    pub fn build(&self) -> Result<Bracket, CliError> {
        let d = Bracket::default();
        Bracket::new(
            self.floor.unwrap_or(d.floor),
            self.cap.unwrap_or(d.cap),
            self.tol.unwrap_or(d.tol),
        )
        .map_err(CliError::Core)
    }
}

/// Explicit sequence with a claimed limit, for the delta2 experiment.
#[derive(Clone, Debug, Deserialize)]
pub struct SequenceConfig {
    pub points: Vec<usize>,
    pub limit: usize,
}
