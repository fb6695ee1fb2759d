//! JSON configuration for the CLI subcommands.
//!
//! Every field is optional and falls back to the documented default. Unknown
//! fields are rejected, and [`Validate::validate`] reports every out-of-range
//! field at once.

use std::path::Path;

use qdefense_core::mdp::AlphaSchedule;
use qdefense_core::scenario::{AgentPolicy, AttackCdfModel, AttackScenario, CdfFamily};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config fields: {}", .0.join("; "))]
    Fields(Vec<String>),
}

pub trait Validate {
    fn problems(&self) -> Vec<String>;

    fn validate(&self) -> Result<(), ConfigError> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Fields(problems))
        }
    }
}

/// Parses and validates a config; an absent path yields the defaults.
pub fn load<T: DeserializeOwned + Default + Validate>(path: Option<&Path>) -> Result<T, ConfigError> {
    let config = match path {
        None => T::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                path: path.display().to_string(),
                source,
            })?;
            parse(&text)?
        }
    };
    config.validate()?;
    Ok(config)
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    Ok(serde_json::from_str(text)?)
}

fn unit(problems: &mut Vec<String>, name: &str, value: f64) {
    if !(0.0..=1.0).contains(&value) {
        problems.push(format!("{name} = {value} is outside [0, 1]"));
    }
}

fn positive(problems: &mut Vec<String>, name: &str, value: f64) {
    if !(value > 0.0 && value.is_finite()) {
        problems.push(format!("{name} = {value} must be positive"));
    }
}

fn nonnegative(problems: &mut Vec<String>, name: &str, value: f64) {
    if !(value >= 0.0 && value.is_finite()) {
        problems.push(format!("{name} = {value} must be nonnegative"));
    }
}

fn finite(problems: &mut Vec<String>, name: &str, value: f64) {
    if !value.is_finite() {
        problems.push(format!("{name} = {value} must be finite"));
    }
}

/// Learning-rate decay: `null` keeps the base rate fixed.
fn schedule(half_life: Option<f64>) -> AlphaSchedule {
    match half_life {
        Some(half_life) => AlphaSchedule::VisitDecay { half_life },
        None => AlphaSchedule::Constant,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    #[default]
    AlwaysLoop,
    AlwaysBypass,
    Random,
}

impl From<PolicyName> for AgentPolicy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::AlwaysLoop => AgentPolicy::AlwaysLoop,
            PolicyName::AlwaysBypass => AgentPolicy::AlwaysBypass,
            PolicyName::Random => AgentPolicy::Random,
        }
    }
}

/// Config for `train` and `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    /// Separation (in sections) at or below which a lap is a violation.
    pub tau: usize,
    /// Defaults to 5000 for `train` and 10000 for `simulate`.
    pub epochs: Option<usize>,
    pub seed: u64,
    /// Agent route choice for `simulate`.
    pub agent_policy: PolicyName,
    pub alpha: f64,
    pub alpha_half_life: Option<f64>,
    pub circuit_lr: f64,
    pub inner_steps: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            p: 0.9,
            q: 0.9,
            gamma: 0.9,
            tau: 1,
            epochs: None,
            seed: 0,
            agent_policy: PolicyName::default(),
            alpha: 0.05,
            alpha_half_life: Some(1000.0),
            circuit_lr: 0.01,
            inner_steps: 10,
        }
    }
}

impl ScenarioConfig {
    pub fn schedule(&self) -> AlphaSchedule {
        schedule(self.alpha_half_life)
    }
}

impl Validate for ScenarioConfig {
    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        unit(&mut out, "p", self.p);
        unit(&mut out, "q", self.q);
        unit(&mut out, "gamma", self.gamma);
        unit(&mut out, "alpha", self.alpha);
        if let Some(h) = self.alpha_half_life {
            positive(&mut out, "alpha_half_life", h);
        }
        positive(&mut out, "circuit_lr", self.circuit_lr);
        out
    }
}

/// Config for `qgrid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QgridConfig {
    pub gamma: f64,
    pub grid_step: f64,
    /// Tabular Q-learning episodes per cell; 0 skips the learned columns.
    pub episodes: usize,
    pub seed: u64,
    pub alpha: f64,
    pub alpha_half_life: Option<f64>,
    pub max_steps_per_episode: usize,
}

impl Default for QgridConfig {
    fn default() -> Self {
        Self {
            gamma: 0.9,
            grid_step: 0.1,
            episodes: 0,
            seed: 0,
            alpha: 0.05,
            alpha_half_life: Some(1000.0),
            max_steps_per_episode: 200,
        }
    }
}

impl QgridConfig {
    pub fn schedule(&self) -> AlphaSchedule {
        schedule(self.alpha_half_life)
    }

    /// Number of intervals per axis; `None` unless `1 / grid_step` is an integer.
    pub fn intervals(&self) -> Option<usize> {
        let n = (1.0 / self.grid_step).round();
        (self.grid_step > 0.0 && n >= 1.0 && (n * self.grid_step - 1.0).abs() <= 1e-9).then_some(n as usize)
    }
}

impl Validate for QgridConfig {
    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        unit(&mut out, "gamma", self.gamma);
        unit(&mut out, "alpha", self.alpha);
        if let Some(h) = self.alpha_half_life {
            positive(&mut out, "alpha_half_life", h);
        }
        if self.intervals().is_none() {
            out.push(format!("grid_step = {} must divide 1 evenly", self.grid_step));
        }
        if self.max_steps_per_episode == 0 {
            out.push("max_steps_per_episode must be at least 1".into());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Classical,
    Balanced,
    Quantum,
}

impl From<ScenarioName> for AttackScenario {
    fn from(s: ScenarioName) -> Self {
        match s {
            ScenarioName::Classical => AttackScenario::Classical,
            ScenarioName::Balanced => AttackScenario::Balanced,
            ScenarioName::Quantum => AttackScenario::Quantum,
        }
    }
}

impl From<AttackScenario> for ScenarioName {
    fn from(s: AttackScenario) -> Self {
        match s {
            AttackScenario::Classical => ScenarioName::Classical,
            AttackScenario::Balanced => ScenarioName::Balanced,
            AttackScenario::Quantum => ScenarioName::Quantum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Rayleigh,
    Rician,
}

/// One attack-success curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub scenario: ScenarioName,
    pub family: FamilyName,
    pub sigma: f64,
    /// Rician only.
    #[serde(default)]
    pub nu: f64,
}

impl ModelConfig {
    pub fn model(&self) -> AttackCdfModel {
        let family = match self.family {
            FamilyName::Rayleigh => CdfFamily::Rayleigh { sigma: self.sigma },
            FamilyName::Rician => CdfFamily::Rician {
                nu: self.nu,
                sigma: self.sigma,
            },
        };
        AttackCdfModel {
            family,
            scenario: self.scenario.into(),
        }
    }
}

impl From<AttackCdfModel> for ModelConfig {
    fn from(m: AttackCdfModel) -> Self {
        let (family, sigma, nu) = match m.family {
            CdfFamily::Rayleigh { sigma } => (FamilyName::Rayleigh, sigma, 0.0),
            CdfFamily::Rician { nu, sigma } => (FamilyName::Rician, sigma, nu),
        };
        Self {
            scenario: m.scenario.into(),
            family,
            sigma,
            nu,
        }
    }
}

/// Config for `attack-curve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttackCurveConfig {
    pub investment_max: f64,
    /// Grid size including both endpoints.
    pub points: usize,
    pub models: Vec<ModelConfig>,
}

impl Default for AttackCurveConfig {
    fn default() -> Self {
        Self {
            investment_max: 10.0,
            points: 101,
            models: AttackScenario::ALL
                .into_iter()
                .map(|s| AttackCdfModel::default_for(s).into())
                .collect(),
        }
    }
}

impl AttackCurveConfig {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == n {
                    self.investment_max
                } else {
                    self.investment_max * i as f64 / n as f64
                }
            })
            .collect()
    }
}

impl Validate for AttackCurveConfig {
    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        nonnegative(&mut out, "investment_max", self.investment_max);
        if self.points < 2 {
            out.push(format!("points = {} must be at least 2", self.points));
        }
        if self.models.is_empty() {
            out.push("models must not be empty".into());
        }
        for (i, m) in self.models.iter().enumerate() {
            positive(&mut out, &format!("models[{i}].sigma"), m.sigma);
            nonnegative(&mut out, &format!("models[{i}].nu"), m.nu);
        }
        out
    }
}

/// Config for `velocity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VelocityConfig {
    /// Cruising speed of both trains, in sections per unit time.
    pub v1: f64,
    pub launch_time: f64,
    pub alpha_v: f64,
    pub beta_v: f64,
    /// Separation at launch, in sections.
    pub initial_gap: f64,
    pub tau: f64,
    pub step: f64,
    pub horizon: f64,
}

impl Default for VelocityConfig {
    fn default() -> Self {
        Self {
            v1: 1.0,
            launch_time: 0.0,
            alpha_v: 0.1,
            beta_v: 0.05,
            initial_gap: 4.0,
            tau: 1.0,
            step: 0.01,
            horizon: 100.0,
        }
    }
}

impl Validate for VelocityConfig {
    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        finite(&mut out, "v1", self.v1);
        finite(&mut out, "launch_time", self.launch_time);
        finite(&mut out, "alpha_v", self.alpha_v);
        finite(&mut out, "beta_v", self.beta_v);
        nonnegative(&mut out, "initial_gap", self.initial_gap);
        nonnegative(&mut out, "tau", self.tau);
        positive(&mut out, "step", self.step);
        nonnegative(&mut out, "horizon", self.horizon);
        out
    }
}
