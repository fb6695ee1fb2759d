//! The two-train cyber-physical world, its parameterised adversary, the
//! velocity-hijack attack and attack-success CDF models.

mod attack;
mod cdf;
mod track;
mod world;

pub use attack::{
    time_to_violation, velocity_attack_speed, velocity_trajectory, TrajectoryPoint, VelocityAttack,
    ViolationSearch,
};
pub use cdf::{
    attack_success_curve, marcum_q1, rayleigh_cdf, rician_cdf, AttackCdfModel, AttackScenario, CdfFamily,
    CurvePoint, SERIES_RELATIVE_TOLERANCE,
};
pub use track::{separation_distance, Route, TrackLayout, DECISION_POINT, NUM_SECTIONS};
pub use world::{
    build_train_mdp, lap_outcome, simulate_laps, AgentPolicy, LapOutcome, LapRecord, TrainEnvironment,
    TrainWorld, ADVERSARY_START, AGENT_START, DEFAULT_TAU,
};

use crate::mdp::MdpError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("{name} = {value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("section {0} does not exist")]
    Section(usize),
    #[error("invalid {name}: {value}")]
    Argument { name: &'static str, value: f64 },
    #[error("velocity overflows at t = {time}")]
    Overflow { time: f64 },
    #[error("Marcum Q series failed to converge after {terms} terms (last term {last_term:e})")]
    SeriesDiverged { terms: usize, last_term: f64 },
    #[error("investment grid must be sorted and nonnegative (offending index {0})")]
    Grid(usize),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}
