use alloc::string::String;
use rand::{Rng, RngCore};

use super::Mdp;

/// Result of one environment step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub next: usize,
    pub reward: f64,
    pub terminal: bool,
    /// Optional world observable reported alongside the transition
    /// (the train world reports its separation distance here).
    pub observation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnvError {
    #[error("state {state} is out of range")]
    State { state: usize },
    #[error("action {action} is not available in state {state}")]
    Action { state: usize, action: usize },
    #[error("state {0} is terminal")]
    Terminal(usize),
    #[error("{0}")]
    Other(String),
}

/// An episodic world an agent can act in.
pub trait Environment {
    fn num_states(&self) -> usize;
    fn num_actions(&self) -> usize;
    /// Start of a new episode.
    fn reset(&mut self) -> usize;
    fn step(&mut self, state: usize, action: usize, rng: &mut dyn RngCore) -> Result<Transition, EnvError>;
}

/// Samples successors directly from an [`Mdp`]'s transition table.
#[derive(Debug, Clone)]
pub struct MdpEnvironment {
    mdp: Mdp,
    initial_state: usize,
}

impl MdpEnvironment {
    pub fn new(mdp: Mdp) -> Self {
        Self {
            mdp,
            initial_state: 0,
        }
    }

    pub fn with_initial_state(mut self, state: usize) -> Self {
        self.initial_state = state;
        self
    }

    pub fn mdp(&self) -> &Mdp {
        &self.mdp
    }
}

impl Environment for MdpEnvironment {
    fn num_states(&self) -> usize {
        self.mdp.num_states()
    }

    fn num_actions(&self) -> usize {
        self.mdp.num_actions()
    }

    fn reset(&mut self) -> usize {
        self.initial_state
    }

    fn step(&mut self, state: usize, action: usize, rng: &mut dyn RngCore) -> Result<Transition, EnvError> {
        if state >= self.mdp.num_states() {
            return Err(EnvError::State { state });
        }
        if self.mdp.is_terminal(state) {
            return Err(EnvError::Terminal(state));
        }
        if action >= self.mdp.num_actions() || !self.mdp.is_available(state, action) {
            return Err(EnvError::Action { state, action });
        }
        let outcomes = self.mdp.outcomes(state, action);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        // the last outcome absorbs rounding in the cumulative sum
        let chosen = outcomes
            .iter()
            .find(|o| {
                acc += o.probability;
                u < acc
            })
            .unwrap_or(&outcomes[outcomes.len() - 1]);
        Ok(Transition {
            next: chosen.next,
            reward: chosen.reward,
            terminal: self.mdp.is_terminal(chosen.next),
            observation: None,
        })
    }
}
