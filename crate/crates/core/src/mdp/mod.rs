//! Finite Markov decision processes `(S, A, P_a, R_a)` with a discount factor.
//!
//! States and actions are dense indices `0..n` and `0..m`. Each `(state, action)`
//! pair owns a list of [`Outcome`]s; an empty list means the action is not
//! available in that state. Terminal states have no outcomes at all.

mod env;
mod qlearning;
mod value_iteration;

use alloc::vec;
use alloc::vec::Vec;

pub use env::{EnvError, Environment, MdpEnvironment, Transition};
pub use qlearning::{
    greedy_policy, q_learning, AlphaSchedule, QLearningConfig, QLearningError, QLearningRun, QTable,
};
pub use value_iteration::{value_iteration, ValueIteration};

/// Accepted deviation of a transition group's probability mass from 1.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MdpError {
    #[error("an MDP needs at least one state and one action")]
    Empty,
    #[error("discount {0} is outside [0, 1]")]
    Discount(f64),
    #[error("state {state} is out of range for {num_states} states")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("action {action} is out of range for {num_actions} actions")]
    ActionOutOfRange { action: usize, num_actions: usize },
    #[error("probability {probability} of ({state}, {action}) -> {next} is outside [0, 1]")]
    Probability {
        state: usize,
        action: usize,
        next: usize,
        probability: f64,
    },
    #[error("reward of ({state}, {action}) -> {next} is not finite")]
    Reward {
        state: usize,
        action: usize,
        next: usize,
    },
    #[error("outcome ({state}, {action}) -> {next} is declared twice")]
    DuplicateOutcome {
        state: usize,
        action: usize,
        next: usize,
    },
    #[error("probabilities of ({state}, {action}) sum to {sum}, expected 1")]
    ProbabilitySum { state: usize, action: usize, sum: f64 },
    #[error("terminal state {0} has outgoing transitions")]
    TerminalWithTransitions(usize),
    #[error("non-terminal state {0} has no available action")]
    DeadEnd(usize),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("value iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("learning rate {0} is outside [0, 1]")]
    LearningRate(f64),
}

/// One possible successor of a `(state, action)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub next: usize,
    pub probability: f64,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mdp {
    num_states: usize,
    num_actions: usize,
    discount: f64,
    // row-major by (state, action)
    outcomes: Vec<Vec<Outcome>>,
    terminal: Vec<bool>,
}

impl Mdp {
    pub fn builder(num_states: usize, num_actions: usize, discount: f64) -> MdpBuilder {
        MdpBuilder {
            num_states,
            num_actions,
            discount,
            entries: Vec::new(),
            terminal: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal[state]
    }

    pub fn terminal_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states).filter(|&s| self.terminal[s])
    }

    /// Outcomes of taking `action` in `state`; empty when the action is unavailable.
    pub fn outcomes(&self, state: usize, action: usize) -> &[Outcome] {
        &self.outcomes[state * self.num_actions + action]
    }

    pub fn is_available(&self, state: usize, action: usize) -> bool {
        !self.outcomes(state, action).is_empty()
    }

    /// `P_a(s, s')`.
    pub fn probability(&self, state: usize, action: usize, next: usize) -> f64 {
        self.outcomes(state, action)
            .iter()
            .find(|o| o.next == next)
            .map_or(0.0, |o| o.probability)
    }

    /// `R_a(s, s')`, or `None` when the transition is not declared.
    pub fn reward(&self, state: usize, action: usize, next: usize) -> Option<f64> {
        self.outcomes(state, action)
            .iter()
            .find(|o| o.next == next)
            .map(|o| o.reward)
    }

    /// Every declared transition as `(state, action, outcome)`, ordered by state then action.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, Outcome)> + '_ {
        self.outcomes.iter().enumerate().flat_map(move |(i, list)| {
            let (s, a) = (i / self.num_actions, i % self.num_actions);
            list.iter().map(move |o| (s, a, *o))
        })
    }

    /// Expected one-step return `Σ P_a(s,s') [R_a(s,s') + γ V(s')]`.
    pub fn backup(&self, state: usize, action: usize, values: &[f64]) -> f64 {
        self.outcomes(state, action)
            .iter()
            .map(|o| o.probability * (o.reward + self.discount * values[o.next]))
            .sum()
    }

    pub fn with_discount(&self, discount: f64) -> Result<Mdp, MdpError> {
        if !(0.0..=1.0).contains(&discount) {
            return Err(MdpError::Discount(discount));
        }
        Ok(Mdp {
            discount,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone)]
pub struct MdpBuilder {
    num_states: usize,
    num_actions: usize,
    discount: f64,
    entries: Vec<(usize, usize, Outcome)>,
    terminal: Vec<usize>,
}

impl MdpBuilder {
    pub fn transition(
        mut self,
        state: usize,
        action: usize,
        next: usize,
        probability: f64,
        reward: f64,
    ) -> Self {
        self.entries.push((
            state,
            action,
            Outcome {
                next,
                probability,
                reward,
            },
        ));
        self
    }

    pub fn terminal(mut self, state: usize) -> Self {
        self.terminal.push(state);
        self
    }

    pub fn build(self) -> Result<Mdp, MdpError> {
        let (n, m) = (self.num_states, self.num_actions);
        if n == 0 || m == 0 {
            return Err(MdpError::Empty);
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return Err(MdpError::Discount(self.discount));
        }
        let check_state = |state: usize| {
            if state < n {
                Ok(())
            } else {
                Err(MdpError::StateOutOfRange { state, num_states: n })
            }
        };

        let mut terminal = vec![false; n];
        for &s in &self.terminal {
            check_state(s)?;
            terminal[s] = true;
        }

        let mut outcomes: Vec<Vec<Outcome>> = vec![Vec::new(); n * m];
        for (s, a, o) in self.entries {
            check_state(s)?;
            check_state(o.next)?;
            if a >= m {
                return Err(MdpError::ActionOutOfRange {
                    action: a,
                    num_actions: m,
                });
            }
            if !(0.0..=1.0).contains(&o.probability) {
                return Err(MdpError::Probability {
                    state: s,
                    action: a,
                    next: o.next,
                    probability: o.probability,
                });
            }
            if !o.reward.is_finite() {
                return Err(MdpError::Reward {
                    state: s,
                    action: a,
                    next: o.next,
                });
            }
            if terminal[s] {
                return Err(MdpError::TerminalWithTransitions(s));
            }
            let list = &mut outcomes[s * m + a];
            if list.iter().any(|e| e.next == o.next) {
                return Err(MdpError::DuplicateOutcome {
                    state: s,
                    action: a,
                    next: o.next,
                });
            }
            list.push(o);
        }

        for s in 0..n {
            let mut any = false;
            for a in 0..m {
                let list = &outcomes[s * m + a];
                if list.is_empty() {
                    continue;
                }
                any = true;
                let sum: f64 = list.iter().map(|o| o.probability).sum();
                if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                    return Err(MdpError::ProbabilitySum {
                        state: s,
                        action: a,
                        sum,
                    });
                }
            }
            if !any && !terminal[s] {
                return Err(MdpError::DeadEnd(s));
            }
        }

        Ok(Mdp {
            num_states: n,
            num_actions: m,
            discount: self.discount,
            outcomes,
            terminal,
        })
    }
}

/// Recommended action per state; defined exactly on the non-terminal states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    actions: Vec<Option<usize>>,
}

impl Policy {
    pub fn new(actions: Vec<Option<usize>>) -> Self {
        Self { actions }
    }

    pub fn action(&self, state: usize) -> Option<usize> {
        self.actions.get(state).copied().flatten()
    }

    pub fn num_states(&self) -> usize {
        self.actions.len()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.actions
    }
}
