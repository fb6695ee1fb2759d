use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

use super::{EnvError, Environment, MdpError, Policy};
use crate::seeded_rng;
use crate::util::argmax;

/// Tabular action-value estimates `Q(s, a)`, initialised to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    num_states: usize,
    num_actions: usize,
    values: Vec<f64>,
    learning_rate: f64,
}

impl QTable {
    pub fn new(num_states: usize, num_actions: usize, learning_rate: f64) -> Result<Self, MdpError> {
        if num_states == 0 || num_actions == 0 {
            return Err(MdpError::Empty);
        }
        if !(0.0..=1.0).contains(&learning_rate) {
            return Err(MdpError::LearningRate(learning_rate));
        }
        Ok(Self {
            num_states,
            num_actions,
            values: vec![0.0; num_states * num_actions],
            learning_rate,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.num_actions + action]
    }

    pub fn set(&mut self, state: usize, action: usize, value: f64) {
        self.values[state * self.num_actions + action] = value;
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.num_actions..(state + 1) * self.num_actions]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `V(s) = max_a Q(s, a)`.
    pub fn state_value(&self, state: usize) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Q(s,a) ← (1 − α) Q(s,a) + α [r + γ V(s')]` with the table's own α.
    /// `V(s')` is 0 when `next_terminal`. Every other cell is left untouched.
    pub fn update(
        &mut self,
        state: usize,
        action: usize,
        next: usize,
        reward: f64,
        gamma: f64,
        next_terminal: bool,
    ) -> Result<(), MdpError> {
        self.update_with_rate(
            state,
            action,
            next,
            reward,
            gamma,
            next_terminal,
            self.learning_rate,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn update_with_rate(
        &mut self,
        state: usize,
        action: usize,
        next: usize,
        reward: f64,
        gamma: f64,
        next_terminal: bool,
        alpha: f64,
    ) -> Result<(), MdpError> {
        for s in [state, next] {
            if s >= self.num_states {
                return Err(MdpError::StateOutOfRange {
                    state: s,
                    num_states: self.num_states,
                });
            }
        }
        if action >= self.num_actions {
            return Err(MdpError::ActionOutOfRange {
                action,
                num_actions: self.num_actions,
            });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(MdpError::LearningRate(alpha));
        }
        let next_value = if next_terminal {
            0.0
        } else {
            self.state_value(next)
        };
        let idx = state * self.num_actions + action;
        self.values[idx] = (1.0 - alpha) * self.values[idx] + alpha * (reward + gamma * next_value);
        Ok(())
    }
}

/// Per-state argmax of `q`, lowest action index on ties. States for which
/// `is_terminal` holds get no action.
pub fn greedy_policy(q: &QTable, is_terminal: impl Fn(usize) -> bool) -> Policy {
    Policy::new(
        (0..q.num_states())
            .map(|s| if is_terminal(s) { None } else { argmax(q.row(s)) })
            .collect(),
    )
}

/// Learning-rate schedule for [`q_learning`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSchedule {
    /// Every update uses the base rate.
    Constant,
    /// The `k`-th update of a cell (from 0) uses `α · h / (h + k)`, so the rate
    /// halves after `h` visits to that cell.
    VisitDecay { half_life: f64 },
}

impl AlphaSchedule {
    pub fn rate(&self, alpha: f64, visits: u64) -> f64 {
        match *self {
            AlphaSchedule::Constant => alpha,
            AlphaSchedule::VisitDecay { half_life } => alpha * half_life / (half_life + visits as f64),
        }
    }
}

impl Default for AlphaSchedule {
    fn default() -> Self {
        AlphaSchedule::VisitDecay { half_life: 1000.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QLearningConfig {
    pub episodes: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub schedule: AlphaSchedule,
    pub seed: u64,
    /// Episodes are cut after this many steps (worlds that never reach a terminal state).
    pub max_steps_per_episode: usize,
}

impl Default for QLearningConfig {
    fn default() -> Self {
        Self {
            episodes: 20_000,
            alpha: 0.05,
            gamma: 0.9,
            schedule: AlphaSchedule::default(),
            seed: 0,
            max_steps_per_episode: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QLearningRun {
    pub table: QTable,
    /// Discounted return collected in each episode.
    pub returns: Vec<f64>,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QLearningError {
    #[error(transparent)]
    Config(#[from] MdpError),
    #[error("episode {episode}: {source}")]
    Env { episode: usize, source: EnvError },
}

/// Tabular Q-learning with uniform random exploration.
///
/// Each episode starts from `env.reset()` and ends on a terminal transition
/// (or after `max_steps_per_episode`). Deterministic for a fixed seed.
pub fn q_learning<E: Environment + ?Sized>(
    env: &mut E,
    config: &QLearningConfig,
) -> Result<QLearningRun, QLearningError> {
    if !(0.0..=1.0).contains(&config.gamma) {
        return Err(MdpError::Discount(config.gamma).into());
    }
    let (n, m) = (env.num_states(), env.num_actions());
    let mut table = QTable::new(n, m, config.alpha)?;
    let mut visits = vec![0u64; n * m];
    let mut rng = seeded_rng(config.seed);
    let mut returns = Vec::with_capacity(config.episodes);
    let mut steps = 0;

    for episode in 0..config.episodes {
        let mut state = env.reset();
        let mut ret = 0.0;
        let mut discount = 1.0;
        for _ in 0..config.max_steps_per_episode {
            let action = rng.random_range(0..m);
            let t = env
                .step(state, action, &mut rng)
                .map_err(|source| QLearningError::Env { episode, source })?;
            let k = &mut visits[state * m + action];
            let alpha = config.schedule.rate(config.alpha, *k);
            *k += 1;
            table.update_with_rate(state, action, t.next, t.reward, config.gamma, t.terminal, alpha)?;
            ret += discount * t.reward;
            discount *= config.gamma;
            steps += 1;
            if t.terminal {
                break;
            }
            state = t.next;
        }
        returns.push(ret);
    }

    Ok(QLearningRun {
        table,
        returns,
        steps,
    })
}
