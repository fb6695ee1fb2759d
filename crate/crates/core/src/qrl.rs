//! Quantum reinforcement learning: Q-learning drives a variational circuit
//! whose measurement distribution on `|s⟩` is fitted to the Q-value ratios
//! `Q(s,a) / Σ_i Q(s,i)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::Rng;

use crate::mdp::{AlphaSchedule, EnvError, Environment, MdpError, QTable};
use crate::seeded_rng;
use crate::util::argmax;
use crate::vqc::{self, CircuitSpec, ThetaStack, VqcError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QrlError {
    #[error(transparent)]
    Config(#[from] MdpError),
    #[error(transparent)]
    Circuit(#[from] VqcError),
    #[error("circuit learning rate must be positive, got {0}")]
    CircuitLearningRate(f64),
    #[error("{actions} actions do not fit in {outcomes} circuit outcomes")]
    ActionSpace { actions: usize, outcomes: usize },
    #[error("epoch {epoch}: state {state} cannot be basis-encoded in the circuit register")]
    StateEncoding { epoch: usize, state: usize },
    #[error("epoch {epoch}: {source}")]
    Env { epoch: usize, source: EnvError },
    #[error("epoch {epoch}: circuit loss is not finite")]
    Diverged { epoch: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainerConfig {
    /// Base Q-learning rate.
    pub alpha: f64,
    pub schedule: AlphaSchedule,
    pub gamma: f64,
    pub circuit_lr: f64,
    pub epochs: usize,
    /// Gradient steps on the circuit after each Q-update.
    pub inner_steps: usize,
    pub seed: u64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            schedule: AlphaSchedule::default(),
            gamma: 0.9,
            circuit_lr: 0.01,
            epochs: 5000,
            inner_steps: 10,
            seed: 0,
        }
    }
}

impl TrainerConfig {
    fn validate(&self) -> Result<(), QrlError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(MdpError::LearningRate(self.alpha).into());
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(MdpError::Discount(self.gamma).into());
        }
        if !(self.circuit_lr > 0.0 && self.circuit_lr.is_finite()) {
            return Err(QrlError::CircuitLearningRate(self.circuit_lr));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// World state the action was taken in.
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    /// Environment observable of the transition (separation distance for the train world).
    pub distance: Option<f64>,
    /// `V(0) = max_a Q(0, a)` after the update.
    pub v0: f64,
    /// Circuit action distribution for `state` after the epoch's gradient steps.
    pub probabilities: Vec<f64>,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingTrace {
    pub records: Vec<EpochRecord>,
}

impl TrainingTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QrlRun {
    pub theta: ThetaStack,
    pub initial_theta: ThetaStack,
    pub trace: TrainingTrace,
    pub q_table: QTable,
}

/// Clamped Q-value ratios: `max(Q(s,a), 0) / Σ_i max(Q(s,i), 0)`, uniform when
/// every clamped entry is zero.
pub fn target_distribution(q: &QTable, state: usize) -> Vec<f64> {
    target_from_row(q.row(state))
}

pub fn target_from_row(row: &[f64]) -> Vec<f64> {
    let clamped: Vec<f64> = row
        .iter()
        .map(|&v| if v > 0.0 && v.is_finite() { v } else { 0.0 })
        .collect();
    let total: f64 = clamped.iter().sum();
    if total > 0.0 && total.is_finite() {
        clamped.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / row.len() as f64; row.len()]
    }
}

/// Action with the highest circuit probability on `|s⟩`, lowest index on ties.
pub fn policy_action(
    spec: &CircuitSpec,
    stack: &ThetaStack,
    state: usize,
    num_actions: usize,
) -> Result<usize, VqcError> {
    let probs = vqc::action_distribution(spec, stack, state, num_actions)?;
    Ok(argmax(&probs).unwrap_or(0))
}

/// Angles drawn uniformly from `[0, 2π)`.
pub fn random_theta(spec: &CircuitSpec, rng: &mut impl Rng) -> ThetaStack {
    ThetaStack::from_fn(spec, |_, _, _| rng.random::<f64>() * TAU)
}

/// Trains a variational policy with random initial angles drawn from the run seed.
pub fn qrl_train<E: Environment + ?Sized>(
    env: &mut E,
    spec: &CircuitSpec,
    config: &TrainerConfig,
) -> Result<QrlRun, QrlError> {
    let mut rng = seeded_rng(config.seed);
    let initial = random_theta(spec, &mut rng);
    train(env, spec, config, initial, &mut rng)
}

/// Same as [`qrl_train`] but starting from the given angles.
pub fn qrl_train_from<E: Environment + ?Sized>(
    env: &mut E,
    spec: &CircuitSpec,
    config: &TrainerConfig,
    initial: ThetaStack,
) -> Result<QrlRun, QrlError> {
    let mut rng = seeded_rng(config.seed);
    train(env, spec, config, initial, &mut rng)
}

fn train<E: Environment + ?Sized>(
    env: &mut E,
    spec: &CircuitSpec,
    config: &TrainerConfig,
    initial: ThetaStack,
    rng: &mut crate::ChaCha8Rng,
) -> Result<QrlRun, QrlError> {
    config.validate()?;
    initial.validate(spec)?;
    let (n, m) = (env.num_states(), env.num_actions());
    if m == 0 || m > spec.num_outcomes() {
        return Err(QrlError::ActionSpace {
            actions: m,
            outcomes: spec.num_outcomes(),
        });
    }
    let mut q = QTable::new(n, m, config.alpha)?;
    let mut visits = vec![0u64; n * m];
    let mut theta = initial.clone();
    let mut records = Vec::with_capacity(config.epochs);

    let mut state = env.reset();
    for epoch in 0..config.epochs {
        if state >= spec.num_outcomes() {
            return Err(QrlError::StateEncoding { epoch, state });
        }
        let action = rng.random_range(0..m);
        let t = env
            .step(state, action, rng)
            .map_err(|source| QrlError::Env { epoch, source })?;

        let k = &mut visits[state * m + action];
        let alpha = config.schedule.rate(config.alpha, *k);
        *k += 1;
        q.update_with_rate(state, action, t.next, t.reward, config.gamma, t.terminal, alpha)?;

        let targets = target_distribution(&q, state);
        for _ in 0..config.inner_steps {
            let grad = vqc::gradient(spec, &theta, state, &targets)?;
            theta = vqc::gradient_step(&theta, &grad, config.circuit_lr)?;
        }
        let probabilities = vqc::action_distribution(spec, &theta, state, m)?;
        let loss = vqc::loss(&probabilities, &targets)?;
        if !loss.is_finite() || !theta.flat().all(f64::is_finite) {
            return Err(QrlError::Diverged { epoch });
        }

        records.push(EpochRecord {
            epoch,
            state,
            action,
            reward: t.reward,
            distance: t.observation,
            v0: q.state_value(0),
            probabilities,
            loss,
        });

        state = if t.terminal { env.reset() } else { t.next };
    }

    Ok(QrlRun {
        theta,
        initial_theta: initial,
        trace: TrainingTrace { records },
        q_table: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{Mdp, MdpEnvironment};

    #[test]
    fn target_examples() {
        assert_eq!(target_from_row(&[3.0, 1.0]), vec![0.75, 0.25]);
        assert_eq!(target_from_row(&[0.0, 0.0]), vec![0.5, 0.5]);
        assert_eq!(target_from_row(&[2.0, 2.0]), vec![0.5, 0.5]);
        assert_eq!(target_from_row(&[-1.0, 2.0]), vec![0.0, 1.0]);
        assert_eq!(target_from_row(&[-1.0, -2.0, -3.0]).len(), 3);
    }

    #[test]
    fn policy_action_examples() {
        let spec = CircuitSpec::single_qubit();
        // p0 = (1 + cos a cos b) / 2; a = 0, b = π/2 gives (0.5, 0.5)
        let uniform = ThetaStack::new(vec![vqc::Theta::new(vec![[
            0.0,
            core::f64::consts::FRAC_PI_2,
            0.0,
        ]])]);
        assert_eq!(policy_action(&spec, &uniform, 0, 2).unwrap(), 0);
        // p0 = 0.1 → cos b = -0.8
        let b = libm::acos(-0.8);
        let biased = ThetaStack::new(vec![vqc::Theta::new(vec![[0.0, b, 0.0]])]);
        let p = vqc::action_distribution(&spec, &biased, 0, 2).unwrap();
        assert!((p[0] - 0.1).abs() < 1e-12);
        assert_eq!(policy_action(&spec, &biased, 0, 2).unwrap(), 1);
    }

    #[test]
    fn zero_epochs_is_a_no_op() {
        let mdp = Mdp::builder(2, 2, 0.9)
            .transition(0, 0, 1, 1.0, 1.0)
            .transition(0, 1, 1, 1.0, 0.0)
            .terminal(1)
            .build()
            .unwrap();
        let mut env = MdpEnvironment::new(mdp);
        let config = TrainerConfig {
            epochs: 0,
            ..TrainerConfig::default()
        };
        let run = qrl_train(&mut env, &CircuitSpec::single_qubit(), &config).unwrap();
        assert!(run.trace.is_empty());
        assert_eq!(run.theta, run.initial_theta);
    }

    #[test]
    fn single_action_world_is_degenerate() {
        let mdp = Mdp::builder(2, 1, 0.9)
            .transition(0, 0, 0, 0.5, 1.0)
            .transition(0, 0, 1, 0.5, 0.0)
            .terminal(1)
            .build()
            .unwrap();
        let mut env = MdpEnvironment::new(mdp);
        let config = TrainerConfig {
            epochs: 50,
            ..TrainerConfig::default()
        };
        let run = qrl_train(&mut env, &CircuitSpec::single_qubit(), &config).unwrap();
        assert!(run.trace.records.iter().all(|r| r.probabilities == vec![1.0]));
    }

    #[test]
    fn rejects_unencodable_actions_and_bad_rates() {
        let mdp = Mdp::builder(1, 3, 0.9)
            .transition(0, 0, 0, 1.0, 1.0)
            .build()
            .unwrap();
        let mut env = MdpEnvironment::new(mdp);
        let err = qrl_train(&mut env, &CircuitSpec::single_qubit(), &TrainerConfig::default());
        assert!(matches!(
            err,
            Err(QrlError::ActionSpace {
                actions: 3,
                outcomes: 2
            })
        ));
        let bad = TrainerConfig {
            circuit_lr: 0.0,
            ..TrainerConfig::default()
        };
        let spec = CircuitSpec::layered(2, 1).unwrap();
        assert!(matches!(
            qrl_train(&mut env, &spec, &bad),
            Err(QrlError::CircuitLearningRate(_))
        ));
    }

    #[test]
    fn env_failures_carry_the_epoch() {
        // action 1 is unavailable, so the first epoch that draws it fails
        let mdp = Mdp::builder(2, 2, 0.9)
            .transition(0, 0, 1, 1.0, 1.0)
            .terminal(1)
            .build()
            .unwrap();
        let mut env = MdpEnvironment::new(mdp);
        let config = TrainerConfig {
            epochs: 100,
            ..TrainerConfig::default()
        };
        match qrl_train(&mut env, &CircuitSpec::single_qubit(), &config) {
            Err(QrlError::Env { source, .. }) => {
                assert_eq!(source, EnvError::Action { state: 0, action: 1 })
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
