use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::track::{separation_distance, Route, TrackLayout, DECISION_POINT};
use super::ScenarioError;
use crate::mdp::{EnvError, Environment, Mdp, Transition};
use crate::seeded_rng;

pub const AGENT_START: usize = 0;
pub const ADVERSARY_START: usize = 7;
/// Separation threshold in sections; distances at or below it are violations.
pub const DEFAULT_TAU: usize = 1;

/// Agent (Train 1) and adversary (Train 2) on the two-route track.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainWorld {
    pub train1_pos: usize,
    pub train2_pos: usize,
    /// Probability the adversary takes the loop when the agent takes the loop.
    p: f64,
    /// Probability the adversary takes the bypass when the agent takes the bypass.
    q: f64,
    pub tau: usize,
}

impl TrainWorld {
    pub fn new(p: f64, q: f64, tau: usize) -> Result<Self, ScenarioError> {
        check_probability("p", p)?;
        check_probability("q", q)?;
        Ok(Self {
            train1_pos: AGENT_START,
            train2_pos: ADVERSARY_START,
            p,
            q,
            tau,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn separation(&self) -> usize {
        separation_distance(self.train1_pos, self.train2_pos).expect("positions are valid sections")
    }

    pub fn reset(&mut self) {
        self.train1_pos = AGENT_START;
        self.train2_pos = ADVERSARY_START;
    }

    /// Adversary's route given the agent's: the same route with probability
    /// `p` (agent on the loop) or `q` (agent on the bypass), the other one
    /// otherwise. This keeps `P_{a0}(0,0) = p` and `P_{a1}(0,0) = q`.
    pub fn adversary_route(&self, agent: Route, rng: &mut dyn RngCore) -> Route {
        let (mimic, other) = match agent {
            Route::Loop => (self.p, Route::Bypass),
            Route::Bypass => (self.q, Route::Loop),
        };
        if rng.random::<f64>() < mimic {
            agent
        } else {
            other
        }
    }

    /// Plays one lap from the canonical configuration and leaves the trains
    /// at their end-of-lap positions.
    pub fn play_lap(&mut self, agent: Route, adversary: Route) -> LapOutcome {
        self.reset();
        let (outcome, t1, t2) = run_lap(agent, adversary);
        self.train1_pos = t1;
        self.train2_pos = t2;
        outcome
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<(), ScenarioError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ScenarioError::Probability { name, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LapOutcome {
    /// MDP state reached: 0 (no change), 1 (agent loop, adversary bypass) or
    /// 2 (agent bypass, adversary loop).
    pub state: usize,
    pub reward: i64,
    /// Separation distance when the agent is back at the decision point.
    pub distance: usize,
}

struct Train {
    route: Route,
    index: usize,
}

impl Train {
    fn position(&self) -> usize {
        TrackLayout.route(self.route)[self.index]
    }

    fn advance(&mut self, choice: Route) {
        let len = TrackLayout.route(self.route).len();
        self.index = (self.index + 1) % len;
        if self.index == 0 {
            // back at the decision point: commit to a route for the next cycle
            self.route = choice;
        }
    }
}

// Both trains move one section per tick until Train 1 is back at the decision point.
fn run_lap(agent: Route, adversary: Route) -> (LapOutcome, usize, usize) {
    let before = separation_distance(AGENT_START, ADVERSARY_START).expect("valid start");
    let mut t1 = Train {
        route: agent,
        index: 0,
    };
    // section 7 is the last section of either route before the decision point
    let mut t2 = Train {
        route: Route::Loop,
        index: TrackLayout.route(Route::Loop).len() - 1,
    };
    debug_assert_eq!(t2.position(), ADVERSARY_START);
    loop {
        t1.advance(agent);
        t2.advance(adversary);
        if t1.position() == DECISION_POINT {
            break;
        }
    }
    let distance = separation_distance(t1.position(), t2.position()).expect("valid positions");
    let state = match (agent, adversary) {
        (Route::Loop, Route::Bypass) => 1,
        (Route::Bypass, Route::Loop) => 2,
        _ => 0,
    };
    let outcome = LapOutcome {
        state,
        reward: distance as i64 - before as i64,
        distance,
    };
    (outcome, t1.position(), t2.position())
}

/// Outcome of one lap started with Train 1 at section 0 and Train 2 at section 7.
/// The reward is the change in separation distance over the lap.
pub fn lap_outcome(agent: Route, adversary: Route) -> LapOutcome {
    run_lap(agent, adversary).0
}

/// Three-state, two-action MDP of the decision at section 0; states 1 and 2
/// are terminal.
pub fn build_train_mdp(p: f64, q: f64, gamma: f64) -> Result<Mdp, ScenarioError> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    let reward = |agent, adversary| lap_outcome(agent, adversary).reward as f64;
    let (l, b) = (Route::Loop, Route::Bypass);
    Ok(Mdp::builder(3, 2, gamma)
        .transition(0, l.index(), 0, p, reward(l, l))
        .transition(0, l.index(), 1, 1.0 - p, reward(l, b))
        .transition(0, b.index(), 0, q, reward(b, b))
        .transition(0, b.index(), 2, 1.0 - q, reward(b, l))
        .terminal(1)
        .terminal(2)
        .build()?)
}

/// [`Environment`] that plays laps against the adversary.
#[derive(Debug, Clone)]
pub struct TrainEnvironment {
    world: TrainWorld,
}

impl TrainEnvironment {
    pub fn new(world: TrainWorld) -> Self {
        Self { world }
    }

    pub fn world(&self) -> &TrainWorld {
        &self.world
    }
}

impl Environment for TrainEnvironment {
    fn num_states(&self) -> usize {
        3
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn reset(&mut self) -> usize {
        self.world.reset();
        0
    }

    fn step(&mut self, state: usize, action: usize, rng: &mut dyn RngCore) -> Result<Transition, EnvError> {
        match state {
            0 => {}
            1 | 2 => return Err(EnvError::Terminal(state)),
            _ => return Err(EnvError::State { state }),
        }
        let agent = Route::from_index(action).ok_or(EnvError::Action { state, action })?;
        let adversary = self.world.adversary_route(agent, rng);
        let outcome = self.world.play_lap(agent, adversary);
        Ok(Transition {
            next: outcome.state,
            reward: outcome.reward as f64,
            terminal: outcome.state != 0,
            observation: Some(outcome.distance as f64),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentPolicy {
    AlwaysLoop,
    AlwaysBypass,
    /// Uniformly random route each lap.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LapRecord {
    pub epoch: usize,
    pub agent: Route,
    pub adversary: Route,
    pub distance: usize,
    pub reward: i64,
    /// `distance <= tau`.
    pub violation: bool,
}

/// Plays `epochs` laps, each from the canonical configuration.
pub fn simulate_laps(world: &TrainWorld, policy: AgentPolicy, epochs: usize, seed: u64) -> Vec<LapRecord> {
    let mut world = world.clone();
    let mut rng = seeded_rng(seed);
    (0..epochs)
        .map(|epoch| {
            let agent = match policy {
                AgentPolicy::AlwaysLoop => Route::Loop,
                AgentPolicy::AlwaysBypass => Route::Bypass,
                AgentPolicy::Random => {
                    if rng.random::<bool>() {
                        Route::Bypass
                    } else {
                        Route::Loop
                    }
                }
            };
            let adversary = world.adversary_route(agent, &mut rng);
            let outcome = world.play_lap(agent, adversary);
            LapRecord {
                epoch,
                agent,
                adversary,
                distance: outcome.distance,
                reward: outcome.reward,
                violation: outcome.distance <= world.tau,
            }
        })
        .collect()
}
