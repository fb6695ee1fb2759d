//! Experiment runners behind the CLI subcommands. Each returns the rendered
//! bytes; writing them out is left to the caller.

use qdefense_core::mdp::{greedy_policy, q_learning, value_iteration, MdpEnvironment, QLearningConfig};
use qdefense_core::qrl::{qrl_train, QrlRun, TrainerConfig};
use qdefense_core::scenario::{
    attack_success_curve, build_train_mdp, simulate_laps, velocity_trajectory, TrainEnvironment, TrainWorld,
    VelocityAttack, ViolationSearch,
};
use qdefense_core::vqc::CircuitSpec;
use serde::Serialize;

use crate::config::{AttackCurveConfig, QgridConfig, ScenarioConfig, ScenarioName, VelocityConfig};
use crate::formats::{json_bytes, num, write_theta_json, write_trace, Format, Table};

pub const TRAIN_EPOCHS: usize = 5000;
pub const SIMULATE_EPOCHS: usize = 10_000;

/// Residual threshold and sweep cap for the value-iteration surface.
const VI_TOLERANCE: f64 = 1e-12;
const VI_MAX_ITERATIONS: usize = 1_000_000;

fn render<T: Serialize>(rows: &[T], table: impl FnOnce(&[T]) -> Table, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => table(rows).to_csv(),
        Format::Json => json_bytes(rows),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QgridRow {
    pub p: f64,
    pub q: f64,
    pub q0: f64,
    pub q1: f64,
    pub v0: f64,
    pub best_action: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learned: Option<LearnedCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnedCell {
    pub q0: f64,
    pub q1: f64,
    pub best_action: usize,
}

fn better(q0: f64, q1: f64) -> usize {
    usize::from(q1 > q0)
}

/// Q(0, ·) over the (p, q) grid, p-major.
pub fn qgrid_rows(config: &QgridConfig) -> anyhow::Result<Vec<QgridRow>> {
    let n = config
        .intervals()
        .ok_or_else(|| anyhow::anyhow!("grid_step must divide 1"))?;
    let mut rows = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            let (p, q) = (i as f64 / n as f64, j as f64 / n as f64);
            let mdp = build_train_mdp(p, q, config.gamma)?;
            let vi = value_iteration(&mdp, VI_TOLERANCE, VI_MAX_ITERATIONS)?;
            let learned = if config.episodes > 0 {
                let ql = QLearningConfig {
                    episodes: config.episodes,
                    alpha: config.alpha,
                    gamma: config.gamma,
                    schedule: config.schedule(),
                    seed: config.seed.wrapping_add(rows.len() as u64),
                    max_steps_per_episode: config.max_steps_per_episode,
                };
                let run = q_learning(&mut MdpEnvironment::new(mdp), &ql)?;
                let best = greedy_policy(&run.table, |s| s != 0).action(0).unwrap_or(0);
                Some(LearnedCell {
                    q0: run.table.get(0, 0),
                    q1: run.table.get(0, 1),
                    best_action: best,
                })
            } else {
                None
            };
            let (q0, q1) = (vi.q(0, 0), vi.q(0, 1));
            rows.push(QgridRow {
                p,
                q,
                q0,
                q1,
                v0: vi.values[0],
                best_action: better(q0, q1),
                learned,
            });
        }
    }
    Ok(rows)
}

pub fn qgrid(config: &QgridConfig, format: Format) -> anyhow::Result<Vec<u8>> {
    let rows = qgrid_rows(config)?;
    let learned = config.episodes > 0;
    Ok(render(
        &rows,
        |rows| {
            let mut header = vec!["p", "q", "q0", "q1", "v0", "best_action"];
            if learned {
                header.extend(["learned_q0", "learned_q1", "learned_best_action"]);
            }
            let mut t = Table::new(header);
            for r in rows {
                let mut row = vec![
                    num(r.p),
                    num(r.q),
                    num(r.q0),
                    num(r.q1),
                    num(r.v0),
                    r.best_action.to_string(),
                ];
                if let Some(l) = &r.learned {
                    row.extend([num(l.q0), num(l.q1), l.best_action.to_string()]);
                }
                t.push(row);
            }
            t
        },
        format,
    ))
}

pub fn train_run(config: &ScenarioConfig) -> anyhow::Result<QrlRun> {
    let world = TrainWorld::new(config.p, config.q, config.tau)?;
    let trainer = TrainerConfig {
        alpha: config.alpha,
        schedule: config.schedule(),
        gamma: config.gamma,
        circuit_lr: config.circuit_lr,
        epochs: config.epochs.unwrap_or(TRAIN_EPOCHS),
        inner_steps: config.inner_steps,
        seed: config.seed,
    };
    Ok(qrl_train(
        &mut TrainEnvironment::new(world),
        &CircuitSpec::single_qubit(),
        &trainer,
    )?)
}

/// Training trace and final Θ document.
pub struct TrainOutput {
    pub run: QrlRun,
    pub trace: Vec<u8>,
    pub theta: Vec<u8>,
}

pub fn train(config: &ScenarioConfig, format: Format) -> anyhow::Result<TrainOutput> {
    let run = train_run(config)?;
    Ok(TrainOutput {
        trace: write_trace(&run.trace, 2, format),
        theta: write_theta_json(&run.theta),
        run,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LapRow {
    pub epoch: usize,
    pub distance: usize,
    pub reward: i64,
    pub violation: bool,
}

pub fn simulate_rows(config: &ScenarioConfig) -> anyhow::Result<Vec<LapRow>> {
    let world = TrainWorld::new(config.p, config.q, config.tau)?;
    let epochs = config.epochs.unwrap_or(SIMULATE_EPOCHS);
    Ok(
        simulate_laps(&world, config.agent_policy.into(), epochs, config.seed)
            .into_iter()
            .map(|l| LapRow {
                epoch: l.epoch,
                distance: l.distance,
                reward: l.reward,
                violation: l.violation,
            })
            .collect(),
    )
}

/// Violations are written as `0`/`1`.
pub fn simulate(config: &ScenarioConfig, format: Format) -> anyhow::Result<Vec<u8>> {
    let rows = simulate_rows(config)?;
    Ok(render(
        &rows,
        |rows| {
            let mut t = Table::new(["epoch", "distance", "reward", "violation"]);
            for r in rows {
                t.push(vec![
                    r.epoch.to_string(),
                    r.distance.to_string(),
                    r.reward.to_string(),
                    u8::from(r.violation).to_string(),
                ]);
            }
            t
        },
        format,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub investment: f64,
    pub probability: f64,
    pub scenario: ScenarioName,
}

pub fn attack_curve_rows(config: &AttackCurveConfig) -> anyhow::Result<Vec<CurveRow>> {
    let grid = config.grid();
    let mut rows = Vec::with_capacity(grid.len() * config.models.len());
    for m in &config.models {
        for p in attack_success_curve(&m.model(), &grid)? {
            rows.push(CurveRow {
                investment: p.investment,
                probability: p.probability,
                scenario: m.scenario,
            });
        }
    }
    Ok(rows)
}

pub fn attack_curve(config: &AttackCurveConfig, format: Format) -> anyhow::Result<Vec<u8>> {
    let rows = attack_curve_rows(config)?;
    Ok(render(
        &rows,
        |rows| {
            let mut t = Table::new(["investment", "probability", "scenario"]);
            for r in rows {
                let label = qdefense_core::scenario::AttackScenario::from(r.scenario).label();
                t.push(vec![num(r.investment), num(r.probability), label.to_string()]);
            }
            t
        },
        format,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityRow {
    pub time: f64,
    pub velocity: f64,
    pub gap: f64,
}

/// Trajectory and the violation time, if the gap reaches `tau` within the horizon.
pub fn velocity_rows(config: &VelocityConfig) -> anyhow::Result<(Vec<VelocityRow>, Option<f64>)> {
    let attack = VelocityAttack {
        launch_time: config.launch_time,
        alpha_v: config.alpha_v,
        beta_v: config.beta_v,
    };
    let search = ViolationSearch {
        step: config.step,
        horizon: config.horizon,
    };
    let points = velocity_trajectory(config.v1, &attack, config.initial_gap, config.tau, search)?;
    let violation = points.last().filter(|p| p.gap <= config.tau).map(|p| p.time);
    let rows = points
        .into_iter()
        .map(|p| VelocityRow {
            time: p.time,
            velocity: p.velocity,
            gap: p.gap,
        })
        .collect();
    Ok((rows, violation))
}

#[derive(Serialize)]
struct VelocityDocument<'a> {
    violation_time: Option<f64>,
    trajectory: &'a [VelocityRow],
}

pub fn velocity(config: &VelocityConfig, format: Format) -> anyhow::Result<Vec<u8>> {
    let (rows, violation_time) = velocity_rows(config)?;
    Ok(match format {
        Format::Csv => {
            let mut t = Table::new(["time", "velocity", "gap"]);
            for r in &rows {
                t.push(vec![num(r.time), num(r.velocity), num(r.gap)]);
            }
            t.to_csv()
        }
        Format::Json => json_bytes(&VelocityDocument {
            violation_time,
            trajectory: &rows,
        }),
    })
}
