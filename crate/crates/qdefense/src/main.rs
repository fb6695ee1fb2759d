use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdefense::commands;
use qdefense::config::{self, AttackCurveConfig, QgridConfig, ScenarioConfig, VelocityConfig};
use qdefense::output::{write_all_atomic, write_atomic};
use qdefense::Format;

/// Learning and attack experiments for the two-train defense game.
#[derive(Debug, Parser)]
#[command(name = "qdefense", version)]
struct Cli {
    /// JSON config for the subcommand; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Q(0, loop) and Q(0, bypass) by value iteration over the (p, q) grid.
    ///
    /// Config fields (defaults): gamma (0.9), grid_step (0.1), episodes (0),
    /// seed (0), alpha (0.05), alpha_half_life (1000, null for a fixed rate),
    /// max_steps_per_episode (200). With episodes > 0 each cell also reports
    /// tabular Q-learning estimates.
    Qgrid,
    /// Trains the one-qubit policy circuit against the train world.
    ///
    /// Config fields (defaults): p (0.9), q (0.9), gamma (0.9), tau (1),
    /// epochs (5000), seed (0), alpha (0.05), alpha_half_life (1000),
    /// circuit_lr (0.01), inner_steps (10). Writes the per-epoch trace to
    /// --out and the final angles as JSON to --theta-out, which defaults to
    /// the --out path with a `.theta.json` extension.
    Train {
        #[arg(long)]
        theta_out: Option<PathBuf>,
    },
    /// Plays laps with a fixed agent policy and reports the separation.
    ///
    /// Config fields (defaults): p (0.9), q (0.9), tau (1), epochs (10000),
    /// seed (0), agent_policy (always_loop | always_bypass | random).
    Simulate,
    /// Attack-success probability against attacker investment.
    ///
    /// Config fields (defaults): investment_max (10), points (101), models
    /// (Rayleigh with sigma 3, 2, 1.2 for classical, balanced, quantum). Each
    /// model is {scenario, family: rayleigh | rician, sigma, nu}.
    AttackCurve,
    /// Speed and gap of the attacked pursuer until the gap reaches tau.
    ///
    /// Config fields (defaults): v1 (1), launch_time (0), alpha_v (0.1),
    /// beta_v (0.05), initial_gap (4), tau (1), step (0.01), horizon (100).
    Velocity,
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => Ok(write_atomic(path, bytes)?),
        None => Ok(std::io::stdout().lock().write_all(bytes)?),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let path = cli.config.as_deref();
    let out = cli.out.as_deref();
    match cli.command {
        Command::Qgrid => {
            let mut c: QgridConfig = config::load(path)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            emit(out, &commands::qgrid(&c, cli.format)?)
        }
        Command::Train { theta_out } => {
            let mut c: ScenarioConfig = config::load(path)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            let theta_path = theta_out.or_else(|| out.map(|o| o.with_extension("theta.json")));
            let result = commands::train(&c, cli.format)?;
            match (out, theta_path.as_deref()) {
                (Some(o), Some(t)) => write_all_atomic(&[(o, &result.trace), (t, &result.theta)])?,
                (None, Some(t)) => {
                    write_atomic(t, &result.theta)?;
                    emit(None, &result.trace)?;
                }
                _ => emit(None, &result.trace)?,
            }
            Ok(())
        }
        Command::Simulate => {
            let mut c: ScenarioConfig = config::load(path)?;
            c.seed = cli.seed.unwrap_or(c.seed);
            emit(out, &commands::simulate(&c, cli.format)?)
        }
        Command::AttackCurve => {
            let c: AttackCurveConfig = config::load(path)?;
            emit(out, &commands::attack_curve(&c, cli.format)?)
        }
        Command::Velocity => {
            let c: VelocityConfig = config::load(path)?;
            emit(out, &commands::velocity(&c, cli.format)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
