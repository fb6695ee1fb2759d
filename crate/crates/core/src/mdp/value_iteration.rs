use alloc::vec;
use alloc::vec::Vec;

use super::{Mdp, MdpError, Policy};
use crate::util::argmax;

/// Converged optimal values of an [`Mdp`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValueIteration {
    pub values: Vec<f64>,
    pub policy: Policy,
    /// Row-major `n × m` optimal Q-values. Terminal rows are 0; unavailable
    /// actions hold `-inf`.
    pub q_values: Vec<f64>,
    /// Sup-norm change `max_s |V_k(s) - V_{k-1}(s)|` of every sweep.
    pub residuals: Vec<f64>,
}

impl ValueIteration {
    pub fn q(&self, state: usize, action: usize) -> f64 {
        let m = self.q_values.len() / self.values.len();
        self.q_values[state * m + action]
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

/// Synchronous value iteration from `V = 0` until the sup-norm change of a
/// sweep drops to `tolerance` or below.
pub fn value_iteration(mdp: &Mdp, tolerance: f64, max_iterations: usize) -> Result<ValueIteration, MdpError> {
    if !(tolerance > 0.0) {
        return Err(MdpError::Tolerance(tolerance));
    }
    let n = mdp.num_states();
    let mut values = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut residuals = Vec::new();

    loop {
        let mut residual = 0.0_f64;
        for s in 0..n {
            next[s] = if mdp.is_terminal(s) {
                0.0
            } else {
                (0..mdp.num_actions())
                    .filter(|&a| mdp.is_available(s, a))
                    .map(|a| mdp.backup(s, a, &values))
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            residual = residual.max((next[s] - values[s]).abs());
        }
        core::mem::swap(&mut values, &mut next);
        residuals.push(residual);
        if residual <= tolerance {
            break;
        }
        if residuals.len() >= max_iterations {
            return Err(MdpError::NotConverged {
                iterations: residuals.len(),
                residual,
            });
        }
    }

    let q_values = optimal_q_values(mdp, &values);
    let m = mdp.num_actions();
    let policy = Policy::new(
        (0..n)
            .map(|s| {
                if mdp.is_terminal(s) {
                    None
                } else {
                    argmax(&q_values[s * m..(s + 1) * m])
                }
            })
            .collect(),
    );

    Ok(ValueIteration {
        values,
        policy,
        q_values,
        residuals,
    })
}

fn optimal_q_values(mdp: &Mdp, values: &[f64]) -> Vec<f64> {
    let (n, m) = (mdp.num_states(), mdp.num_actions());
    let mut q = vec![0.0; n * m];
    for s in (0..n).filter(|&s| !mdp.is_terminal(s)) {
        for a in 0..m {
            q[s * m + a] = if mdp.is_available(s, a) {
                mdp.backup(s, a, values)
            } else {
                f64::NEG_INFINITY
            };
        }
    }
    q
}
