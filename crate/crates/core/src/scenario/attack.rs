use alloc::vec::Vec;

use super::ScenarioError;

/// Hijacked speed command `v(t + Δ) = v(t) + α_v · e^{β_v (t + Δ)}`.
///
/// `alpha_v` and `beta_v` are the drift and exponent constants of the attack;
/// they are unrelated to the learning rates elsewhere in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityAttack {
    pub launch_time: f64,
    pub alpha_v: f64,
    pub beta_v: f64,
}

pub fn velocity_attack_speed(
    v: f64,
    attack: &VelocityAttack,
    t: f64,
    delta: f64,
) -> Result<f64, ScenarioError> {
    if !(delta >= 0.0) {
        return Err(ScenarioError::Argument {
            name: "delta",
            value: delta,
        });
    }
    if attack.alpha_v == 0.0 {
        return Ok(v);
    }
    let time = t + delta;
    let speed = v + attack.alpha_v * libm::exp(attack.beta_v * time);
    if speed.is_finite() {
        Ok(speed)
    } else {
        Err(ScenarioError::Overflow { time })
    }
}

/// Euler integration settings for [`time_to_violation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationSearch {
    pub step: f64,
    pub horizon: f64,
}

impl Default for ViolationSearch {
    fn default() -> Self {
        Self {
            step: 0.01,
            horizon: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    /// Time since the attack launch.
    pub time: f64,
    /// Speed of the attacked pursuer (Train 2).
    pub velocity: f64,
    /// Remaining separation in sections.
    pub gap: f64,
}

/// Pursuer speed and remaining gap at every integration step, from launch
/// until the gap reaches `tau` (inclusive) or the horizon is passed.
///
/// Both trains run at `v1` before the launch; afterwards the pursuer's speed
/// follows [`velocity_attack_speed`] and the gap shrinks by the relative
/// displacement.
pub fn velocity_trajectory(
    v1: f64,
    attack: &VelocityAttack,
    initial_gap: f64,
    tau: f64,
    search: ViolationSearch,
) -> Result<Vec<TrajectoryPoint>, ScenarioError> {
    if !(search.step > 0.0 && search.step.is_finite()) {
        return Err(ScenarioError::Argument {
            name: "step",
            value: search.step,
        });
    }
    if !(search.horizon >= 0.0) {
        return Err(ScenarioError::Argument {
            name: "horizon",
            value: search.horizon,
        });
    }
    let steps = libm::floor(search.horizon / search.step + 1e-9) as usize;
    let mut points = Vec::new();
    let mut gap = initial_gap;
    for k in 0..=steps {
        let time = k as f64 * search.step;
        let velocity = velocity_attack_speed(v1, attack, attack.launch_time, time)?;
        points.push(TrajectoryPoint { time, velocity, gap });
        if gap <= tau {
            break;
        }
        gap -= (velocity - v1) * search.step;
    }
    Ok(points)
}

/// First integration step (time since launch) at which the gap is `<= tau`,
/// or `None` within the horizon.
pub fn time_to_violation(
    v1: f64,
    attack: &VelocityAttack,
    initial_gap: f64,
    tau: f64,
    search: ViolationSearch,
) -> Result<Option<f64>, ScenarioError> {
    let points = velocity_trajectory(v1, attack, initial_gap, tau, search)?;
    Ok(points.last().filter(|p| p.gap <= tau).map(|p| p.time))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attack(alpha_v: f64, beta_v: f64) -> VelocityAttack {
        VelocityAttack {
            launch_time: 0.0,
            alpha_v,
            beta_v,
        }
    }

    #[test]
    fn speed_examples() {
        for (t, d) in [(0.0, 0.0), (3.0, 7.0), (100.0, 1e3)] {
            assert_eq!(
                velocity_attack_speed(12.0, &attack(0.0, 5.0), t, d).unwrap(),
                12.0
            );
        }
        assert_eq!(
            velocity_attack_speed(10.0, &attack(0.3, 0.0), 4.0, 2.0).unwrap(),
            10.3
        );
        let v = velocity_attack_speed(10.0, &attack(0.1, 0.05), 0.0, 10.0).unwrap();
        // series: e^0.5 = Σ 0.5^k / k!
        let mut series = 0.0;
        let mut term = 1.0;
        for k in 1..30 {
            series += term;
            term *= 0.5 / k as f64;
        }
        assert!((v - (10.0 + 0.1 * series)).abs() < 1e-14);
        assert!((v - 10.1649).abs() < 1e-4);
        assert!(velocity_attack_speed(1.0, &attack(1.0, 1.0), 0.0, -1.0).is_err());
        assert!(matches!(
            velocity_attack_speed(1.0, &attack(1.0, 10.0), 0.0, 1000.0),
            Err(ScenarioError::Overflow { .. })
        ));
    }

    #[test]
    fn violation_examples() {
        let s = ViolationSearch::default();
        assert_eq!(
            time_to_violation(10.0, &attack(0.0, 0.1), 3.0, 1.0, s).unwrap(),
            None
        );
        assert_eq!(
            time_to_violation(10.0, &attack(0.5, 0.1), 1.0, 1.0, s).unwrap(),
            Some(0.0)
        );
        assert_eq!(
            time_to_violation(10.0, &attack(0.5, 0.1), 0.5, 1.0, s).unwrap(),
            Some(0.0)
        );
        let t = time_to_violation(10.0, &attack(0.5, 0.0), 3.0, 1.0, s)
            .unwrap()
            .unwrap();
        // constant drift 0.5 closes 2 sections in 4 time units
        assert!((t - 4.0).abs() < 0.02);
        assert!(time_to_violation(
            10.0,
            &attack(0.5, 0.0),
            3.0,
            1.0,
            ViolationSearch {
                step: 0.0,
                horizon: 1.0
            }
        )
        .is_err());
    }

    #[test]
    fn trajectory_stops_at_violation() {
        let s = ViolationSearch {
            step: 0.1,
            horizon: 50.0,
        };
        let pts = velocity_trajectory(10.0, &attack(0.2, 0.05), 3.0, 1.0, s).unwrap();
        assert!(pts.last().unwrap().gap <= 1.0);
        assert!(pts[..pts.len() - 1].iter().all(|p| p.gap > 1.0));
        let pts = velocity_trajectory(10.0, &attack(0.0, 0.05), 3.0, 1.0, s).unwrap();
        assert_eq!(pts.len(), 501);
        assert!(pts.iter().all(|p| p.gap == 3.0));
    }
}
