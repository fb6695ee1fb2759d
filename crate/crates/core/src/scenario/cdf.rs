//! Attack-success probability as a function of adversary investment, modelled
//! by Rayleigh and Rician CDFs.

use alloc::vec::Vec;

use super::ScenarioError;

/// The Marcum series stops once a term falls below this fraction of the running sum.
pub const SERIES_RELATIVE_TOLERANCE: f64 = 1e-12;
const MAX_SERIES_TERMS: usize = 1_000_000;

fn check_sigma(sigma: f64) -> Result<(), ScenarioError> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(ScenarioError::Argument {
            name: "sigma",
            value: sigma,
        })
    }
}

fn check_investment(x: f64) -> Result<(), ScenarioError> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(ScenarioError::Argument {
            name: "investment",
            value: x,
        })
    }
}

/// `1 − exp(−x² / (2σ²))`.
pub fn rayleigh_cdf(x: f64, sigma: f64) -> Result<f64, ScenarioError> {
    check_sigma(sigma)?;
    check_investment(x)?;
    let r = x / sigma;
    Ok(-libm::expm1(-r * r / 2.0))
}

/// `1 − Q₁(ν/σ, x/σ)`.
pub fn rician_cdf(x: f64, nu: f64, sigma: f64) -> Result<f64, ScenarioError> {
    check_sigma(sigma)?;
    check_investment(x)?;
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(ScenarioError::Argument {
            name: "nu",
            value: nu,
        });
    }
    noncentral_cdf(nu / sigma, x / sigma)
}

/// First-order Marcum Q function `Q₁(a, b)`.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64, ScenarioError> {
    for (name, value) in [("a", a), ("b", b)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(ScenarioError::Argument { name, value });
        }
    }
    Ok(1.0 - noncentral_cdf(a, b)?)
}

// 1 − Q₁(a, b) from the Bessel expansion of the noncentral chi distribution,
// regrouped into Poisson mixtures with λ = a²/2, y = b²/2:
//
//   1 − Q₁(a, b) = Σ_{j≥1} Pois(j; y) · P[N_λ < j]
//       Q₁(a, b) = Σ_{j≥0} Pois(j; y) · P[N_λ ≥ j]
//
// Whichever side is the smaller tail is summed, so the truncation error is
// relative to a quantity below about one half. a = 0, where the
// (b/a)^k I_k(ab) form is singular, reduces to the Rayleigh CDF exactly.
fn noncentral_cdf(a: f64, b: f64) -> Result<f64, ScenarioError> {
    if b == 0.0 {
        return Ok(0.0);
    }
    let y = b * b / 2.0;
    let lambda = a * a / 2.0;
    if lambda == 0.0 {
        return Ok(-libm::expm1(-y));
    }
    if y <= lambda {
        poisson_mixture(lambda, y, false)
    } else {
        Ok(1.0 - poisson_mixture(lambda, y, true)?)
    }
}

fn poisson_pmf(k: f64, ln_mean: f64, mean: f64) -> f64 {
    libm::exp(-mean + k * ln_mean - libm::lgamma(k + 1.0))
}

// Σ_j Pois(j; y) · P[N_λ < j] (j ≥ 1), or with `upper` Σ_j Pois(j; y) · P[N_λ ≥ j] (j ≥ 0).
// The terms are unimodal, so a term below the tolerance past both means
// marks the tail.
fn poisson_mixture(lambda: f64, y: f64, upper: bool) -> Result<f64, ScenarioError> {
    let (ln_lambda, ln_y) = (libm::log(lambda), libm::log(y));
    let settled = 2.0 * (y + lambda) + 100.0;
    let mut below: f64 = 0.0; // P[N_λ < j]
    let mut sum = 0.0;
    let mut previous = 0.0;
    for j in 0..MAX_SERIES_TERMS {
        let jf = j as f64;
        let weight = if upper { (1.0 - below).max(0.0) } else { below };
        let term = poisson_pmf(jf, ln_y, y) * weight;
        sum += term;
        if jf > y && jf > lambda && term <= SERIES_RELATIVE_TOLERANCE * sum {
            return Ok(sum.clamp(0.0, 1.0));
        }
        if jf > settled && term > previous {
            return Err(ScenarioError::SeriesDiverged {
                terms: j + 1,
                last_term: term,
            });
        }
        previous = term;
        below += poisson_pmf(jf, ln_lambda, lambda);
    }
    Err(ScenarioError::SeriesDiverged {
        terms: MAX_SERIES_TERMS,
        last_term: previous,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CdfFamily {
    Rayleigh { sigma: f64 },
    Rician { nu: f64, sigma: f64 },
}

impl CdfFamily {
    pub fn cdf(&self, x: f64) -> Result<f64, ScenarioError> {
        match *self {
            CdfFamily::Rayleigh { sigma } => rayleigh_cdf(x, sigma),
            CdfFamily::Rician { nu, sigma } => rician_cdf(x, nu, sigma),
        }
    }
}

/// Balance of computing resources between adversary and defender.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackScenario {
    /// Neither side has quantum resources.
    Classical,
    /// Both sides have comparable quantum resources.
    Balanced,
    /// The adversary has quantum resources the defender lacks.
    Quantum,
}

impl AttackScenario {
    pub const ALL: [AttackScenario; 3] = [
        AttackScenario::Classical,
        AttackScenario::Balanced,
        AttackScenario::Quantum,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AttackScenario::Classical => "classical",
            AttackScenario::Balanced => "balanced",
            AttackScenario::Quantum => "quantum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackCdfModel {
    pub family: CdfFamily,
    pub scenario: AttackScenario,
}

impl AttackCdfModel {
    /// Illustrative Rayleigh scales: the stronger the adversary, the smaller σ.
    pub fn default_for(scenario: AttackScenario) -> Self {
        let sigma = match scenario {
            AttackScenario::Classical => 3.0,
            AttackScenario::Balanced => 2.0,
            AttackScenario::Quantum => 1.2,
        };
        Self {
            family: CdfFamily::Rayleigh { sigma },
            scenario,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub investment: f64,
    pub probability: f64,
}

/// Attack-success probability on a sorted, nonnegative investment grid.
pub fn attack_success_curve(
    model: &AttackCdfModel,
    investments: &[f64],
) -> Result<Vec<CurvePoint>, ScenarioError> {
    for (i, &x) in investments.iter().enumerate() {
        if !(x >= 0.0) || (i > 0 && x < investments[i - 1]) {
            return Err(ScenarioError::Grid(i));
        }
    }
    investments
        .iter()
        .map(|&investment| {
            Ok(CurvePoint {
                investment,
                probability: model.family.cdf(investment)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_examples() {
        assert_eq!(rayleigh_cdf(0.0, 2.0).unwrap(), 0.0);
        let sigma = 1.7;
        let median = sigma * libm::sqrt(2.0 * core::f64::consts::LN_2);
        assert!((rayleigh_cdf(median, sigma).unwrap() - 0.5).abs() < 1e-15);
        assert!(rayleigh_cdf(10.0 * sigma, sigma).unwrap() >= 1.0 - 1e-20);
        assert!(rayleigh_cdf(-1.0, 1.0).is_err());
        assert!(rayleigh_cdf(1.0, 0.0).is_err());
    }

    #[test]
    fn rician_degenerates_to_rayleigh() {
        for i in 0..200 {
            let x = i as f64 * 0.05;
            let a = rician_cdf(x, 0.0, 1.3).unwrap();
            let b = rayleigh_cdf(x, 1.3).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
        assert_eq!(rician_cdf(0.0, 2.0, 1.0).unwrap(), 0.0);
        assert!(rician_cdf(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn rician_is_monotone_and_bounded() {
        for nu in [0.5, 2.0, 10.0, 40.0] {
            let mut prev = 0.0;
            for i in 0..400 {
                let x = i as f64 * 0.15;
                let f = rician_cdf(x, nu, 1.0).unwrap();
                assert!((0.0..=1.0).contains(&f));
                assert!(f >= prev - 1e-14, "nu={nu} x={x}: {f} < {prev}");
                prev = f;
            }
            assert!(prev > 1.0 - 1e-9);
        }
    }

    #[test]
    fn marcum_q_known_values() {
        // Q₁(0, b) = e^{−b²/2}
        assert!((marcum_q1(0.0, 1.5).unwrap() - libm::exp(-1.125)).abs() < 1e-15);
        // Q₁(a, 0) = 1
        assert_eq!(marcum_q1(3.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn default_scenarios_are_ordered() {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let curves: Vec<_> = AttackScenario::ALL
            .iter()
            .map(|&s| attack_success_curve(&AttackCdfModel::default_for(s), &grid).unwrap())
            .collect();
        for ((c, b), q) in curves[0].iter().zip(&curves[1]).zip(&curves[2]) {
            assert!(q.probability >= b.probability && b.probability >= c.probability);
        }
        assert!(curves.iter().all(|c| c[0].probability == 0.0));
        let model = AttackCdfModel::default_for(AttackScenario::Balanced);
        assert_eq!(
            attack_success_curve(&model, &[0.0, 2.0, 1.0]),
            Err(ScenarioError::Grid(2))
        );
        assert_eq!(attack_success_curve(&model, &[-1.0]), Err(ScenarioError::Grid(0)));
    }
}
