//! Variational circuits `W(Θ)`: layers of per-qubit `Rot` gates followed by a
//! ring of CNOTs, their measurement distributions, a squared-error loss and
//! parameter-shift gradients.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::qsim::{basis_encode, QsimError, StateVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VqcError {
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error("circuit needs at least one qubit and one layer")]
    EmptyCircuit,
    #[error("a single-qubit circuit cannot be entangling")]
    EntanglingSingleQubit,
    #[error(
        "expected {expected_layers} layers of {expected_rows} rows, got {layers} layers with {rows:?} rows"
    )]
    Shape {
        expected_layers: usize,
        expected_rows: usize,
        layers: usize,
        rows: Vec<usize>,
    },
    #[error("rotation angle at layer {layer}, qubit {qubit}, axis {axis} is not finite")]
    NonFinite { layer: usize, qubit: usize, axis: usize },
    #[error("length mismatch: {left} vs {right}")]
    Length { left: usize, right: usize },
    #[error("{0} actions do not fit in the circuit's output space of {1} outcomes")]
    TooManyActions(usize, usize),
    #[error("distribution sums to {0}, expected 1")]
    NotDistribution(f64),
    #[error("learning rate must be positive and finite, got {0}")]
    LearningRate(f64),
}

/// Accepted deviation of a target distribution's mass from 1.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitSpec {
    num_qubits: usize,
    num_layers: usize,
    entangling: bool,
}

impl CircuitSpec {
    pub fn new(num_qubits: usize, num_layers: usize, entangling: bool) -> Result<Self, VqcError> {
        if num_qubits == 0 || num_layers == 0 {
            return Err(VqcError::EmptyCircuit);
        }
        if num_qubits > crate::qsim::MAX_QUBITS {
            return Err(QsimError::QubitCount(num_qubits).into());
        }
        if num_qubits == 1 && entangling {
            return Err(VqcError::EntanglingSingleQubit);
        }
        Ok(Self {
            num_qubits,
            num_layers,
            entangling,
        })
    }

    /// `num_layers` layers, entangling whenever there is more than one qubit.
    pub fn layered(num_qubits: usize, num_layers: usize) -> Result<Self, VqcError> {
        Self::new(num_qubits, num_layers, num_qubits > 1)
    }

    pub fn single_qubit() -> Self {
        Self {
            num_qubits: 1,
            num_layers: 1,
            entangling: false,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn entangling(&self) -> bool {
        self.entangling
    }

    pub fn num_outcomes(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn num_parameters(&self) -> usize {
        3 * self.num_qubits * self.num_layers
    }
}

/// Rotation angles of one layer: row `i` holds the x, y and z angles of qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta {
    rows: Vec<[f64; 3]>,
}

impl Theta {
    pub fn new(rows: Vec<[f64; 3]>) -> Self {
        Self { rows }
    }

    pub fn zeros(num_qubits: usize) -> Self {
        Self {
            rows: vec![[0.0; 3]; num_qubits],
        }
    }

    pub fn rows(&self) -> &[[f64; 3]] {
        &self.rows
    }

    pub fn num_qubits(&self) -> usize {
        self.rows.len()
    }
}

/// One [`Theta`] per layer. Gradients share this shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaStack {
    layers: Vec<Theta>,
}

impl ThetaStack {
    pub fn new(layers: Vec<Theta>) -> Self {
        Self { layers }
    }

    pub fn zeros(spec: &CircuitSpec) -> Self {
        Self {
            layers: vec![Theta::zeros(spec.num_qubits); spec.num_layers],
        }
    }

    /// Builds a stack by calling `angle(layer, qubit, axis)` for every entry.
    pub fn from_fn(spec: &CircuitSpec, mut angle: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let layers = (0..spec.num_layers)
            .map(|l| {
                Theta::new(
                    (0..spec.num_qubits)
                        .map(|q| [angle(l, q, 0), angle(l, q, 1), angle(l, q, 2)])
                        .collect(),
                )
            })
            .collect();
        Self { layers }
    }

    pub fn layers(&self) -> &[Theta] {
        &self.layers
    }

    pub fn get(&self, layer: usize, qubit: usize, axis: usize) -> f64 {
        self.layers[layer].rows[qubit][axis]
    }

    pub fn set(&mut self, layer: usize, qubit: usize, axis: usize, value: f64) {
        self.layers[layer].rows[qubit][axis] = value;
    }

    /// All angles in (layer, qubit, axis) order.
    pub fn flat(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().flat_map(|t| t.rows.iter().flatten().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn flat_mut(&mut self) -> impl Iterator<Item = &mut f64> + '_ {
        self.layers.iter_mut().flat_map(|t| t.rows.iter_mut().flatten())
    }

    fn shape(&self) -> (usize, Vec<usize>) {
        (
            self.layers.len(),
            self.layers.iter().map(Theta::num_qubits).collect(),
        )
    }

    pub fn validate(&self, spec: &CircuitSpec) -> Result<(), VqcError> {
        let (layers, rows) = self.shape();
        if layers != spec.num_layers || rows.iter().any(|&r| r != spec.num_qubits) {
            return Err(VqcError::Shape {
                expected_layers: spec.num_layers,
                expected_rows: spec.num_qubits,
                layers,
                rows,
            });
        }
        for (l, theta) in self.layers.iter().enumerate() {
            for (q, row) in theta.rows.iter().enumerate() {
                if let Some(axis) = row.iter().position(|v| !v.is_finite()) {
                    return Err(VqcError::NonFinite {
                        layer: l,
                        qubit: q,
                        axis,
                    });
                }
            }
        }
        Ok(())
    }
}

fn apply_layer(theta: &Theta, state: &mut StateVector, entangling: bool) -> Result<(), QsimError> {
    for (q, [x, y, z]) in theta.rows.iter().enumerate() {
        state.apply_rot(q, *x, *y, *z)?;
    }
    let m = theta.num_qubits();
    if entangling && m > 1 {
        for q in 0..m {
            state.apply_cnot(q, (q + 1) % m)?;
        }
    }
    Ok(())
}

/// One layer: `Rot(Θ_i)` on every qubit `i`, then `CNOT(i → i+1 mod m)` for
/// ascending `i` when there are at least two qubits.
pub fn layer_forward(theta: &Theta, input: &StateVector) -> Result<StateVector, VqcError> {
    if theta.num_qubits() != input.num_qubits() {
        return Err(VqcError::Length {
            left: theta.num_qubits(),
            right: input.num_qubits(),
        });
    }
    let mut state = input.clone();
    apply_layer(theta, &mut state, true)?;
    Ok(state)
}

/// Two-angle policy circuit `RY(θ1) · RX(θ0) |0⟩` measured in the computational
/// basis. Index 0 is "take loop", index 1 "take bypass".
pub fn single_qubit_forward(theta0: f64, theta1: f64) -> [f64; 2] {
    let mut state = StateVector::zero(1).expect("one qubit");
    state.apply_rx(0, theta0).expect("qubit 0");
    state.apply_ry(0, theta1).expect("qubit 0");
    let p = state.probabilities();
    [p[0], p[1]]
}

/// Output state `W(Θ)|s⟩`.
pub fn evolve(spec: &CircuitSpec, stack: &ThetaStack, state_index: usize) -> Result<StateVector, VqcError> {
    stack.validate(spec)?;
    let mut state = basis_encode(state_index, spec.num_qubits)?;
    for theta in &stack.layers {
        apply_layer(theta, &mut state, spec.entangling)?;
    }
    Ok(state)
}

/// Measurement probabilities of `W(Θ)|s⟩` over all `2^m` outcomes.
pub fn output_distribution(
    spec: &CircuitSpec,
    stack: &ThetaStack,
    state_index: usize,
) -> Result<Vec<f64>, VqcError> {
    Ok(evolve(spec, stack, state_index)?.probabilities())
}

/// Distribution over the first `num_actions` outcomes, renormalised. Falls
/// back to uniform when the circuit puts no mass on any action outcome.
pub fn action_distribution(
    spec: &CircuitSpec,
    stack: &ThetaStack,
    state_index: usize,
    num_actions: usize,
) -> Result<Vec<f64>, VqcError> {
    check_actions(spec, num_actions)?;
    let full = output_distribution(spec, stack, state_index)?;
    Ok(mask(&full, num_actions))
}

fn check_actions(spec: &CircuitSpec, num_actions: usize) -> Result<(), VqcError> {
    if num_actions == 0 || num_actions > spec.num_outcomes() {
        return Err(VqcError::TooManyActions(num_actions, spec.num_outcomes()));
    }
    Ok(())
}

fn mask(full: &[f64], k: usize) -> Vec<f64> {
    let total: f64 = full[..k].iter().sum();
    if total > f64::MIN_POSITIVE {
        full[..k].iter().map(|p| p / total).collect()
    } else {
        vec![1.0 / k as f64; k]
    }
}

/// Squared-error distance `Σ_a (probs[a] − targets[a])²`.
pub fn loss(probs: &[f64], targets: &[f64]) -> Result<f64, VqcError> {
    if probs.len() != targets.len() {
        return Err(VqcError::Length {
            left: probs.len(),
            right: targets.len(),
        });
    }
    for dist in [probs, targets] {
        let sum: f64 = dist.iter().sum();
        if !((sum - 1.0).abs() <= DISTRIBUTION_TOLERANCE) {
            return Err(VqcError::NotDistribution(sum));
        }
    }
    Ok(probs.iter().zip(targets).map(|(p, t)| (p - t) * (p - t)).sum())
}

/// Loss of the circuit's action distribution against `targets`.
/// `targets.len()` is the number of actions; it may be smaller than `2^m`.
pub fn circuit_loss(
    spec: &CircuitSpec,
    stack: &ThetaStack,
    state_index: usize,
    targets: &[f64],
) -> Result<f64, VqcError> {
    let probs = action_distribution(spec, stack, state_index, targets.len())?;
    loss(&probs, targets)
}

/// Gradient of [`circuit_loss`] with respect to every angle, by the
/// parameter-shift rule: `∂p/∂θ = [p(θ + π/2) − p(θ − π/2)] / 2` for each
/// basis probability, chain-ruled through the masking and the loss.
pub fn gradient(
    spec: &CircuitSpec,
    stack: &ThetaStack,
    state_index: usize,
    targets: &[f64],
) -> Result<ThetaStack, VqcError> {
    let k = targets.len();
    check_actions(spec, k)?;
    let full = output_distribution(spec, stack, state_index)?;
    let probs = mask(&full, k);
    loss(&probs, targets)?;

    let total: f64 = full[..k].iter().sum();
    let masked = total > f64::MIN_POSITIVE;
    let residual: Vec<f64> = probs.iter().zip(targets).map(|(p, t)| 2.0 * (p - t)).collect();

    let mut grad = ThetaStack::zeros(spec);
    let mut shifted = stack.clone();
    for l in 0..spec.num_layers {
        for q in 0..spec.num_qubits {
            for axis in 0..3 {
                let theta = stack.get(l, q, axis);
                shifted.set(l, q, axis, theta + FRAC_PI_2);
                let plus = output_distribution(spec, &shifted, state_index)?;
                shifted.set(l, q, axis, theta - FRAC_PI_2);
                let minus = output_distribution(spec, &shifted, state_index)?;
                shifted.set(l, q, axis, theta);

                let d: Vec<f64> = (0..k).map(|a| (plus[a] - minus[a]) / 2.0).collect();
                let g = if masked {
                    // d(p_a / S) = (dp_a · S − p_a · dS) / S²
                    let d_total: f64 = d.iter().sum();
                    (0..k)
                        .map(|a| residual[a] * (d[a] * total - full[a] * d_total) / (total * total))
                        .sum()
                } else {
                    0.0
                };
                grad.set(l, q, axis, g);
            }
        }
    }
    Ok(grad)
}

/// Central finite-difference gradient of [`circuit_loss`]; the cross-check for
/// [`gradient`]. The reference step is `1e-6`.
pub fn finite_difference_gradient(
    spec: &CircuitSpec,
    stack: &ThetaStack,
    state_index: usize,
    targets: &[f64],
    step: f64,
) -> Result<ThetaStack, VqcError> {
    circuit_loss(spec, stack, state_index, targets)?;
    let mut grad = ThetaStack::zeros(spec);
    let mut shifted = stack.clone();
    for l in 0..spec.num_layers {
        for q in 0..spec.num_qubits {
            for axis in 0..3 {
                let theta = stack.get(l, q, axis);
                shifted.set(l, q, axis, theta + step);
                let plus = circuit_loss(spec, &shifted, state_index, targets)?;
                shifted.set(l, q, axis, theta - step);
                let minus = circuit_loss(spec, &shifted, state_index, targets)?;
                shifted.set(l, q, axis, theta);
                grad.set(l, q, axis, (plus - minus) / (2.0 * step));
            }
        }
    }
    Ok(grad)
}

/// Plain gradient descent `Θ ← Θ − lr · ∇`.
pub fn gradient_step(
    stack: &ThetaStack,
    grad: &ThetaStack,
    learning_rate: f64,
) -> Result<ThetaStack, VqcError> {
    if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
        return Err(VqcError::LearningRate(learning_rate));
    }
    if stack.shape() != grad.shape() {
        let (layers, rows) = grad.shape();
        return Err(VqcError::Shape {
            expected_layers: stack.layers.len(),
            expected_rows: stack.layers.first().map_or(0, Theta::num_qubits),
            layers,
            rows,
        });
    }
    let mut out = stack.clone();
    for (theta, g) in out.flat_mut().zip(grad.flat()) {
        *theta -= learning_rate * g;
    }
    Ok(out)
}
