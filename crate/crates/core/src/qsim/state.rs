use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::gates::{self, Matrix2};
use super::{QsimError, NORM_TOLERANCE};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self, QsimError> {
        basis_encode(0, num_qubits)
    }

    /// Wraps raw amplitudes; the length must be `2^n` and the norm 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QsimError> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized(libm::sqrt(norm_sqr)));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Measurement distribution over the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draws a basis index from [`probabilities`](Self::probabilities).
    /// The state itself is left untouched.
    pub fn measure(&self, rng: &mut dyn RngCore) -> usize {
        let u: f64 = rng.random::<f64>() * self.norm_sqr();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if u < acc {
                return i;
            }
        }
        last_nonzero
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), QsimError> {
        if qubit < self.num_qubits {
            Ok(())
        } else {
            Err(QsimError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            })
        }
    }

    /// Applies a single-qubit unitary to `qubit`.
    pub fn apply_single(&mut self, qubit: usize, gate: &Matrix2) -> Result<(), QsimError> {
        self.check_qubit(qubit)?;
        let stride = 1usize << qubit;
        for base in 0..self.amplitudes.len() {
            if base & stride != 0 {
                continue;
            }
            let (a0, a1) = (self.amplitudes[base], self.amplitudes[base | stride]);
            self.amplitudes[base] = gate[0][0] * a0 + gate[0][1] * a1;
            self.amplitudes[base | stride] = gate[1][0] * a0 + gate[1][1] * a1;
        }
        Ok(())
    }

    pub fn apply_rx(&mut self, qubit: usize, angle: f64) -> Result<(), QsimError> {
        self.apply_single(qubit, &gates::rx(angle))
    }

    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<(), QsimError> {
        self.apply_single(qubit, &gates::ry(angle))
    }

    pub fn apply_rz(&mut self, qubit: usize, angle: f64) -> Result<(), QsimError> {
        self.apply_single(qubit, &gates::rz(angle))
    }

    /// `RX(theta_x)`, then `RY(theta_y)`, then `RZ(theta_z)` on one qubit.
    pub fn apply_rot(
        &mut self,
        qubit: usize,
        theta_x: f64,
        theta_y: f64,
        theta_z: f64,
    ) -> Result<(), QsimError> {
        self.apply_rx(qubit, theta_x)?;
        self.apply_ry(qubit, theta_y)?;
        self.apply_rz(qubit, theta_z)
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<(), QsimError> {
        self.apply_single(qubit, &gates::hadamard())
    }

    /// Flips `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), QsimError> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(QsimError::SameQubit(control));
        }
        let (cbit, tbit) = (1usize << control, 1usize << target);
        for i in 0..self.amplitudes.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amplitudes.swap(i, i | tbit);
            }
        }
        Ok(())
    }
}

fn qubits_for_len(len: usize) -> Result<usize, QsimError> {
    if len < 2 || !len.is_power_of_two() {
        return Err(QsimError::Length(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(QsimError::QubitCount(n));
    }
    Ok(n)
}

/// Point on the Bloch sphere: colatitude `θ ∈ [0, π]`, longitude `γ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    colatitude: f64,
    longitude: f64,
}

impl BlochAngles {
    pub fn new(colatitude: f64, longitude: f64) -> Result<Self, QsimError> {
        if !(0.0..=PI).contains(&colatitude) || !(0.0..2.0 * PI).contains(&longitude) {
            return Err(QsimError::BlochAngles {
                colatitude,
                longitude,
            });
        }
        Ok(Self {
            colatitude,
            longitude,
        })
    }

    pub fn colatitude(&self) -> f64 {
        self.colatitude
    }

    pub fn longitude(&self) -> f64 {
        self.longitude
    }
}

/// `cos(θ/2)|0⟩ + e^{iγ} sin(θ/2)|1⟩`.
pub fn bloch_state(angles: BlochAngles) -> StateVector {
    let half = angles.colatitude / 2.0;
    let phase = Complex64::from_polar(1.0, angles.longitude);
    StateVector {
        num_qubits: 1,
        amplitudes: vec![Complex64::new(libm::cos(half), 0.0), phase * libm::sin(half)],
    }
}

/// Computational basis encoding `|index⟩`.
pub fn basis_encode(index: usize, num_qubits: usize) -> Result<StateVector, QsimError> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(QsimError::QubitCount(num_qubits));
    }
    let dim = 1usize << num_qubits;
    if index >= dim {
        return Err(QsimError::BasisIndex { index, num_qubits });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[index] = Complex64::new(1.0, 0.0);
    Ok(StateVector {
        num_qubits,
        amplitudes,
    })
}

/// Amplitude encoding: entry `i` becomes the amplitude of `|i⟩`.
///
/// The input must have power-of-two length and unit Euclidean norm within 1e-6;
/// it is copied verbatim, not renormalised.
pub fn amplitude_encode(values: &[f64]) -> Result<StateVector, QsimError> {
    let num_qubits = qubits_for_len(values.len())?;
    let norm = libm::sqrt(values.iter().map(|v| v * v).sum::<f64>());
    if !((norm - 1.0).abs() <= 1e-6) {
        return Err(QsimError::NotNormalized(norm));
    }
    Ok(StateVector {
        num_qubits,
        amplitudes: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
    })
}
