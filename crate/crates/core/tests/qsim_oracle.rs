mod support;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use qdefense_core::qsim::{self, bloch_state, BlochAngles, Complex64, StateVector};
use qdefense_core::seeded_rng;
use rand::Rng;
use support::{expand_cnot, expand_single, matmul, matvec, max_abs_diff};

fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let raw: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

#[derive(Debug, Clone, Copy)]
enum Gate {
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Rot(usize, f64, f64, f64),
    H(usize),
    Cnot(usize, usize),
}

fn apply(state: &mut StateVector, gate: Gate) {
    match gate {
        Gate::Rx(q, t) => state.apply_rx(q, t),
        Gate::Ry(q, t) => state.apply_ry(q, t),
        Gate::Rz(q, t) => state.apply_rz(q, t),
        Gate::Rot(q, x, y, z) => state.apply_rot(q, x, y, z),
        Gate::H(q) => state.apply_hadamard(q),
        Gate::Cnot(c, t) => state.apply_cnot(c, t),
    }
    .unwrap();
}

fn oracle(gate: Gate, n: usize) -> support::Matrix {
    match gate {
        Gate::Rx(q, t) => expand_single(&support::rx(t), q, n),
        Gate::Ry(q, t) => expand_single(&support::ry(t), q, n),
        Gate::Rz(q, t) => expand_single(&support::rz(t), q, n),
        Gate::Rot(q, x, y, z) => {
            let m = matmul(&support::rz(z), &matmul(&support::ry(y), &support::rx(x)));
            expand_single(&m, q, n)
        }
        Gate::H(q) => expand_single(&support::hadamard(), q, n),
        Gate::Cnot(c, t) => expand_cnot(c, t, n),
    }
}

fn random_gate(n: usize, rng: &mut impl Rng) -> Gate {
    let q = rng.random_range(0..n);
    let kind = rng.random_range(0..6);
    let a: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>() * 4.0 * PI - 2.0 * PI);
    match kind {
        0 => Gate::Rx(q, a[0]),
        1 => Gate::Ry(q, a[0]),
        2 => Gate::Rz(q, a[0]),
        3 => Gate::Rot(q, a[0], a[1], a[2]),
        4 => Gate::H(q),
        _ if n == 1 => Gate::H(q),
        _ => {
            let t = (q + rng.random_range(1..n)) % n;
            Gate::Cnot(q, t)
        }
    }
}

#[test]
fn every_gate_matches_its_kronecker_matrix() {
    let mut rng = seeded_rng(2024);
    for trial in 0..200 {
        let n = 1 + trial % 4;
        let state = random_state(n, &mut rng);
        for _ in 0..6 {
            let gate = random_gate(n, &mut rng);
            let mut out = state.clone();
            apply(&mut out, gate);
            let expected = matvec(&oracle(gate, n), state.amplitudes());
            assert!(
                max_abs_diff(out.amplitudes(), &expected) <= 1e-10,
                "{gate:?} on {n} qubits"
            );
            assert!((out.norm_sqr() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn rot_equals_chained_primitives() {
    let (x, y, z) = (PI / 3.0, PI / 5.0, PI / 7.0);
    let mut a = StateVector::zero(1).unwrap();
    a.apply_rot(0, x, y, z).unwrap();
    let mut b = StateVector::zero(1).unwrap();
    b.apply_rx(0, x).unwrap();
    b.apply_ry(0, y).unwrap();
    b.apply_rz(0, z).unwrap();
    assert!(max_abs_diff(a.amplitudes(), b.amplitudes()) <= 1e-12);
    let m = matmul(&support::rz(z), &matmul(&support::ry(y), &support::rx(x)));
    let expected = [m[0][0], m[1][0]];
    assert!(max_abs_diff(a.amplitudes(), &expected) <= 1e-12);
}

#[test]
fn full_turns_negate_amplitudes() {
    let mut rng = seeded_rng(5);
    let state = random_state(2, &mut rng);
    for axis in 0..3 {
        let mut s = state.clone();
        match axis {
            0 => s.apply_rx(1, TAU),
            1 => s.apply_ry(1, TAU),
            _ => s.apply_rz(1, TAU),
        }
        .unwrap();
        let negated: Vec<_> = state.amplitudes().iter().map(|a| -a).collect();
        assert!(max_abs_diff(s.amplitudes(), &negated) <= 1e-12);
        for (p, q) in s.probabilities().iter().zip(state.probabilities()) {
            assert!((p - q).abs() <= 1e-15);
        }
    }
}

#[test]
fn measurement_frequencies_follow_probabilities() {
    let mut state = StateVector::zero(2).unwrap();
    state.apply_hadamard(0).unwrap();
    state.apply_hadamard(1).unwrap();
    let mut rng = seeded_rng(99);
    let mut counts = [0usize; 4];
    let draws = 100_000;
    for _ in 0..draws {
        counts[state.measure(&mut rng)] += 1;
    }
    for c in counts {
        assert!((c as f64 / draws as f64 - 0.25).abs() < 0.01);
    }

    let mut half = StateVector::zero(1).unwrap();
    half.apply_rx(0, FRAC_PI_2).unwrap();
    let run = |seed| {
        let mut rng = seeded_rng(seed);
        (0..64).map(|_| half.measure(&mut rng)).collect::<Vec<_>>()
    };
    assert_eq!(run(3), run(3));
}

fn state_strategy(max_qubits: usize) -> impl Strategy<Value = StateVector> {
    (1..=max_qubits).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("nonzero", |raw| {
            let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| {
                StateVector::from_amplitudes(
                    raw.iter()
                        .map(|&(a, b)| Complex64::new(a / norm, b / norm))
                        .collect(),
                )
                .unwrap()
            })
        })
    })
}

proptest! {
    #[test]
    fn gates_preserve_norm(state in state_strategy(5), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let mut s = state;
        for _ in 0..20 {
            let gate = random_gate(s.num_qubits(), &mut rng);
            apply(&mut s, gate);
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn hadamard_and_cnot_are_involutions(state in state_strategy(4), q in 0usize..4) {
        let n = state.num_qubits();
        let q = q % n;
        let mut s = state.clone();
        s.apply_hadamard(q).unwrap();
        s.apply_hadamard(q).unwrap();
        prop_assert!(max_abs_diff(s.amplitudes(), state.amplitudes()) <= 1e-12);
        if n > 1 {
            let t = (q + 1) % n;
            let mut s = state.clone();
            s.apply_cnot(q, t).unwrap();
            s.apply_cnot(q, t).unwrap();
            prop_assert_eq!(s.amplitudes(), state.amplitudes());
        }
    }

    #[test]
    fn bloch_colatitude_sets_ground_probability(theta in 0.0..=PI, phase in 0.0..TAU) {
        let p = bloch_state(BlochAngles::new(theta, phase).unwrap()).probabilities();
        prop_assert!((p[0] - (theta / 2.0).cos().powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn amplitude_encoding_copies_entries(raw in prop::collection::vec(-1.0f64..1.0, 8)) {
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let unit: Vec<f64> = raw.iter().map(|v| v / norm).collect();
        let s = qsim::amplitude_encode(&unit).unwrap();
        prop_assert_eq!(s.num_qubits(), 3);
        for (a, v) in s.amplitudes().iter().zip(&unit) {
            prop_assert_eq!(a.re, *v);
            prop_assert_eq!(a.im, 0.0);
        }
    }
}
