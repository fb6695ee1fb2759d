//! Quantum reinforcement learning toolkit for networked control system defense.
//!
//! The crate is `no_std` (with `alloc`) and contains only the numerical core:
//!
//! * [`mdp`] finite Markov decision processes, value iteration and tabular Q-learning,
//! * [`qsim`] a dense statevector simulator for small registers,
//! * [`vqc`] variational circuits with parameter-shift gradients,
//! * [`qrl`] the trainer that fits a variational circuit to Q-value ratios,
//! * [`scenario`] the two-train world, its adversary and attack models.
//!
//! File formats, experiment drivers and the command line live in the `qdefense` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod mdp;
pub mod qrl;
pub mod qsim;
pub mod scenario;
pub mod vqc;

mod util;

pub use rand_chacha::ChaCha8Rng;

/// Seeded generator used by every stochastic routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
