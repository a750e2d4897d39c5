//! Collision models of open qubit dynamics.
//!
//! A system qubit undergoes a sequence of unitary collisions with fresh,
//! identically prepared environment qubits. This crate builds the collision
//! unitaries, simulates them exactly on the two-qubit state, derives the
//! induced single-qubit channel in closed form, interpolates the discrete
//! dynamics by a continuous semigroup and extracts its generator and
//! Lindblad (GKS) coefficients.
//!
//! Conventions used throughout:
//! - qubit states are `ρ = ½I + r·σ` with `|r| ≤ 1/2`;
//! - channels are 4×4 real matrices acting on `(1/2, r_x, r_y, r_z)`;
//! - two-qubit operators are ordered system ⊗ environment.

// Validation is written as `!(x <= bound)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod collisions;
pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod qubit;
pub mod semigroup;

pub use channels::{
    apply, is_completely_positive, power, to_choi, tomography, ChoiMatrix, CpVerdict,
    TransferMatrix,
};
pub use collisions::{
    build_unitary, collide, homogenization_delta, induced_map, simulate_discrete,
    CollisionSpec, DiscreteTrajectory, Interaction,
};
pub use error::{Error, Result};
pub use lindblad::{
    generator_from_lindblad, gks_positivity, integrate_master_equation,
    lindblad_from_generator, GksVerdict, LindbladForm,
};
pub use qubit::{
    bloch_to_density, density_to_bloch, partial_trace, tensor, DensityMatrix, QubitState, Slot,
    TwoQubitState, TwoQubitUnitary,
};
pub use semigroup::{
    align_basis, decoherence_rates, generator_numeric, homogenization_rates,
    instantaneous_generator, DecoherenceRates, DephasingAxis, GeneratorMatrix,
    HomogenizationRates, Rates,
};
