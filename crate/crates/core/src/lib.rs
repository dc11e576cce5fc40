// SPDX-License-Identifier: Apache-2.0

//! Single-qubit gates on an open quantum system with drive-induced
//! decoherence.
//!
//! A resonantly driven qubit coupled to a fluctuating environment loses
//! coherence through two channels: ordinary thermal relaxation (T1, T2)
//! and a drive-induced channel whose rate grows as omega1^2 tau_c, so
//! that driving harder is not always better. This crate builds the 4x4
//! Liouville-space generator for that dynamics, propagates constant,
//! composite, and shaped pulses through it, scores gates against their
//! ideal unitaries with the Uhlmann fidelity, and finds the drive
//! amplitude omega1_opt = sqrt(R_eff / tau_c) balancing the two losses.
//!
//! Start from [`SystemParams`] and [`pseudopure_state`], compile a gate
//! with [`compile_gate`], propagate it with [`propagate_sequence`], and
//! score it with [`uhlmann_fidelity`]; or jump straight to
//! [`optimize_drive`] and [`contour_grid`] for the fidelity landscape.

pub mod error;
pub mod expm;
pub mod fidelity;
pub mod gates;
pub mod liouvillian;
pub mod optimizer;
pub mod propagator;
pub mod types;

pub use error::{Error, Result};
pub use expm::expm;
pub use fidelity::{
    decay_factor, hadamard_fidelity_closed_form, uhlmann_fidelity, FidelityValue,
};
pub use gates::{
    apply_ideal, compile_gate, hadamard_dissipative, ideal_unitary, r3_block_decay, GateKind,
    GateSpec,
};
pub use liouvillian::{
    build_gamma, coherent_generator, dissipator_split, relaxation_generator, DidModel,
    DriveParams,
};
pub use optimizer::{
    beta_param, contour_grid, grid_fidelity, multiqubit_feasibility, omega1_opt, optimize_drive,
    ContourGrid, Feasibility, OptimizeMethod, OptimumResult,
};
pub use propagator::{
    propagate_segment, propagate_segment_vector, propagate_sequence, propagate_sequence_vector,
    propagate_shaped, propagate_shaped_vector, SampledEnvelope, ShapedOutcome, ShapedPulse,
    StepControl, MIN_SHAPED_STEPS, SHAPED_CONVERGENCE_TOL,
};
pub use types::{
    devectorize, pseudopure_state, vectorize, DensityMatrix, LiouvilleVector, PulseSegment,
    PulseSequence, Superoperator, SystemParams, POSITIVITY_TOL, STATE_TOL, VECTOR_TOL,
};
