//! Simulator for a four-level double-lambda atom driven by two phase-coherent
//! optical fields and a static magnetic field.
//!
//! The crate computes
//!
//! * atomic steady states of the Lindblad master equation ([`liouvillian`]),
//! * propagation of the two circular field amplitudes through an optically
//!   thick cell and the resulting probe transmission ([`propagation`]),
//! * phase and magnetic-field sweeps, weak-probe susceptibility spectra,
//!   slow/fast-light classification and pulse delays ([`spectroscopy`]).
//!
//! All numerics are generic over the [`Real`] scalar (`f32` or `f64`). The
//! `*64` aliases below fix the double-precision types used by the CLI.
//! Frequencies are angular (rad/s) internally; `from_hz` constructors take
//! ordinary frequencies.

// `!(a > b)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod liouvillian;
pub mod model;
pub mod presets;
pub mod propagation;
pub mod scalar;
pub mod spectroscopy;

pub use diagnostics::SolveDiagnostics;
pub use error::{Error, Result};
pub use liouvillian::{
    build_hamiltonian_circular, build_liouvillian, solve_steady_state, steady_state,
    substitution_image, time_evolve, Liouvillian, Relaxation, SidebandSolver, SteadyState,
};
pub use model::{
    basis_change_state, to_circular, to_linear, zeeman_shift, AtomParams, Basis, BasisChange,
    Curve, DensityMatrix, DriveConfig, FieldPair,
};
pub use presets::Preset;
pub use propagation::{
    calibrate_kappa, probe_power, propagate, propagate_with, sideband_transfer, transmission,
    PropagationOptions, PropagationResult, SidebandTransfer,
};
pub use scalar::{angular, ordinary, Real, C};
pub use spectroscopy::{
    group_velocity_class, pulse_response, refractive_spectrum, susceptibility_spectrum,
    sweep_bfield, sweep_phase, weak_probe_response, GroupVelocity, PulseResponse, PulseSpec,
    SpectrumResult, SweepResult, SweepSpec, SweepVariable, VelocityClass, WeakProbeResponse,
};

pub type AtomParams64 = AtomParams<f64>;
pub type DriveConfig64 = DriveConfig<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type FieldPair64 = FieldPair<f64>;
pub type Liouvillian64 = Liouvillian<f64>;
pub type Curve64 = Curve<f64>;
pub type PropagationResult64 = PropagationResult<f64>;

pub type AtomParams32 = AtomParams<f32>;
pub type DriveConfig32 = DriveConfig<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
