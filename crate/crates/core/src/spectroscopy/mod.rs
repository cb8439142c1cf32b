//! Sweeps, weak-probe spectra, slow/fast-light classification and pulses.

mod pulse;
mod response;
mod sweep;

pub use pulse::{pulse_response, stationary_phase_delay, PulseResponse, PulseSpec};
pub use response::{
    group_velocity_class, refractive_spectrum, susceptibility_spectrum, weak_probe_response,
    GroupVelocity, SpectrumResult, VelocityClass, WeakProbeResponse, DEFAULT_SLOPE_WINDOW_HZ,
};
pub use sweep::{sweep, sweep_bfield, sweep_phase, SweepResult, SweepSpec, SweepVariable};
