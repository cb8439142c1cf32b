use thiserror::Error;

use crate::linalg::SingularMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "ground coherence decay γ₂ = {gamma_coh:e} rad/s is below the population decay \
         γ₁ = {gamma_pop:e} rad/s; the relaxation model needs γ₂ ≥ γ₁"
    )]
    CoherenceFasterThanPopulation { gamma_pop: f64, gamma_coh: f64 },

    #[error("degenerate steady state: generator has more than one null vector ({0})")]
    DegenerateSteadyState(SingularMatrix),

    #[error("steady-state solver failed: relative residual {residual:e} exceeds {tolerance:e}")]
    SolverFailure { residual: f64, tolerance: f64 },

    #[error("density matrix violates {check}: {value:e} (tolerance {tolerance:e})")]
    InvalidState {
        check: &'static str,
        value: f64,
        tolerance: f64,
    },

    #[error(
        "time integration unstable at dt = {dt:e} s (trace drift {trace_drift:e}, \
         largest element {max_element:e}); use a smaller dt"
    )]
    Unstable {
        dt: f64,
        trace_drift: f64,
        max_element: f64,
    },

    #[error("propagation failed at z = {z:e} m: {source}")]
    Propagation {
        z: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("linear-response system is singular: {0}")]
    SingularResponse(SingularMatrix),

    #[error("sweep failed at {variable} = {value:e}: {source}")]
    AtGridPoint {
        variable: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("slope fit needs at least {needed} points inside ±{window} Hz, found {found}")]
    InsufficientPoints {
        needed: usize,
        found: usize,
        window: f64,
    },

    #[error(
        "pulse spectrum reaches the edge of the sampled response band \
         (|ã| at Nyquist = {edge:e} of peak); increase n_samples"
    )]
    BandwidthExceedsGrid { edge: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn at_z(self, z: f64) -> Self {
        Error::Propagation {
            z,
            source: Box::new(self),
        }
    }
}
