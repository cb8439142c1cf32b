//! Aggregated solver diagnostics carried alongside every computed result.

use crate::liouvillian::SteadyState;
use crate::scalar::Real;

/// Worst-case figures over every steady state solved for one result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveDiagnostics<T> {
    pub steady_states: usize,
    pub max_relative_residual: T,
    pub max_trace_error: T,
    pub max_hermiticity_error: T,
    pub min_eigenvalue: T,
    /// Largest relative change seen when the z grid was doubled.
    pub max_refinement_delta: T,
}

impl<T: Real> Default for SolveDiagnostics<T> {
    fn default() -> Self {
        Self {
            steady_states: 0,
            max_relative_residual: T::zero(),
            max_trace_error: T::zero(),
            max_hermiticity_error: T::zero(),
            min_eigenvalue: T::infinity(),
            max_refinement_delta: T::zero(),
        }
    }
}

impl<T: Real> SolveDiagnostics<T> {
    pub fn record(&mut self, ss: &SteadyState<T>) {
        self.steady_states += 1;
        self.max_relative_residual = self.max_relative_residual.max(ss.relative_residual);
        self.max_trace_error = self.max_trace_error.max(ss.check.trace_error);
        self.max_hermiticity_error = self.max_hermiticity_error.max(ss.check.hermiticity_error);
        self.min_eigenvalue = self.min_eigenvalue.min(ss.check.min_eigenvalue);
    }

    pub fn merge(mut self, other: &Self) -> Self {
        self.steady_states += other.steady_states;
        self.max_relative_residual = self.max_relative_residual.max(other.max_relative_residual);
        self.max_trace_error = self.max_trace_error.max(other.max_trace_error);
        self.max_hermiticity_error = self.max_hermiticity_error.max(other.max_hermiticity_error);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self.max_refinement_delta = self.max_refinement_delta.max(other.max_refinement_delta);
        self
    }

    /// Whether every recorded state met the density-matrix tolerances.
    pub fn states_valid(&self) -> bool {
        self.max_trace_error <= T::state_tol(1e-10)
            && self.max_hermiticity_error <= T::state_tol(1e-12)
            && (self.steady_states == 0 || self.min_eigenvalue >= -T::state_tol(1e-9))
    }
}
