use rayon::prelude::*;

use crate::diagnostics::SolveDiagnostics;
use crate::error::{Error, Result};
use crate::model::{AtomParams, Curve, DriveConfig};
use crate::propagation::{transmission_with, PropagationOptions};
use crate::scalar::{angular, Real};

/// The drive parameter varied along a sweep grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    /// Relative phase φ, grid in radians.
    Phase,
    /// Zeeman splitting δ_B, grid in Hz.
    BField,
    /// Probe detuning δ, grid in Hz.
    ProbeDetuning,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Phase => "phi",
            SweepVariable::BField => "delta_b",
            SweepVariable::ProbeDetuning => "delta_probe",
        }
    }

    /// Column label including the unit.
    pub fn label(self) -> &'static str {
        match self {
            SweepVariable::Phase => "phi_rad",
            SweepVariable::BField => "delta_b_hz",
            SweepVariable::ProbeDetuning => "delta_probe_hz",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec<T> {
    variable: SweepVariable,
    grid: Vec<T>,
    base_drive: DriveConfig<T>,
    params: AtomParams<T>,
    options: PropagationOptions,
}

impl<T: Real> SweepSpec<T> {
    /// `grid` must be non-empty, finite and strictly increasing.
    pub fn new(
        variable: SweepVariable,
        grid: Vec<T>,
        params: AtomParams<T>,
        base_drive: DriveConfig<T>,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidGrid("sweep grid is empty".into()));
        }
        if grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("sweep grid has non-finite values".into()));
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(format!(
                "sweep grid not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self {
            variable,
            grid,
            base_drive,
            params,
            options: PropagationOptions::default(),
        })
    }

    /// `n` points `lo + k (hi − lo)/n`, i.e. `[lo, hi)`; suits periodic
    /// variables.
    pub fn periodic_grid(lo: T, hi: T, n: usize) -> Vec<T> {
        let step = (hi - lo) / T::from_count(n.max(1));
        (0..n).map(|k| lo + T::from_count(k) * step).collect()
    }

    /// `n ≥ 2` points spanning `[lo, hi]` inclusive.
    pub fn closed_grid(lo: T, hi: T, n: usize) -> Vec<T> {
        if n < 2 {
            return vec![lo];
        }
        let step = (hi - lo) / T::from_count(n - 1);
        (0..n)
            .map(|k| if k + 1 == n { hi } else { lo + T::from_count(k) * step })
            .collect()
    }

    pub fn with_options(mut self, options: PropagationOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_steps(mut self, n_steps: usize) -> Self {
        self.options.n_steps = n_steps;
        self
    }

    pub fn variable(&self) -> SweepVariable {
        self.variable
    }
    pub fn grid(&self) -> &[T] {
        &self.grid
    }
    pub fn base_drive(&self) -> &DriveConfig<T> {
        &self.base_drive
    }
    pub fn params(&self) -> &AtomParams<T> {
        &self.params
    }
    pub fn options(&self) -> PropagationOptions {
        self.options
    }

    /// Drive at grid value `x`.
    pub fn drive_at(&self, x: T) -> DriveConfig<T> {
        match self.variable {
            SweepVariable::Phase => self.base_drive.with_phi(x),
            SweepVariable::BField => self.base_drive.with_delta_b(angular(x)),
            SweepVariable::ProbeDetuning => self.base_drive.with_delta_probe(angular(x)),
        }
    }

    /// Evaluates `f` at every grid point in parallel, in grid order. Errors
    /// name the grid value they occurred at.
    pub(crate) fn evaluate<R: Send>(
        &self,
        f: impl Fn(&DriveConfig<T>) -> Result<R> + Sync,
    ) -> Result<Vec<R>> {
        self.grid
            .par_iter()
            .map(|&x| {
                f(&self.drive_at(x)).map_err(|e| Error::AtGridPoint {
                    variable: self.variable.name(),
                    value: x.to_f64().unwrap_or(f64::NAN),
                    source: Box::new(e),
                })
            })
            .collect()
    }

    fn expect(&self, v: SweepVariable) -> Result<()> {
        if self.variable == v {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "expected a {} sweep, got {}",
                v.name(),
                self.variable.name()
            )))
        }
    }
}

/// Transmission curve plus the worst-case solver figures over all points.
#[derive(Clone, Debug)]
pub struct SweepResult<T> {
    pub curve: Curve<T>,
    pub diagnostics: SolveDiagnostics<T>,
}

/// Probe transmission at every grid point of any sweep variable.
pub fn sweep<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    let opts = spec.options;
    let runs = spec.evaluate(|d| transmission_with(&spec.params, d, opts))?;
    let mut diagnostics = SolveDiagnostics::default();
    let mut points = Vec::with_capacity(runs.len());
    for (x, r) in spec.grid.iter().zip(&runs) {
        diagnostics = diagnostics.merge(&r.diagnostics);
        points.push((*x, r.probe_power_out));
    }
    Ok(SweepResult {
        curve: Curve::new(spec.variable.label(), "transmission", points)?,
        diagnostics,
    })
}

/// Transmission vs relative phase φ.
pub fn sweep_phase<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    spec.expect(SweepVariable::Phase)?;
    sweep(spec)
}

/// Transmission vs Zeeman splitting δ_B.
pub fn sweep_bfield<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    spec.expect(SweepVariable::BField)?;
    sweep(spec)
}
