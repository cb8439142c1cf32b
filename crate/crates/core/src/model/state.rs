use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, Mat4};
use crate::scalar::{re, Real, C};

/// Level indices. Excited states come first in both bases.
pub mod level {
    /// Upper excited state |1⟩ (shifted by Δ).
    pub const E1: usize = 0;
    /// Lower excited state |2⟩ (resonant with the fields).
    pub const E2: usize = 1;
    /// Circular ground state |3⟩ (m = +).
    pub const G3: usize = 2;
    /// Circular ground state |4⟩ (m = −).
    pub const G4: usize = 3;
    /// Linear ground state |X⟩ = (|3⟩ + |4⟩)/√2.
    pub const X: usize = 2;
    /// Linear ground state |Y⟩ = (|3⟩ − |4⟩)/√2.
    pub const Y: usize = 3;
}

/// Which ground-state basis a matrix is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// {|1⟩, |2⟩, |3⟩, |4⟩}
    Circular,
    /// {|1⟩, |2⟩, |X⟩, |Y⟩}
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChange {
    CircularToLinear,
    LinearToCircular,
}

impl BasisChange {
    pub fn target(self) -> Basis {
        match self {
            BasisChange::CircularToLinear => Basis::Linear,
            BasisChange::LinearToCircular => Basis::Circular,
        }
    }
}

/// Unitary mixing the ground block. It is real, symmetric and its own
/// inverse, so it maps circular → linear and back.
pub(crate) fn ground_rotation<T: Real>() -> Mat4<T> {
    let s = T::FRAC_1_SQRT_2();
    let mut u = Mat4::identity();
    u[(2, 2)] = re(s);
    u[(2, 3)] = re(s);
    u[(3, 2)] = re(s);
    u[(3, 3)] = re(-s);
    u
}

/// Expresses any operator (Hermitian or not) in the other ground basis.
pub(crate) fn rotate_ground<T: Real>(m: &Mat4<T>) -> Mat4<T> {
    let u = ground_rotation::<T>();
    u * *m * u
}

/// Summary of the three validity checks on a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateCheck<T> {
    pub trace_error: T,
    pub hermiticity_error: T,
    pub min_eigenvalue: T,
}

/// 4×4 density matrix tagged with its basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    rho: Mat4<T>,
    basis: Basis,
}

impl<T: Real> DensityMatrix<T> {
    pub const TRACE_TOL: f64 = 1e-10;
    pub const HERMITICITY_TOL: f64 = 1e-12;
    pub const EIGENVALUE_FLOOR: f64 = -1e-9;

    /// Wraps `rho` after checking trace, Hermiticity and positivity.
    pub fn from_matrix(rho: Mat4<T>, basis: Basis) -> Result<Self> {
        let state = Self { rho, basis };
        state.validate()?;
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(rho: Mat4<T>, basis: Basis) -> Self {
        Self { rho, basis }
    }

    /// Pure state `|k⟩⟨k|`.
    pub fn pure(k: usize, basis: Basis) -> Self {
        Self {
            rho: Mat4::unit(k, k, C::new(T::one(), T::zero())),
            basis,
        }
    }

    /// Unpolarised ground state `diag(0, 0, ½, ½)`, the same in both bases.
    pub fn unpolarized_ground(basis: Basis) -> Self {
        let h = re(T::lit(0.5));
        let z = re(T::zero());
        Self {
            rho: Mat4::from_diagonal([z, z, h, h]),
            basis,
        }
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.rho
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.rho[(i, j)]
    }

    pub fn populations(&self) -> [T; 4] {
        std::array::from_fn(|i| self.rho[(i, i)].re)
    }

    pub fn check(&self) -> StateCheck<T> {
        let eig = hermitian_eigenvalues(&self.rho);
        StateCheck {
            trace_error: (self.rho.trace() - C::new(T::one(), T::zero())).norm(),
            hermiticity_error: self.rho.hermiticity_error(),
            min_eigenvalue: eig.first().copied().unwrap_or_else(T::zero),
        }
    }

    pub fn validate(&self) -> Result<StateCheck<T>> {
        if !self.rho.is_finite() {
            return Err(Error::InvalidState {
                check: "finiteness",
                value: f64::NAN,
                tolerance: 0.0,
            });
        }
        let chk = self.check();
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let trace_tol = T::state_tol(Self::TRACE_TOL);
        if !(chk.trace_error <= trace_tol) {
            return Err(Error::InvalidState {
                check: "unit trace",
                value: f(chk.trace_error),
                tolerance: f(trace_tol),
            });
        }
        let herm_tol = T::state_tol(Self::HERMITICITY_TOL);
        if !(chk.hermiticity_error <= herm_tol) {
            return Err(Error::InvalidState {
                check: "Hermiticity",
                value: f(chk.hermiticity_error),
                tolerance: f(herm_tol),
            });
        }
        let floor = -T::state_tol(-Self::EIGENVALUE_FLOOR);
        if !(chk.min_eigenvalue >= floor) {
            return Err(Error::InvalidState {
                check: "positivity",
                value: f(chk.min_eigenvalue),
                tolerance: f(floor),
            });
        }
        Ok(chk)
    }

    /// The same state expressed in `basis`.
    pub fn in_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            *self
        } else {
            Self {
                rho: rotate_ground(&self.rho),
                basis,
            }
        }
    }

    /// `ρ_{1X} + ρ_{2Y}`, the coherence driven by the probe.
    pub fn probe_coherence(&self) -> C<T> {
        let lin = self.in_basis(Basis::Linear);
        lin.rho[(level::E1, level::X)] + lin.rho[(level::E2, level::Y)]
    }
}

/// `ρ′ = U ρ U†` with `U` mixing only the ground block.
pub fn basis_change_state<T: Real>(rho: &DensityMatrix<T>, direction: BasisChange) -> DensityMatrix<T> {
    rho.in_basis(direction.target())
}
