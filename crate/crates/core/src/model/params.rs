use crate::error::{Error, Result};
use crate::model::fields::{to_circular, FieldPair};
use crate::scalar::{angular, Real, C};

/// Fixed properties of the atomic medium. Rates are angular frequencies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomParams<T> {
    gamma_e: T,
    gamma_pop: T,
    gamma_coh: T,
    delta_exc: T,
    optical_depth: T,
    cell_length: T,
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<T> {
    if v.is_finite() && v > T::zero() {
        Ok(v)
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {v}")))
    }
}

fn finite<T: Real>(name: &'static str, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(name, format!("must be finite, got {v}")))
    }
}

impl<T: Real> AtomParams<T> {
    /// * `gamma_e` – decay rate Γ of both excited states
    /// * `gamma_pop` – ground population-difference decay γ₁ (circular basis)
    /// * `gamma_coh` – ground coherence decay γ₂ (circular basis)
    /// * `delta_exc` – splitting Δ of the upper excited state
    /// * `optical_depth` – resonant intensity OD of the bare transition
    /// * `cell_length` – medium length in metres
    pub fn new(
        gamma_e: T,
        gamma_pop: T,
        gamma_coh: T,
        delta_exc: T,
        optical_depth: T,
        cell_length: T,
    ) -> Result<Self> {
        let p = Self {
            gamma_e: positive("gamma_e", gamma_e)?,
            gamma_pop: positive("gamma_pop", gamma_pop)?,
            gamma_coh: positive("gamma_coh", gamma_coh)?,
            delta_exc: finite("delta_exc", delta_exc)?,
            optical_depth: if optical_depth.is_finite() && optical_depth >= T::zero() {
                optical_depth
            } else {
                return Err(Error::param(
                    "optical_depth",
                    format!("must be finite and ≥ 0, got {optical_depth}"),
                ));
            },
            cell_length: positive("cell_length", cell_length)?,
        };
        let ratio = T::lit(1e-2);
        if p.gamma_pop > ratio * p.gamma_e || p.gamma_coh > ratio * p.gamma_e {
            log::warn!(
                "ground decay rates ({}, {}) are not small compared with Γ = {}",
                p.gamma_pop,
                p.gamma_coh,
                p.gamma_e
            );
        }
        Ok(p)
    }

    /// Same as [`AtomParams::new`] with every rate given as an ordinary
    /// frequency in Hz.
    pub fn from_hz(
        gamma_e_hz: T,
        gamma_pop_hz: T,
        gamma_coh_hz: T,
        delta_exc_hz: T,
        optical_depth: T,
        cell_length: T,
    ) -> Result<Self> {
        Self::new(
            angular(gamma_e_hz),
            angular(gamma_pop_hz),
            angular(gamma_coh_hz),
            angular(delta_exc_hz),
            optical_depth,
            cell_length,
        )
    }

    pub fn gamma_e(&self) -> T {
        self.gamma_e
    }
    pub fn gamma_pop(&self) -> T {
        self.gamma_pop
    }
    pub fn gamma_coh(&self) -> T {
        self.gamma_coh
    }
    pub fn delta_exc(&self) -> T {
        self.delta_exc
    }
    pub fn optical_depth(&self) -> T {
        self.optical_depth
    }
    pub fn cell_length(&self) -> T {
        self.cell_length
    }

    pub fn with_optical_depth(self, optical_depth: T) -> Result<Self> {
        Self::new(
            self.gamma_e,
            self.gamma_pop,
            self.gamma_coh,
            self.delta_exc,
            optical_depth,
            self.cell_length,
        )
    }

    pub fn with_delta_exc(self, delta_exc: T) -> Result<Self> {
        Self::new(
            self.gamma_e,
            self.gamma_pop,
            self.gamma_coh,
            delta_exc,
            self.optical_depth,
            self.cell_length,
        )
    }
}

/// Per-run drive settings. Frequencies are angular.
///
/// The relative phase is carried on the probe: `Ω_p = |Ω_p|e^{iφ}` with the
/// control real and positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveConfig<T> {
    delta_b: T,
    phi: T,
    omega_c: T,
    omega_p: T,
    delta_probe: T,
}

/// Reduces an angle to `[0, 2π)`.
pub(crate) fn wrap_phase<T: Real>(phi: T) -> T {
    let tau = T::TAU();
    let mut r = phi % tau;
    if r < T::zero() {
        r += tau;
    }
    if r >= tau {
        r = T::zero();
    }
    r
}

impl<T: Real> DriveConfig<T> {
    /// * `delta_b` – signed Zeeman splitting `2πδ_B`
    /// * `phi` – probe phase relative to the control, reduced to `[0, 2π)`
    /// * `omega_c`, `omega_p` – input Rabi magnitudes (≥ 0)
    /// * `delta_probe` – probe one-photon detuning δ
    pub fn new(delta_b: T, phi: T, omega_c: T, omega_p: T, delta_probe: T) -> Result<Self> {
        let nonneg = |name, v: T| {
            if v.is_finite() && v >= T::zero() {
                Ok(v)
            } else {
                Err(Error::param(name, format!("must be finite and ≥ 0, got {v}")))
            }
        };
        Ok(Self {
            delta_b: finite("delta_b", delta_b)?,
            phi: wrap_phase(finite("phi", phi)?),
            omega_c: nonneg("omega_c", omega_c)?,
            omega_p: nonneg("omega_p", omega_p)?,
            delta_probe: finite("delta_probe", delta_probe)?,
        })
    }

    /// Frequencies in Hz, phase in radians.
    pub fn from_hz(
        delta_b_hz: T,
        phi: T,
        omega_c_hz: T,
        omega_p_hz: T,
        delta_probe_hz: T,
    ) -> Result<Self> {
        Self::new(
            angular(delta_b_hz),
            phi,
            angular(omega_c_hz),
            angular(omega_p_hz),
            angular(delta_probe_hz),
        )
    }

    pub fn delta_b(&self) -> T {
        self.delta_b
    }
    pub fn phi(&self) -> T {
        self.phi
    }
    pub fn omega_c(&self) -> T {
        self.omega_c
    }
    pub fn omega_p(&self) -> T {
        self.omega_p
    }
    pub fn delta_probe(&self) -> T {
        self.delta_probe
    }

    pub fn with_phi(mut self, phi: T) -> Self {
        self.phi = wrap_phase(phi);
        self
    }

    pub fn with_delta_b(mut self, delta_b: T) -> Self {
        self.delta_b = delta_b;
        self
    }

    pub fn with_delta_probe(mut self, delta_probe: T) -> Self {
        self.delta_probe = delta_probe;
        self
    }

    pub fn with_omega_p(self, omega_p: T) -> Result<Self> {
        Self::new(self.delta_b, self.phi, self.omega_c, omega_p, self.delta_probe)
    }

    pub fn with_omega_c(self, omega_c: T) -> Result<Self> {
        Self::new(self.delta_b, self.phi, omega_c, self.omega_p, self.delta_probe)
    }

    /// Complex control amplitude (real, non-negative).
    pub fn control_amplitude(&self) -> C<T> {
        C::new(self.omega_c, T::zero())
    }

    /// Complex probe amplitude `|Ω_p|e^{iφ}`.
    pub fn probe_amplitude(&self) -> C<T> {
        C::from_polar(self.omega_p, self.phi)
    }

    /// Circular amplitudes at the cell input.
    pub fn input_fields(&self) -> FieldPair<T> {
        to_circular(self.control_amplitude(), self.probe_amplitude())
    }
}
