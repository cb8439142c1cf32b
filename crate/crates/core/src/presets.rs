//! Named parameter sets for the cold-atom and warm-vapour regimes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{AtomParams, DriveConfig};
use crate::scalar::Real;

/// Splitting of the two excited states (Hz).
pub const EXCITED_SPLITTING_HZ: f64 = 814.5e6;
/// Cell length (m).
pub const CELL_LENGTH_M: f64 = 0.075;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Cold atoms: Γ = 6 MHz, γ₁ = γ₂ = 10 Hz, OD 0.15.
    Fig3Cold,
    /// Warm vapour: Γ = 500 MHz (Doppler width), γ₁ = 25 Hz, γ₂ = 28 Hz, OD 15.
    Fig4Warm,
}

/// Preset values in the units used at the configuration boundary (Hz, m).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PresetValues {
    pub gamma_e_hz: f64,
    pub gamma_pop_hz: f64,
    pub gamma_coh_hz: f64,
    pub delta_exc_hz: f64,
    pub omega_c_hz: f64,
    pub omega_p_hz: f64,
    pub od: f64,
    pub cell_length_m: f64,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Fig3Cold, Preset::Fig4Warm];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3Cold => "fig3-cold",
            Preset::Fig4Warm => "fig4-warm",
        }
    }

    pub fn values(self) -> PresetValues {
        match self {
            Preset::Fig3Cold => PresetValues {
                gamma_e_hz: 6e6,
                gamma_pop_hz: 10.0,
                gamma_coh_hz: 10.0,
                delta_exc_hz: EXCITED_SPLITTING_HZ,
                omega_c_hz: 20e3,
                omega_p_hz: 5e3,
                od: 0.15,
                cell_length_m: CELL_LENGTH_M,
            },
            Preset::Fig4Warm => PresetValues {
                gamma_e_hz: 500e6,
                gamma_pop_hz: 25.0,
                gamma_coh_hz: 28.0,
                delta_exc_hz: EXCITED_SPLITTING_HZ,
                omega_c_hz: 240e3,
                omega_p_hz: 60e3,
                od: 15.0,
                cell_length_m: CELL_LENGTH_M,
            },
        }
    }

    pub fn atom_params<T: Real>(self) -> AtomParams<T> {
        let v = self.values();
        AtomParams::from_hz(
            T::lit(v.gamma_e_hz),
            T::lit(v.gamma_pop_hz),
            T::lit(v.gamma_coh_hz),
            T::lit(v.delta_exc_hz),
            T::lit(v.od),
            T::lit(v.cell_length_m),
        )
        .expect("preset parameters are valid")
    }

    /// Preset Rabi frequencies with the given splitting (Hz) and phase, probe
    /// on two-photon resonance.
    pub fn drive<T: Real>(self, delta_b_hz: T, phi: T) -> Result<DriveConfig<T>> {
        let v = self.values();
        DriveConfig::from_hz(delta_b_hz, phi, T::lit(v.omega_c_hz), T::lit(v.omega_p_hz), T::zero())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::param("preset", format!("unknown preset {s:?} (expected fig3-cold or fig4-warm)")))
    }
}
