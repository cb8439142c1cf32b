use num_traits::Zero;
use rayon::prelude::*;
use rustfft::{FftNum, FftPlanner};

use crate::diagnostics::SolveDiagnostics;
use crate::error::{Error, Result};
use crate::model::{AtomParams, Curve, DriveConfig};
use crate::propagation::{sideband_transfer, SidebandTransfer, DEFAULT_STEPS};
use crate::scalar::{Real, C};

/// Spectral components below this fraction of the peak are not filtered.
const SPECTRAL_FLOOR: f64 = 1e-13;
/// Largest spectral amplitude tolerated in the outer quarter of the band.
const EDGE_TOL: f64 = 1e-8;

/// Gaussian probe pulse `Ω_p(t) = peak · e^{iφ} · exp(−4 ln2 t²/fwhm²) · e^{−iδ₀t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec<T> {
    fwhm: T,
    peak_omega_p: T,
    carrier_detuning: T,
    time_window: T,
    n_samples: usize,
    z_steps: usize,
}

impl<T: Real> PulseSpec<T> {
    /// * `fwhm`, `time_window` in seconds, window at least 8 FWHM
    /// * `peak_omega_p`, `carrier_detuning` in rad/s
    /// * `n_samples` a power of two, at least 256
    pub fn new(fwhm: T, peak_omega_p: T, carrier_detuning: T, time_window: T, n_samples: usize) -> Result<Self> {
        if !(fwhm > T::zero()) || !fwhm.is_finite() {
            return Err(Error::param("fwhm", format!("must be > 0, got {fwhm}")));
        }
        if !(time_window >= T::lit(8.0) * fwhm) || !time_window.is_finite() {
            return Err(Error::param(
                "time_window",
                format!("must be at least 8 × fwhm = {}, got {time_window}", T::lit(8.0) * fwhm),
            ));
        }
        if !(peak_omega_p >= T::zero()) || !peak_omega_p.is_finite() {
            return Err(Error::param("peak_omega_p", "must be finite and ≥ 0"));
        }
        if !carrier_detuning.is_finite() {
            return Err(Error::param("carrier_detuning", "must be finite"));
        }
        if n_samples < 256 || !n_samples.is_power_of_two() {
            return Err(Error::param(
                "n_samples",
                format!("must be a power of two ≥ 256, got {n_samples}"),
            ));
        }
        Ok(Self {
            fwhm,
            peak_omega_p,
            carrier_detuning,
            time_window,
            n_samples,
            z_steps: DEFAULT_STEPS,
        })
    }

    /// z grid used for each transfer-function evaluation.
    pub fn with_z_steps(mut self, z_steps: usize) -> Self {
        self.z_steps = z_steps;
        self
    }

    pub fn fwhm(&self) -> T {
        self.fwhm
    }
    pub fn peak_omega_p(&self) -> T {
        self.peak_omega_p
    }
    pub fn carrier_detuning(&self) -> T {
        self.carrier_detuning
    }
    pub fn time_window(&self) -> T {
        self.time_window
    }
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }
    pub fn z_steps(&self) -> usize {
        self.z_steps
    }

    pub fn dt(&self) -> T {
        self.time_window / T::from_count(self.n_samples)
    }

    /// Sample times `(k − n/2)·dt`; the input peak sits at index `n/2`.
    pub fn times(&self) -> Vec<T> {
        let dt = self.dt();
        let half = T::from_count(self.n_samples / 2);
        (0..self.n_samples).map(|k| (T::from_count(k) - half) * dt).collect()
    }

    /// Real Gaussian envelope, unit peak.
    pub fn envelope(&self, t: T) -> T {
        let x = t / self.fwhm;
        (-T::lit(4.0) * T::LN_2() * x * x).exp()
    }
}

#[derive(Clone, Debug)]
pub struct PulseResponse<T> {
    /// `|Ω_p(t)|² / peak²` at the cell input.
    pub input: Curve<T>,
    /// `|Ω_p(t)|² / peak²` at the cell output.
    pub output: Curve<T>,
    /// (output peak time − input peak time) / FWHM; negative for advance.
    pub fractional_delay: T,
    /// Output peak power over input peak power.
    pub peak_gain: T,
    /// Number of detunings at which the transfer function was evaluated.
    pub evaluated_bins: usize,
    pub diagnostics: SolveDiagnostics<T>,
}

/// Sub-sample peak position by a parabola through the largest sample and its
/// neighbours.
fn peak_time<T: Real>(times: &[T], y: &[T]) -> T {
    let (k, _) = y
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |(bk, bv), (k, v)| if *v > bv { (k, *v) } else { (bk, bv) });
    if k == 0 || k + 1 == y.len() {
        return times[k];
    }
    let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
    let denom = a - T::lit(2.0) * b + c;
    let shift = if denom < T::zero() { T::lit(0.5) * (a - c) / denom } else { T::zero() };
    times[k] + shift * (times[1] - times[0])
}

/// Linear filtering of a Gaussian probe pulse by the cell.
///
/// The input envelope is Fourier decomposed; the component at detuning δ
/// leaves the cell as `direct(δ) p(δ) + conjugate(δ) conj(p(−δ))` with the
/// transfer pair from [`sideband_transfer`]. The phase φ of `drive` sets the
/// pulse phase; its `omega_p` and `delta_probe` are replaced by the pulse's.
pub fn pulse_response<T: Real + FftNum>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    pulse: &PulseSpec<T>,
) -> Result<PulseResponse<T>> {
    if pulse.peak_omega_p * T::lit(3.0) > drive.omega_c() {
        log::warn!(
            "pulse peak Rabi frequency {} rad/s is not small compared with the control {} rad/s",
            pulse.peak_omega_p,
            drive.omega_c()
        );
    }
    let n = pulse.n_samples;
    let times = pulse.times();
    let carrier = pulse.carrier_detuning;
    let phase = C::from_polar(T::one(), drive.phi());
    // unit-peak complex envelope; the response is linear so the peak only
    // enters the weak-probe warning
    let mut spec: Vec<C<T>> = times
        .iter()
        .map(|&t| phase * C::from_polar(pulse.envelope(t), -carrier * t))
        .collect();
    let input_power: Vec<T> = spec.iter().map(|z| z.norm_sqr()).collect();

    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_forward(n).process(&mut spec);

    let peak = spec.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let edge = spec[3 * n / 8..=5 * n / 8].iter().fold(T::zero(), |m, z| m.max(z.norm())) / peak;
    if edge > T::lit(EDGE_TOL) {
        return Err(Error::BandwidthExceedsGrid {
            edge: edge.to_f64().unwrap_or(f64::NAN),
        });
    }

    // bin k varies as e^{+iω_k t}, which is detuning δ = −ω_k
    let dw = T::TAU() / pulse.time_window;
    let omega = |k: usize| {
        if k <= n / 2 {
            T::from_count(k) * dw
        } else {
            -(T::from_count(n - k) * dw)
        }
    };
    let mirror = |k: usize| (n - k) % n;
    let floor = T::lit(SPECTRAL_FLOOR) * peak;
    let active: Vec<usize> = (0..n)
        .filter(|&k| spec[k].norm() > floor || spec[mirror(k)].norm() > floor)
        .collect();
    let transfers: Vec<SidebandTransfer<T>> = active
        .par_iter()
        .map(|&k| sideband_transfer(params, drive, -omega(k), pulse.z_steps))
        .collect::<Result<_>>()?;

    let mut diagnostics = SolveDiagnostics::default();
    let mut out = vec![C::zero(); n];
    for (&k, h) in active.iter().zip(&transfers) {
        diagnostics = diagnostics.merge(&h.diagnostics);
        out[k] = h.direct * spec[k] + h.conjugate * spec[mirror(k)].conj();
    }
    planner.plan_fft_inverse(n).process(&mut out);
    let inv_n = T::one() / T::from_count(n);
    let output_power: Vec<T> = out.iter().map(|z| (*z * inv_n).norm_sqr()).collect();

    let t_in = peak_time(&times, &input_power);
    let t_out = peak_time(&times, &output_power);
    let in_max = input_power.iter().fold(T::zero(), |m, v| m.max(*v));
    let out_max = output_power.iter().fold(T::zero(), |m, v| m.max(*v));
    Ok(PulseResponse {
        input: Curve::new("t_s", "input_power_rel", times.iter().copied().zip(input_power).collect())?,
        output: Curve::new("t_s", "output_power_rel", times.iter().copied().zip(output_power).collect())?,
        fractional_delay: (t_out - t_in) / pulse.fwhm,
        peak_gain: out_max / in_max,
        evaluated_bins: active.len(),
        diagnostics,
    })
}

/// Group delay `d arg H/dδ` at δ = 0 of the phase-locked transfer
/// `H = direct + conjugate · e^{−2iφ}`, by central differences with step
/// `h` (rad/s).
pub fn stationary_phase_delay<T: Real>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    h: T,
    z_steps: usize,
) -> Result<T> {
    let plus = sideband_transfer(params, drive, h, z_steps)?.for_phase(drive.phi());
    let minus = sideband_transfer(params, drive, -h, z_steps)?.for_phase(drive.phi());
    Ok((plus / minus).arg() / (T::lit(2.0) * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    #[test]
    fn spec_validation() {
        assert!(PulseSpec::new(5e-3, 1.0, 0.0, 40e-3, 256).is_ok());
        assert!(PulseSpec::new(5e-3, 1.0, 0.0, 39e-3, 256).is_err());
        assert!(PulseSpec::new(5e-3, 1.0, 0.0, 40e-3, 128).is_err());
        assert!(PulseSpec::new(5e-3, 1.0, 0.0, 40e-3, 300).is_err());
        assert!(PulseSpec::new(0.0, 1.0, 0.0, 40e-3, 256).is_err());
    }

    #[test]
    fn times_centre_the_peak() {
        let p = PulseSpec::<f64>::new(5e-3, 1.0, 0.0, 40e-3, 256).unwrap();
        let t = p.times();
        assert_eq!(t[128], 0.0);
        assert_eq!(p.envelope(0.0), 1.0);
        assert!((p.envelope(2.5e-3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parabolic_peak_is_exact_for_parabola() {
        let t: Vec<f64> = (0..9).map(|k| k as f64).collect();
        let y: Vec<f64> = t.iter().map(|x| 5.0 - (x - 3.3) * (x - 3.3)).collect();
        assert!((peak_time(&t, &y) - 3.3).abs() < 1e-12);
    }

    #[test]
    fn no_medium_is_identity() {
        let p = Preset::Fig4Warm.atom_params::<f64>().with_optical_depth(0.0).unwrap();
        let d = Preset::Fig4Warm.drive(-91.0, 0.0).unwrap();
        let pulse = PulseSpec::new(5e-3, d.omega_p(), 0.0, 40e-3, 256).unwrap().with_z_steps(16);
        let r = pulse_response(&p, &d, &pulse).unwrap();
        assert!(r.fractional_delay.abs() < 1e-12);
        for ((_, a), (_, b)) in r.input.points().iter().zip(r.output.points()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn too_short_pulse_is_rejected() {
        let p = Preset::Fig4Warm.atom_params::<f64>();
        let d = Preset::Fig4Warm.drive(0.0, 0.0).unwrap();
        // 4 samples per FWHM is too coarse for the Gaussian tail
        let pulse = PulseSpec::new(0.5e-3, 1.0, 0.0, 32e-3, 256).unwrap();
        assert!(matches!(
            pulse_response(&p, &d, &pulse),
            Err(Error::BandwidthExceedsGrid { .. })
        ));
    }
}
