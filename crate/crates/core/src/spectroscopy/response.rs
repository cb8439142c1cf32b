use num_traits::Zero;

use crate::diagnostics::SolveDiagnostics;
use crate::error::{Error, Result};
use crate::liouvillian::{probe_operator, Relaxation, SidebandSolver, solve_steady_state};
use crate::linalg::Mat4;
use crate::model::{level, rotate_ground, to_circular, AtomParams, Curve, DriveConfig};
use crate::scalar::{Real, C};
use crate::spectroscopy::sweep::{SweepSpec, SweepVariable};

pub const DEFAULT_SLOPE_WINDOW_HZ: f64 = 10.0;
/// Second-order to first-order ratio above which the linearisation is
/// reported as doubtful.
const TRUNCATION_WARN: f64 = 1e-2;

/// Single-atom weak-probe susceptibility at one detuning.
///
/// `χ = −(ρ⁺_{1X} + ρ⁺_{2Y})` per unit probe amplitude, so `Re χ` follows the
/// refractive index and `Im χ > 0` is absorption. A phase-locked probe with a
/// real envelope drives both the `P` and `P†` channels; the result for phase φ
/// is `direct + conjugate · e^{−2iφ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakProbeResponse<T> {
    pub direct: C<T>,
    pub conjugate: C<T>,
    /// `χ` at the drive's phase.
    pub chi: C<T>,
    /// Estimated relative size of the neglected second-order term.
    pub truncation_estimate: T,
    pub warnings: Vec<String>,
    /// Figures of the zeroth-order steady state.
    pub diagnostics: SolveDiagnostics<T>,
}

/// First-order response of the probe coherence at `drive.delta_probe()`.
///
/// The zeroth-order state has the control and the Zeeman coupling only.
pub fn weak_probe_response<T: Real>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
) -> Result<WeakProbeResponse<T>> {
    let relax = Relaxation::new(params)?;
    let r = weak_probe_with(&relax, drive)?;
    for w in &r.warnings {
        log::warn!("{w}");
    }
    Ok(r)
}

fn weak_probe_with<T: Real>(relax: &Relaxation<T>, drive: &DriveConfig<T>) -> Result<WeakProbeResponse<T>> {
    let mut warnings = Vec::new();
    if drive.omega_p() * T::lit(3.0) > drive.omega_c() {
        warnings.push(format!(
            "probe Rabi frequency {} rad/s is not small compared with the control {} rad/s",
            drive.omega_p(),
            drive.omega_c()
        ));
    }
    let zeroth = to_circular(drive.control_amplitude(), C::zero());
    let liou = relax.liouvillian(drive, &zeroth);
    let ss = solve_steady_state(&liou)?;
    let mut diagnostics = SolveDiagnostics::default();
    diagnostics.record(&ss);
    let rho0 = ss.state;
    let solver = SidebandSolver::new(&liou, &rho0, drive.delta_probe())?;
    let p = probe_operator::<T>();
    let r_direct = solver.respond(&p);
    let r_conj = solver.respond(&p.adjoint());
    let coherence = |r: &Mat4<T>| -> C<T> {
        let lin = rotate_ground(r);
        -(lin[(level::E1, level::X)] + lin[(level::E2, level::Y)])
    };
    let direct = coherence(&r_direct);
    let conjugate = coherence(&r_conj);
    let chi = direct + conjugate * C::from_polar(T::one(), -T::lit(2.0) * drive.phi());

    let first = r_direct.max_abs().max(r_conj.max_abs()) * drive.omega_p();
    let truncation_estimate = first / rho0.matrix().max_abs();
    if truncation_estimate > T::lit(TRUNCATION_WARN) {
        warnings.push(format!(
            "first-sideband truncation estimate {truncation_estimate:e} exceeds {TRUNCATION_WARN}"
        ));
    }
    Ok(WeakProbeResponse {
        direct,
        conjugate,
        chi,
        truncation_estimate,
        warnings,
        diagnostics,
    })
}

fn expect_detuning<T: Real>(spec: &SweepSpec<T>) -> Result<()> {
    if spec.variable() == SweepVariable::ProbeDetuning {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "spectrum needs a delta_probe sweep, got {}",
            spec.variable().name()
        )))
    }
}

/// Complex χ over a probe-detuning grid.
#[derive(Clone, Debug)]
pub struct SpectrumResult<T> {
    pub curve: Curve<T, C<T>>,
    /// Largest first-sideband truncation estimate over the grid.
    pub max_truncation_estimate: T,
    /// Grid points that raised a weak-probe warning.
    pub warned_points: usize,
    pub diagnostics: SolveDiagnostics<T>,
}

/// Complex χ over a probe-detuning grid (Hz).
pub fn susceptibility_spectrum<T: Real>(spec: &SweepSpec<T>) -> Result<SpectrumResult<T>> {
    expect_detuning(spec)?;
    let relax = Relaxation::new(spec.params())?;
    let responses = spec.evaluate(|d| weak_probe_with(&relax, d))?;
    let diagnostics = responses
        .iter()
        .fold(SolveDiagnostics::default(), |acc, r| acc.merge(&r.diagnostics));
    let max_truncation_estimate = responses
        .iter()
        .fold(T::zero(), |m, r| m.max(r.truncation_estimate));
    let warned: Vec<_> = responses.iter().filter(|r| !r.warnings.is_empty()).collect();
    if let Some(first) = warned.first() {
        log::warn!(
            "{} of {} spectrum points raised weak-probe warnings, first: {}",
            warned.len(),
            responses.len(),
            first.warnings[0]
        );
    }
    let warned_points = warned.len();
    let curve = Curve::new(
        spec.variable().label(),
        "chi_arb",
        spec.grid().iter().copied().zip(responses.into_iter().map(|r| r.chi)).collect(),
    )?;
    Ok(SpectrumResult {
        curve,
        max_truncation_estimate,
        warned_points,
        diagnostics,
    })
}

/// `Re χ` over a probe-detuning grid (Hz).
pub fn refractive_spectrum<T: Real>(spec: &SweepSpec<T>) -> Result<Curve<T>> {
    Ok(susceptibility_spectrum(spec)?.curve.map("re_chi_arb", |z| z.re))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VelocityClass {
    Slow,
    Fast,
    Flat,
}

impl VelocityClass {
    pub fn name(self) -> &'static str {
        match self {
            VelocityClass::Slow => "slow",
            VelocityClass::Fast => "fast",
            VelocityClass::Flat => "flat",
        }
    }
}

/// Least-squares slope of a dispersion curve near δ = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupVelocity<T> {
    /// d(Re χ)/dδ per Hz.
    pub slope: T,
    pub std_error: T,
    pub class: VelocityClass,
    pub points: usize,
}

/// Fits a line to the points with `|δ| ≤ window_hz` and classifies the sign
/// of its slope. Positive dispersion slope means slow light.
pub fn group_velocity_class<T: Real>(spectrum: &Curve<T>, window_hz: T) -> Result<GroupVelocity<T>> {
    const NEEDED: usize = 5;
    if !(window_hz > T::zero()) {
        return Err(Error::param("window", "must be > 0"));
    }
    let edge = window_hz * (T::one() + T::lit(1e-9));
    let pts: Vec<(T, T)> = spectrum
        .points()
        .iter()
        .copied()
        .filter(|(x, _)| x.abs() <= edge)
        .collect();
    if pts.len() < NEEDED {
        return Err(Error::InsufficientPoints {
            needed: NEEDED,
            found: pts.len(),
            window: window_hz.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = T::from_count(pts.len());
    let mx = pts.iter().fold(T::zero(), |s, p| s + p.0) / n;
    let my = pts.iter().fold(T::zero(), |s, p| s + p.1) / n;
    let sxx = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    let sxy = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = pts.iter().fold(T::zero(), |s, p| {
        let r = p.1 - intercept - slope * p.0;
        s + r * r
    });
    let std_error = (sse / (n - T::lit(2.0)) / sxx).sqrt();
    let peak = pts.iter().fold(T::zero(), |m, p| m.max(p.1.abs()));
    let tol = T::lit(1e-3) * peak / window_hz;
    let class = if slope > tol {
        VelocityClass::Slow
    } else if slope < -tol {
        VelocityClass::Fast
    } else {
        VelocityClass::Flat
    };
    Ok(GroupVelocity {
        slope,
        std_error,
        class,
        points: pts.len(),
    })
}
