//! Propagation of the circular field amplitudes through the cell.
//!
//! In the slowly varying amplitude approximation the fields obey
//!
//! ```text
//! ∂Ω₁/∂z = −iκ (ρ₂₃ + ρ₁₃)
//! ∂Ω₂/∂z = −iκ (ρ₂₄ − ρ₁₄)
//! ```
//!
//! with the coherences taken from the local atomic steady state. The sign
//! makes a passive medium absorb for the Hamiltonian sign convention of
//! [`build_hamiltonian_circular`](crate::liouvillian::build_hamiltonian_circular).

use num_traits::{One, Zero};

use crate::diagnostics::SolveDiagnostics;
use crate::error::{Error, Result};
use crate::linalg::{commutator_superop, dissipator_superop, CMatrix, Lu};
use crate::liouvillian::{coupling_operators, solve_steady_state, Relaxation, SidebandSolver};
use crate::model::{level, to_circular, to_linear, AtomParams, DriveConfig, FieldPair};
use crate::scalar::{c, Real, C};

pub const DEFAULT_STEPS: usize = 256;
pub const MIN_STEPS: usize = 16;
/// Relative change under grid doubling above which a warning is logged.
pub const REFINEMENT_TOL: f64 = 1e-6;

/// Coupling constant κ (rad/s per metre).
///
/// Chosen so that a weak resonant field on a bare two-level transition with
/// the full population in the ground state is attenuated to `e^{−OD}` in
/// intensity over the cell: the coherence is `ρ_eg = −2iΩ/Γ`, giving an
/// intensity attenuation rate `4κ/Γ`.
pub fn calibrate_kappa<T: Real>(params: &AtomParams<T>) -> T {
    params.optical_depth() * params.gamma_e() / (T::lit(4.0) * params.cell_length())
}

/// `W_p = (|Ω₁|² + |Ω₂|² − 2|Ω₁||Ω₂| cos θ)/2` and `θ = arg Ω₁ − arg Ω₂`.
///
/// `W_p` equals `|Ω_p|²` of [`to_linear`]; both forms are evaluated and
/// compared in debug builds.
pub fn probe_power<T: Real>(fields: &FieldPair<T>) -> (T, T) {
    let (a1, a2) = (fields.omega1.norm(), fields.omega2.norm());
    let theta = fields.omega1.arg() - fields.omega2.arg();
    let w = (a1 * a1 + a2 * a2 - T::lit(2.0) * a1 * a2 * theta.cos()) * T::lit(0.5);
    debug_assert!({
        let (_, p) = to_linear(fields);
        (w - p.norm_sqr()).abs() <= T::state_tol(1e-12) * (T::one() + fields.total_power())
    });
    (w.max(T::zero()), theta)
}

fn wrap_pm_pi<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut r = x % tau;
    if r > T::PI() {
        r -= tau;
    } else if r <= -T::PI() {
        r += tau;
    }
    r
}

/// Options for [`propagate_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropagationOptions {
    pub n_steps: usize,
    /// Repeat the run on a doubled grid and record the change.
    pub refine: bool,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self {
            n_steps: DEFAULT_STEPS,
            refine: true,
        }
    }
}

/// Field profile through the cell.
#[derive(Clone, Debug)]
pub struct PropagationResult<T> {
    pub z_grid: Vec<T>,
    pub fields_along_z: Vec<FieldPair<T>>,
    /// Output probe power over input probe power (over total input power
    /// when no probe is injected).
    pub probe_power_out: T,
    /// Output control power over input control power.
    pub control_power_out: T,
    /// Relative phase θ of the circular fields at the input and output.
    pub theta_in: T,
    pub theta_out: T,
    pub diagnostics: SolveDiagnostics<T>,
}

impl<T: Real> PropagationResult<T> {
    pub fn input(&self) -> &FieldPair<T> {
        &self.fields_along_z[0]
    }

    pub fn output(&self) -> &FieldPair<T> {
        self.fields_along_z.last().expect("profile is never empty")
    }

    /// ε = θ(L) − θ(0), wrapped to (−π, π].
    pub fn accumulated_phase(&self) -> T {
        wrap_pm_pi(self.theta_out - self.theta_in)
    }

    pub fn refinement_delta(&self) -> T {
        self.diagnostics.max_refinement_delta
    }
}

/// One classical RK4 step for a small complex state vector.
fn rk4_step<T: Real, const K: usize>(
    y: &[C<T>; K],
    z: T,
    h: T,
    f: &mut impl FnMut(T, &[C<T>; K]) -> Result<[C<T>; K]>,
) -> Result<[C<T>; K]> {
    let half = h * T::lit(0.5);
    let axpy = |a: &[C<T>; K], s: T, b: &[C<T>; K]| -> [C<T>; K] {
        std::array::from_fn(|i| a[i] + b[i] * s)
    };
    let k1 = f(z, y)?;
    let k2 = f(z + half, &axpy(y, half, &k1))?;
    let k3 = f(z + half, &axpy(y, half, &k2))?;
    let k4 = f(z + h, &axpy(y, h, &k3))?;
    let w = h / T::lit(6.0);
    Ok(std::array::from_fn(|i| {
        y[i] + (k1[i] + (k2[i] + k3[i]) * T::lit(2.0) + k4[i]) * w
    }))
}

fn z_f64<T: Real>(z: T) -> f64 {
    z.to_f64().unwrap_or(f64::NAN)
}

/// `[ρ₂₃ + ρ₁₃, ρ₂₄ − ρ₁₄]` of a circular-basis matrix: the polarisation
/// radiated into Ω₁ and Ω₂.
fn radiated<T: Real>(rho: &CMatrix<T, 4>) -> [C<T>; 2] {
    [
        rho[(level::E2, level::G3)] + rho[(level::E1, level::G3)],
        rho[(level::E2, level::G4)] - rho[(level::E1, level::G4)],
    ]
}

struct FieldRun<T> {
    z_grid: Vec<T>,
    fields: Vec<FieldPair<T>>,
    diagnostics: SolveDiagnostics<T>,
}

fn integrate_fields<T: Real>(
    relax: &Relaxation<T>,
    drive: &DriveConfig<T>,
    fields_in: &FieldPair<T>,
    n_steps: usize,
) -> Result<FieldRun<T>> {
    let params = relax.params();
    let kappa = calibrate_kappa(params);
    let mik = c(T::zero(), -kappa);
    let h = params.cell_length() / T::from_count(n_steps);
    let mut diagnostics = SolveDiagnostics::default();
    let mut rhs = |z: T, y: &[C<T>; 2]| -> Result<[C<T>; 2]> {
        let local = FieldPair::from_array(*y);
        if !local.is_finite() {
            return Err(Error::param("fields", "non-finite field amplitude").at_z(z_f64(z)));
        }
        let ss = solve_steady_state(&relax.liouvillian(drive, &local)).map_err(|e| e.at_z(z_f64(z)))?;
        diagnostics.record(&ss);
        let p = radiated(ss.state.matrix());
        Ok([p[0] * mik, p[1] * mik])
    };
    let mut z_grid = Vec::with_capacity(n_steps + 1);
    let mut fields = Vec::with_capacity(n_steps + 1);
    let mut y = fields_in.as_array();
    z_grid.push(T::zero());
    fields.push(*fields_in);
    for k in 0..n_steps {
        let z = T::from_count(k) * h;
        y = rk4_step(&y, z, h, &mut rhs)?;
        z_grid.push(T::from_count(k + 1) * h);
        fields.push(FieldPair::from_array(y));
    }
    Ok(FieldRun {
        z_grid,
        fields,
        diagnostics,
    })
}

/// Integrates the field equations from `fields_in` through the cell with the
/// steady state recomputed at every RK4 stage, and checks the result on a
/// doubled grid.
pub fn propagate<T: Real>(
    fields_in: &FieldPair<T>,
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    n_steps: usize,
) -> Result<PropagationResult<T>> {
    propagate_with(
        fields_in,
        params,
        drive,
        PropagationOptions {
            n_steps,
            refine: true,
        },
    )
}

pub fn propagate_with<T: Real>(
    fields_in: &FieldPair<T>,
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    opts: PropagationOptions,
) -> Result<PropagationResult<T>> {
    if opts.n_steps < MIN_STEPS {
        return Err(Error::param(
            "n_steps",
            format!("must be ≥ {MIN_STEPS}, got {}", opts.n_steps),
        ));
    }
    if !fields_in.is_finite() {
        return Err(Error::param("fields_in", "non-finite field amplitude"));
    }
    let relax = Relaxation::new(params)?;
    let run = integrate_fields(&relax, drive, fields_in, opts.n_steps)?;
    let mut diagnostics = run.diagnostics;
    let out = *run.fields.last().expect("grid has n_steps + 1 points");

    if opts.refine {
        let fine = integrate_fields(&relax, drive, fields_in, 2 * opts.n_steps)?;
        let fine_out = *fine.fields.last().expect("grid has 2·n_steps + 1 points");
        let scale = fields_in.total_power().sqrt().max(T::min_positive_value());
        let delta = (fine_out.omega1 - out.omega1)
            .norm()
            .max((fine_out.omega2 - out.omega2).norm())
            / scale;
        diagnostics = diagnostics.merge(&fine.diagnostics);
        diagnostics.max_refinement_delta = delta;
        if delta > T::lit(REFINEMENT_TOL) {
            log::warn!(
                "propagation not converged: doubling {} steps changes the output by {:e} (relative)",
                opts.n_steps,
                delta
            );
        }
    }

    let (p_in, theta_in) = probe_power(fields_in);
    let (p_out, theta_out) = probe_power(&out);
    let (c_in, _) = to_linear(fields_in);
    let (c_out, _) = to_linear(&out);
    let probe_ref = if p_in > T::zero() { p_in } else { fields_in.total_power() };
    let ratio = |num: T, den: T| if den > T::zero() { num / den } else { T::zero() };
    Ok(PropagationResult {
        z_grid: run.z_grid,
        fields_along_z: run.fields,
        probe_power_out: ratio(p_out, probe_ref),
        control_power_out: ratio(c_out.norm_sqr(), c_in.norm_sqr()),
        theta_in,
        theta_out,
        diagnostics,
    })
}

/// Probe transmission `W_p(L) / W_p(0)` for the drive's input fields.
///
/// May exceed one: the driven medium can amplify the probe.
pub fn transmission<T: Real>(params: &AtomParams<T>, drive: &DriveConfig<T>, n_steps: usize) -> Result<T> {
    transmission_with(
        params,
        drive,
        PropagationOptions {
            n_steps,
            refine: true,
        },
    )
    .map(|r| r.probe_power_out)
}

/// Like [`transmission`] but returns the full result.
pub fn transmission_with<T: Real>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    opts: PropagationOptions,
) -> Result<PropagationResult<T>> {
    if !(drive.omega_p() > T::zero()) {
        return Err(Error::param("omega_p", "transmission needs a non-zero input probe"));
    }
    propagate_with(&drive.input_fields(), params, drive, opts)
}

/// Brute-force check of [`calibrate_kappa`]: a weak resonant field of Rabi
/// frequency `omega` propagated through a medium of two-level atoms (ground
/// population one, decay Γ) with the same κ. Returns the intensity
/// transmission.
pub fn bare_transition_transmission<T: Real>(
    params: &AtomParams<T>,
    omega: T,
    n_steps: usize,
) -> Result<T> {
    if n_steps < MIN_STEPS {
        return Err(Error::param("n_steps", format!("must be ≥ {MIN_STEPS}")));
    }
    let one = C::one();
    // levels: 0 = excited, 1 = ground
    let decay: CMatrix<T, 4> =
        dissipator_superop(&CMatrix::<T, 2>::unit(1, 0, one)).scale_real(params.gamma_e());
    let kappa = calibrate_kappa(params);
    let mik = c(T::zero(), -kappa);
    let mut rhs = |z: T, y: &[C<T>; 1]| -> Result<[C<T>; 1]> {
        let coupling = CMatrix::<T, 2>::unit(0, 1, y[0]);
        let h = coupling + coupling.adjoint();
        let coherent: CMatrix<T, 4> = commutator_superop(&h);
        let mut a = coherent + decay;
        // trace row: diagonal entries of vec(ρ) sit at 0 and 3
        for (k, v) in a.row_mut(0).iter_mut().enumerate() {
            *v = if k == 0 || k == 3 { C::one() } else { C::zero() };
        }
        let lu = Lu::factor(&a).map_err(|e| Error::DegenerateSteadyState(e).at_z(z_f64(z)))?;
        let mut b = [C::zero(); 4];
        b[0] = C::one();
        let rho = CMatrix::<T, 2>::unvectorize(&lu.solve(&b));
        Ok([rho[(0, 1)] * mik])
    };
    let h = params.cell_length() / T::from_count(n_steps);
    let mut y = [C::new(omega, T::zero())];
    for k in 0..n_steps {
        y = rk4_step(&y, T::from_count(k) * h, h, &mut rhs)?;
    }
    Ok(y[0].norm_sqr() / (omega * omega))
}

/// First-order transfer of a weak probe sideband at detuning δ through the
/// cell.
///
/// The output probe component at `+δ` is
/// `direct · p(+δ) + conjugate · conj(p(−δ))`, where `p` is the input probe
/// envelope spectrum. For a real envelope with phase φ the effective
/// transfer is `direct + conjugate · e^{−2iφ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SidebandTransfer<T> {
    pub direct: C<T>,
    pub conjugate: C<T>,
    pub diagnostics: SolveDiagnostics<T>,
}

impl<T: Real> SidebandTransfer<T> {
    /// Transfer seen by a real-envelope probe with relative phase `phi`.
    pub fn for_phase(&self, phi: T) -> C<T> {
        self.direct + self.conjugate * C::from_polar(T::one(), -T::lit(2.0) * phi)
    }
}

/// Linear-response propagation of a probe sideband at `detuning` (rad/s).
///
/// The zeroth-order fields are the control alone (probe off); they are
/// propagated alongside, so Faraday rotation of the control is included. The
/// first-order state is four amplitudes: the `+δ` sidebands of Ω₁, Ω₂ and the
/// conjugates of their `−δ` sidebands.
pub fn sideband_transfer<T: Real>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    detuning: T,
    n_steps: usize,
) -> Result<SidebandTransfer<T>> {
    if n_steps < MIN_STEPS {
        return Err(Error::param("n_steps", format!("must be ≥ {MIN_STEPS}")));
    }
    let relax = Relaxation::new(params)?;
    let kappa = calibrate_kappa(params);
    let mik = c(T::zero(), -kappa);
    let pik = c(T::zero(), kappa);
    let (a1, a2) = coupling_operators::<T>();
    let sources = [a1, a2, a1.adjoint(), a2.adjoint()];
    let zeroth_in = to_circular(drive.control_amplitude(), C::zero());
    let s = T::FRAC_1_SQRT_2();
    let zero = C::zero();

    // [Ω₁, Ω₂ | direct column (4) | conjugate column (4)]
    let mut y: [C<T>; 10] = [zero; 10];
    y[0] = zeroth_in.omega1;
    y[1] = zeroth_in.omega2;
    y[2] = C::new(s, T::zero());
    y[3] = C::new(-s, T::zero());
    y[8] = C::new(s, T::zero());
    y[9] = C::new(-s, T::zero());

    let mut diagnostics = SolveDiagnostics::default();
    let mut rhs = |z: T, y: &[C<T>; 10]| -> Result<[C<T>; 10]> {
        let local = FieldPair::new(y[0], y[1]);
        let liou = relax.liouvillian(drive, &local);
        let ss = solve_steady_state(&liou).map_err(|e| e.at_z(z_f64(z)))?;
        diagnostics.record(&ss);
        let solver = SidebandSolver::new(&liou, &ss.state, detuning).map_err(|e| e.at_z(z_f64(z)))?;
        let mut coupling = [[zero; 4]; 4];
        for (k, v) in sources.iter().enumerate() {
            let r = solver.respond(v);
            let fwd = radiated(&r);
            coupling[0][k] = fwd[0] * mik;
            coupling[1][k] = fwd[1] * mik;
            // conj of the −δ sideband: (ρ⁻)_{eg} = conj(ρ⁺_{ge})
            coupling[2][k] = (r[(level::G3, level::E2)] + r[(level::G3, level::E1)]) * pik;
            coupling[3][k] = (r[(level::G4, level::E2)] - r[(level::G4, level::E1)]) * pik;
        }
        let p0 = radiated(ss.state.matrix());
        let mut dy = [zero; 10];
        dy[0] = p0[0] * mik;
        dy[1] = p0[1] * mik;
        for col in 0..2 {
            let base = 2 + 4 * col;
            for i in 0..4 {
                dy[base + i] = (0..4).fold(zero, |acc, k| acc + coupling[i][k] * y[base + k]);
            }
        }
        Ok(dy)
    };
    let h = params.cell_length() / T::from_count(n_steps);
    for k in 0..n_steps {
        y = rk4_step(&y, T::from_count(k) * h, h, &mut rhs)?;
    }
    if y.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::param("sideband", "non-finite transfer").at_z(z_f64(params.cell_length())));
    }
    Ok(SidebandTransfer {
        direct: (y[2] - y[3]) * s,
        conjugate: (y[6] - y[7]) * s,
        diagnostics,
    })
}
