//! Master-equation generator of the double-lambda atom and its solvers.
//!
//! The generator acts on the column-stacked density matrix in the circular
//! basis, `vec(ρ)[i + 4j] = ρ_ij`, so that `d vec(ρ)/dt = G vec(ρ)`.
//!
//! Relaxation model (all Lindblad terms, so `G` is trace preserving and
//! completely positive):
//!
//! * each excited state decays at Γ, half into |3⟩ and half into |4⟩;
//! * the ground block relaxes to the unpolarised mixture at γ₁, which also
//!   adds γ₁/2 to every optical coherence;
//! * `ρ₃₄` is additionally dephased at γ₂ − γ₁, giving a total coherence decay γ₂.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{commutator_superop, dissipator_superop, Lu, Mat16, Mat4};
use crate::model::{level, AtomParams, Basis, DensityMatrix, DriveConfig, FieldPair, StateCheck};
use crate::scalar::{c, re, Real, C};
use crate::model::rotate_ground;

/// Raising part of the field coupling: `H_int = Ω₁ A₁ + Ω₂ A₂ + h.c.` with
/// `A₁ = |2⟩⟨3| + |1⟩⟨3|` and `A₂ = |2⟩⟨4| − |1⟩⟨4|`.
pub fn coupling_operators<T: Real>() -> (Mat4<T>, Mat4<T>) {
    let one = C::one();
    let a1 = Mat4::unit(level::E2, level::G3, one) + Mat4::unit(level::E1, level::G3, one);
    let a2 = Mat4::unit(level::E2, level::G4, one) - Mat4::unit(level::E1, level::G4, one);
    (a1, a2)
}

/// Probe raising operator `|1⟩⟨X| + |2⟩⟨Y|` written in the circular basis.
pub fn probe_operator<T: Real>() -> Mat4<T> {
    let one = C::one();
    let lin = Mat4::unit(level::E1, level::X, one) + Mat4::unit(level::E2, level::Y, one);
    rotate_ground(&lin)
}

/// Circular-basis Hamiltonian (angular units):
///
/// `H = (δ_B/2)(|3⟩⟨3| − |4⟩⟨4|) + Δ|1⟩⟨1| + Ω₁(|2⟩⟨3| + |1⟩⟨3|) + Ω₂(|2⟩⟨4| − |1⟩⟨4|) + h.c.`
///
/// The probe detuning is not part of this Hamiltonian; detuned probes are
/// treated by the sideband solver.
pub fn build_hamiltonian_circular<T: Real>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    fields: &FieldPair<T>,
) -> Mat4<T> {
    let half_b = drive.delta_b() * T::lit(0.5);
    let mut h = Mat4::from_diagonal([re(params.delta_exc()), C::zero(), re(half_b), re(-half_b)]);
    let (a1, a2) = coupling_operators::<T>();
    let raising = a1.scale(fields.omega1) + a2.scale(fields.omega2);
    h += raising + raising.adjoint();
    h
}

/// Field-independent relaxation superoperator for a given medium.
///
/// Building it is the expensive part of assembling a generator, so callers
/// that solve many drives for the same medium should keep one around.
#[derive(Clone, Debug)]
pub struct Relaxation<T> {
    params: AtomParams<T>,
    superop: Mat16<T>,
}

impl<T: Real> Relaxation<T> {
    pub fn new(params: &AtomParams<T>) -> Result<Self> {
        let (g1, g2) = (params.gamma_pop(), params.gamma_coh());
        if g2 < g1 {
            return Err(Error::CoherenceFasterThanPopulation {
                gamma_pop: g1.to_f64().unwrap_or(f64::NAN),
                gamma_coh: g2.to_f64().unwrap_or(f64::NAN),
            });
        }
        let one = C::one();
        let half = T::lit(0.5);
        let mut superop = Mat16::zeros();
        for e in [level::E1, level::E2] {
            for g in [level::G3, level::G4] {
                let d: Mat16<T> = dissipator_superop(&Mat4::unit(g, e, one));
                superop += d.scale_real(params.gamma_e() * half);
            }
        }
        for a in [level::G3, level::G4] {
            for b in [level::G3, level::G4] {
                let d: Mat16<T> = dissipator_superop(&Mat4::unit(a, b, one));
                superop += d.scale_real(g1 * half);
            }
        }
        if g2 > g1 {
            let sz = Mat4::unit(level::G3, level::G3, one) - Mat4::unit(level::G4, level::G4, one);
            let d: Mat16<T> = dissipator_superop(&sz);
            superop += d.scale_real((g2 - g1) * half);
        }
        Ok(Self {
            params: *params,
            superop,
        })
    }

    pub fn params(&self) -> &AtomParams<T> {
        &self.params
    }

    /// Full generator for one drive and local field pair.
    pub fn liouvillian(&self, drive: &DriveConfig<T>, fields: &FieldPair<T>) -> Liouvillian<T> {
        let h = build_hamiltonian_circular(&self.params, drive, fields);
        let coherent: Mat16<T> = commutator_superop(&h);
        Liouvillian {
            generator: coherent + self.superop,
            params: self.params,
            drive: *drive,
            fields: *fields,
        }
    }
}

/// Master-equation generator together with the inputs it was built from.
#[derive(Clone, Debug)]
pub struct Liouvillian<T> {
    generator: Mat16<T>,
    params: AtomParams<T>,
    drive: DriveConfig<T>,
    fields: FieldPair<T>,
}

impl<T: Real> Liouvillian<T> {
    /// Wraps an arbitrary generator. Intended for tests and custom models.
    pub fn from_parts(
        generator: Mat16<T>,
        params: AtomParams<T>,
        drive: DriveConfig<T>,
        fields: FieldPair<T>,
    ) -> Self {
        Self {
            generator,
            params,
            drive,
            fields,
        }
    }

    pub fn generator(&self) -> &Mat16<T> {
        &self.generator
    }
    pub fn params(&self) -> &AtomParams<T> {
        &self.params
    }
    pub fn drive(&self) -> &DriveConfig<T> {
        &self.drive
    }
    pub fn fields(&self) -> &FieldPair<T> {
        &self.fields
    }

    /// `dρ/dt` for a circular-basis matrix.
    pub fn apply(&self, rho: &Mat4<T>) -> Mat4<T> {
        Mat4::unvectorize(&self.generator.matvec(&rho.vectorize()))
    }

    /// Largest entry of `vec(I)ᵀ G`; zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> T {
        (0..16)
            .map(|col| {
                TRACE_ROWS
                    .iter()
                    .fold(C::<T>::zero(), |s, &r| s + self.generator[(r, col)])
                    .norm()
            })
            .fold(T::zero(), T::max)
    }
}

/// Positions of the diagonal elements in `vec(ρ)`.
const TRACE_ROWS: [usize; 4] = [0, 5, 10, 15];

/// Builds the generator `−i[H, ·] + D`.
///
/// Fails when γ₂ < γ₁, which the relaxation model cannot represent.
pub fn build_liouvillian<T: Real>(
    params: &AtomParams<T>,
    drive: &DriveConfig<T>,
    fields: &FieldPair<T>,
) -> Result<Liouvillian<T>> {
    Ok(Relaxation::new(params)?.liouvillian(drive, fields))
}

/// Replaces the first population equation by `Σ ρ_ii = 0`-row weights.
fn with_trace_row<T: Real>(mut m: Mat16<T>) -> Mat16<T> {
    let row = m.row_mut(0);
    for (k, z) in row.iter_mut().enumerate() {
        *z = if TRACE_ROWS.contains(&k) { C::one() } else { C::zero() };
    }
    m
}

/// Steady state plus the relative residual `‖G ρ‖ / (‖G‖ ‖ρ‖)` it was accepted with.
#[derive(Clone, Copy, Debug)]
pub struct SteadyState<T> {
    pub state: DensityMatrix<T>,
    pub relative_residual: T,
    pub check: StateCheck<T>,
}

/// Solves `G vec(ρ) = 0`, `tr ρ = 1` by dense LU on the trace-replaced system.
pub fn solve_steady_state<T: Real>(liou: &Liouvillian<T>) -> Result<SteadyState<T>> {
    let g = liou.generator();
    let lu = Lu::factor(&with_trace_row(*g)).map_err(Error::DegenerateSteadyState)?;
    let mut b = [C::zero(); 16];
    b[0] = C::one();
    let x = lu.solve(&b);
    let rho = Mat4::unvectorize(&x).hermitian_part();

    let resid = g.matvec(&rho.vectorize());
    let resid_norm = resid.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let scale = g.inf_norm() * rho.max_abs();
    let relative = if scale > T::zero() { resid_norm / scale } else { T::zero() };
    let tol = T::solver_tol();
    if !(relative <= tol) {
        return Err(Error::SolverFailure {
            residual: relative.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let state = DensityMatrix::from_matrix_unchecked(rho, Basis::Circular);
    let check = state.validate()?;
    Ok(SteadyState {
        state,
        relative_residual: relative,
        check,
    })
}

/// Unique unit-trace null vector of the generator (circular basis).
pub fn steady_state<T: Real>(liou: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    solve_steady_state(liou).map(|s| s.state)
}

/// Integrates `dρ/dt = G ρ` with classical fixed-step RK4 up to `t_final`.
///
/// For a constant generator one RK4 step is the matrix polynomial
/// `S = I + hG + (hG)²/2 + (hG)³/6 + (hG)⁴/24`; the `N = ⌈t_final/dt⌉` steps
/// (with `h = t_final/N`) are applied as `S^N` by repeated squaring.
pub fn time_evolve<T: Real>(
    rho0: &DensityMatrix<T>,
    liou: &Liouvillian<T>,
    t_final: T,
    dt: T,
) -> Result<DensityMatrix<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::param("dt", format!("must be > 0, got {dt}")));
    }
    if !(t_final >= T::zero()) || !t_final.is_finite() {
        return Err(Error::param("t_final", format!("must be ≥ 0, got {t_final}")));
    }
    if t_final == T::zero() {
        return Ok(*rho0);
    }
    let steps = (t_final / dt).ceil().to_u64().unwrap_or(u64::MAX).max(1);
    let h = t_final / T::lit(steps as f64);
    let step = rk4_step_matrix(liou.generator(), h);

    let start = rho0.in_basis(Basis::Circular);
    let mut v = start.matrix().vectorize::<16>();
    let mut power = step;
    let mut n = steps;
    while n > 0 {
        if n & 1 == 1 {
            v = power.matvec(&v);
        }
        n >>= 1;
        if n > 0 {
            power = power * power;
        }
    }
    let rho = Mat4::unvectorize(&v);
    let drift = (rho.trace() - start.matrix().trace()).norm();
    let max_el = rho.max_abs();
    let bound = T::lit(1e-6);
    if !rho.is_finite() || !(drift <= bound) || !(max_el <= T::one() + bound) {
        return Err(Error::Unstable {
            dt: h.to_f64().unwrap_or(f64::NAN),
            trace_drift: drift.to_f64().unwrap_or(f64::NAN),
            max_element: max_el.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho, Basis::Circular).in_basis(rho0.basis()))
}

fn rk4_step_matrix<T: Real>(g: &Mat16<T>, h: T) -> Mat16<T> {
    let hg = g.scale_real(h);
    let id = Mat16::identity();
    // Horner form of Σ_{k≤4} (hG)^k / k!
    let mut s = id + hg.scale_real(T::lit(0.25));
    s = id + (hg * s).scale_real(T::one() / T::lit(3.0));
    s = id + (hg * s).scale_real(T::lit(0.5));
    id + hg * s
}

/// `(δ_B, φ) → (−δ_B, φ + π)`: the drive whose probe observables coincide
/// with those of `drive`.
pub fn substitution_image<T: Real>(drive: &DriveConfig<T>) -> DriveConfig<T> {
    drive
        .with_delta_b(-drive.delta_b())
        .with_phi(drive.phi() + T::PI())
}

/// First-order response to a perturbation oscillating as `e^{−iδt}`.
///
/// For `H = H₀ + V e^{−iδt} + V† e^{iδt}` the `e^{−iδt}` component of the
/// state solves `(G₀ + iδ) ρ⁺ = i[V, ρ₀]`. At δ = 0 the operator is singular
/// along the trace direction, so one population equation is replaced by
/// `tr ρ⁺ = 0`; for δ ≠ 0 this is an identity of the original system.
#[derive(Clone, Debug)]
pub struct SidebandSolver<T> {
    lu: Lu<T, 16>,
    rho0: Mat4<T>,
}

impl<T: Real> SidebandSolver<T> {
    pub fn new(liou: &Liouvillian<T>, rho0: &DensityMatrix<T>, detuning: T) -> Result<Self> {
        let mut a = *liou.generator();
        for k in 0..16 {
            a[(k, k)] += c(T::zero(), detuning);
        }
        let lu = Lu::factor(&with_trace_row(a)).map_err(Error::SingularResponse)?;
        Ok(Self {
            lu,
            rho0: *rho0.in_basis(Basis::Circular).matrix(),
        })
    }

    /// `ρ⁺` (circular basis) for the raising-type perturbation `v`.
    pub fn respond(&self, v: &Mat4<T>) -> Mat4<T> {
        let src = v.commutator(&self.rho0).scale(c(T::zero(), T::one()));
        let mut b = src.vectorize::<16>();
        b[0] = C::zero();
        Mat4::unvectorize(&self.lu.solve(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{to_circular, BasisChange};
    use crate::scalar::angular;
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn cold() -> AtomParams<f64> {
        AtomParams::from_hz(6e6, 10.0, 10.0, 814.5e6, 0.15, 0.075).unwrap()
    }

    fn fig3_drive(delta_b_hz: f64, phi: f64) -> DriveConfig<f64> {
        DriveConfig::from_hz(delta_b_hz, phi, 20e3, 5e3, 0.0).unwrap()
    }

    #[test]
    fn hamiltonian_vanishes_without_drive_or_splitting() {
        let p = cold().with_delta_exc(0.0).unwrap();
        let d = DriveConfig::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let h = build_hamiltonian_circular(&p, &d, &FieldPair::zero());
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_diagonal_case() {
        let p = cold();
        let d = DriveConfig::from_hz(80.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let h = build_hamiltonian_circular(&p, &d, &FieldPair::zero());
        let expect = [p.delta_exc(), 0.0, std::f64::consts::PI * 80.0, -std::f64::consts::PI * 80.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((h[(i, i)] - Complex64::new(*e, 0.0)).norm() < 1e-9 * (1.0 + e.abs()));
        }
        assert!((h - Mat4::from_diagonal(h.diagonal())).max_abs() == 0.0);
    }

    #[test]
    fn hamiltonian_linear_basis_couplings() {
        // control couples X→2 and Y→1, probe couples X→1 and Y→2
        let p = cold();
        let d = DriveConfig::new(0.0, 0.7, 3.0, 2.0, 0.0).unwrap();
        let h = build_hamiltonian_circular(&p, &d, &d.input_fields());
        let lin = rotate_ground(&h);
        let (oc, op) = (d.control_amplitude(), d.probe_amplitude());
        assert!((lin[(level::E2, level::X)] - oc).norm() < 1e-14);
        assert!((lin[(level::E1, level::Y)] - oc).norm() < 1e-14);
        assert!((lin[(level::E1, level::X)] - op).norm() < 1e-14);
        assert!((lin[(level::E2, level::Y)] - op).norm() < 1e-14);
        assert!(h.hermiticity_error() == 0.0);
    }

    #[test]
    fn rejects_coherence_decay_below_population_decay() {
        let p = AtomParams::from_hz(6e6, 10.0, 5.0, 0.0, 0.0, 1.0).unwrap();
        let d = fig3_drive(0.0, 0.0);
        let err = build_liouvillian(&p, &d, &d.input_fields()).unwrap_err();
        assert!(matches!(err, Error::CoherenceFasterThanPopulation { .. }));
        assert!(err.to_string().contains("γ₂"));
    }

    #[test]
    fn zero_drive_relaxes_to_unpolarized_ground() {
        let d = DriveConfig::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let liou = build_liouvillian(&cold(), &d, &FieldPair::zero()).unwrap();
        assert!(liou.trace_defect() < 1e-12 * liou.generator().max_abs());
        let target = DensityMatrix::<f64>::unpolarized_ground(Basis::Circular);
        assert!(liou.apply(target.matrix()).max_abs() < 1e-9);
        let ss = steady_state(&liou).unwrap();
        assert!((*ss.matrix() - *target.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn generator_preserves_trace_of_every_basis_matrix() {
        let d = fig3_drive(37.0, 1.1);
        let liou = build_liouvillian(&cold(), &d, &d.input_fields()).unwrap();
        let scale = liou.generator().max_abs();
        for i in 0..4 {
            for j in 0..4 {
                let e = Mat4::unit(i, j, Complex64::new(1.0, 0.0));
                assert!(liou.apply(&e).trace().norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn cold_preset_has_unique_steady_state() {
        let d = fig3_drive(0.0, 0.0);
        let liou = build_liouvillian(&cold(), &d, &d.input_fields()).unwrap();
        let sol = solve_steady_state(&liou).unwrap();
        assert!(sol.relative_residual < 1e-12);
        // rank 15: dropping the trace row leaves an invertible system, and
        // the generator itself is singular
        assert!(Lu::factor(&with_trace_row(*liou.generator())).is_ok());
        let ev = liou.apply(sol.state.matrix()).max_abs();
        assert!(ev < 1e-6);
    }

    #[test]
    fn phase_dependence_at_zero_field_comes_from_upper_state() {
        // At δ_B = 0 only the Raman coupling through |1⟩ (∝ Ω_c Ω_p / Δ) makes
        // the populations depend on φ; in the single-lambda limit φ can be
        // absorbed into |Y⟩.
        let spread = |delta_hz: f64| {
            let p = cold().with_delta_exc(angular(delta_hz)).unwrap();
            let pops = |phi| {
                let d = fig3_drive(0.0, phi);
                let s = steady_state(&build_liouvillian(&p, &d, &d.input_fields()).unwrap()).unwrap();
                basis_change_state(&s, BasisChange::CircularToLinear).populations()
            };
            let (a, b) = (pops(0.0), pops(1.3));
            (0..4).fold(0.0_f64, |m, i| m.max((a[i] - b[i]).abs()))
        };
        let (near, far) = (spread(1e9), spread(1e10));
        assert!(near > 0.0);
        let ratio = far / near;
        assert!(ratio > 0.05 && ratio < 0.2, "ratio {ratio}");
    }

    use crate::model::basis_change_state;

    #[test]
    fn degenerate_generator_is_reported() {
        let d = DriveConfig::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let liou = Liouvillian::from_parts(Mat16::zeros(), cold(), d, FieldPair::zero());
        assert!(matches!(steady_state(&liou), Err(Error::DegenerateSteadyState(_))));
    }

    #[test]
    fn time_evolve_zero_duration_is_identity() {
        let d = fig3_drive(10.0, 0.3);
        let liou = build_liouvillian(&cold(), &d, &d.input_fields()).unwrap();
        let rho0 = DensityMatrix::pure(level::G3, Basis::Circular);
        assert_eq!(time_evolve(&rho0, &liou, 0.0, 1e-6).unwrap(), rho0);
        assert!(time_evolve(&rho0, &liou, 1.0, 0.0).is_err());
        assert!(time_evolve(&rho0, &liou, -1.0, 1e-3).is_err());
    }

    #[test]
    fn ground_polarization_relaxes_at_gamma_pop() {
        let p = AtomParams::<f64>::from_hz(6e6, 10.0, 13.0, 0.0, 0.15, 0.075).unwrap();
        let d = DriveConfig::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let liou = build_liouvillian(&p, &d, &FieldPair::zero()).unwrap();
        let rho0 = DensityMatrix::pure(level::G3, Basis::Circular);
        for t in [0.005, 0.02, 0.1] {
            // Δ = 0 keeps dt = 2e-8 inside the RK4 stability region
            let rho = time_evolve(&rho0, &liou, t, 2e-8).unwrap();
            let diff = rho.get(2, 2).re - rho.get(3, 3).re;
            assert!((diff - (-p.gamma_pop() * t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn instability_is_reported() {
        let d = fig3_drive(0.0, 0.0);
        let liou = build_liouvillian(&cold(), &d, &d.input_fields()).unwrap();
        let rho0 = DensityMatrix::unpolarized_ground(Basis::Circular);
        // Γ·dt far outside the RK4 stability region
        let err = time_evolve(&rho0, &liou, 1e-3, 1e-5).unwrap_err();
        assert!(matches!(err, Error::Unstable { .. }));
    }

    #[test]
    fn rk4_convergence_is_fourth_order() {
        // moderately stiff instance so that the truncation error dominates
        let p = AtomParams::new(1.0, 0.05, 0.08, 1.7, 0.0, 1.0).unwrap();
        let d = DriveConfig::new(0.3, 0.4, 0.8, 0.5, 0.0).unwrap();
        let liou = build_liouvillian(&p, &d, &d.input_fields()).unwrap();
        let rho0 = DensityMatrix::pure(level::G4, Basis::Circular);
        let t = 3.0;
        let r1 = time_evolve(&rho0, &liou, t, 0.2).unwrap();
        let r2 = time_evolve(&rho0, &liou, t, 0.1).unwrap();
        let r3 = time_evolve(&rho0, &liou, t, 0.05).unwrap();
        let e1 = (*r1.matrix() - *r2.matrix()).max_abs();
        let e2 = (*r2.matrix() - *r3.matrix()).max_abs();
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn substitution_image_examples() {
        let d = DriveConfig::<f64>::from_hz(40.0, 0.0, 240e3, 60e3, 0.0).unwrap();
        let img = substitution_image(&d);
        assert!((img.delta_b() + angular(40.0)).abs() < 1e-12);
        assert!((img.phi() - std::f64::consts::PI).abs() < 1e-15);
        let back = substitution_image(&img);
        assert_eq!(back.delta_b(), d.delta_b());
        assert!((back.phi() - d.phi()).abs() < 1e-12 || (back.phi() - d.phi()).abs() > TAU - 1e-12);
        let z = DriveConfig::new(0.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let zi = substitution_image(&z);
        assert_eq!(zi.delta_b(), 0.0);
        assert!((zi.phi() - (1.0 + std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn substitution_symmetry_of_single_atom_coherence() {
        let p = AtomParams::from_hz(500e6, 25.0, 28.0, 814.5e6, 15.0, 0.075).unwrap();
        for (b, phi) in [(40.0, 0.3), (-91.0, 5.5), (7.0, 2.0)] {
            let d = DriveConfig::from_hz(b, phi, 240e3, 60e3, 0.0).unwrap();
            let s = substitution_image(&d);
            let ra = steady_state(&build_liouvillian(&p, &d, &d.input_fields()).unwrap()).unwrap();
            let rb = steady_state(&build_liouvillian(&p, &s, &s.input_fields()).unwrap()).unwrap();
            let (ca, cb): (Complex64, Complex64) = (ra.probe_coherence(), rb.probe_coherence());
            assert!((ca.norm() - cb.norm()).abs() < 1e-10 * (1.0 + ca.norm()));
        }
    }

    #[test]
    fn common_phase_is_a_gauge() {
        let p = AtomParams::from_hz(500e6, 25.0, 28.0, 814.5e6, 15.0, 0.075).unwrap();
        let d = DriveConfig::from_hz(-33.0, 0.9, 240e3, 60e3, 0.0).unwrap();
        let f = d.input_fields();
        let g = Complex64::from_polar(1.0, 0.77);
        let rotated = to_circular(d.control_amplitude() * g, d.probe_amplitude() * g);
        let ra = steady_state(&build_liouvillian(&p, &d, &f).unwrap()).unwrap();
        let rb = steady_state(&build_liouvillian(&p, &d, &rotated).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((ra.get(i, j).norm() - rb.get(i, j).norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sideband_response_is_traceless_and_finite_at_zero_detuning() {
        let p = AtomParams::from_hz(500e6, 25.0, 28.0, 814.5e6, 15.0, 0.075).unwrap();
        let d = DriveConfig::from_hz(-91.0, 0.0, 240e3, 0.0, 0.0).unwrap();
        let liou = build_liouvillian(&p, &d, &d.input_fields()).unwrap();
        let rho0 = steady_state(&liou).unwrap();
        let pop = probe_operator::<f64>();
        let near = SidebandSolver::new(&liou, &rho0, angular(1e-3)).unwrap().respond(&pop);
        let at = SidebandSolver::new(&liou, &rho0, 0.0).unwrap().respond(&pop);
        assert!(at.trace().norm() < 1e-12 * (1.0 + at.max_abs()));
        // continuous through δ = 0
        assert!((near - at).max_abs() < 1e-3 * at.max_abs());
    }

    #[test]
    fn single_precision_zero_drive() {
        let p = AtomParams::<f32>::new(1.0, 0.01, 0.02, 3.0, 0.0, 1.0).unwrap();
        let d = DriveConfig::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let ss = steady_state(&build_liouvillian(&p, &d, &FieldPair::zero()).unwrap()).unwrap();
        assert!((ss.get(2, 2).re - 0.5).abs() < 1e-5);
        assert!((ss.get(3, 3).re - 0.5).abs() < 1e-5);
    }
}
