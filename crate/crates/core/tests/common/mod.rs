//! Shared oracles for the integration tests.
#![allow(dead_code)]

use std::io::Write;

use dlambda::{build_liouvillian, steady_state, to_circular, AtomParams64, DriveConfig64};
use num_complex::Complex64;

/// Writes one result line straight to stdout so it survives output capture.
pub fn report(id: u32, title: &str, pass: bool, detail: &str) {
    let line = format!(
        "[{}] criterion {id:>2}: {title}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

/// `ρ_{1X} + ρ_{2Y}` from a column-stacked circular-basis state, rotating
/// the ground block by hand.
fn linear_probe_coherence(v: &[Complex64; 16]) -> Complex64 {
    let r = |i: usize, j: usize| v[i + 4 * j];
    (r(0, 2) + r(0, 3) + r(1, 2) - r(1, 3)) * std::f64::consts::FRAC_1_SQRT_2
}

fn matvec(g: &dlambda::linalg::Mat16<f64>, v: &[Complex64; 16]) -> [Complex64; 16] {
    std::array::from_fn(|i| (0..16).map(|j| g[(i, j)] * v[j]).sum())
}

/// Time-domain lock-in estimate of χ.
///
/// The probe is a real envelope `ε cos(δt) e^{iφ}` on top of the static
/// control. The master equation is integrated with RK4 from the probe-off
/// steady state, the transient is discarded, and the `e^{−iδt}` Fourier
/// component `c` of `ρ_{1X} + ρ_{2Y}` is averaged over whole periods. With the
/// sideband amplitude `ε e^{iφ}/2` this gives `χ = −2 c e^{−iφ} / ε`.
pub fn lockin_chi(params: &AtomParams64, drive: &DriveConfig64, eps: f64, settle: f64, measure: f64, max_dt: f64) -> Complex64 {
    let delta = drive.delta_probe();
    assert!(delta != 0.0, "lock-in needs a non-zero beat frequency");
    let phase = Complex64::from_polar(1.0, drive.phi());
    let control = drive.control_amplitude();
    let g_off = *build_liouvillian(params, drive, &to_circular(control, Complex64::new(0.0, 0.0)))
        .unwrap()
        .generator();
    let g_on = *build_liouvillian(params, drive, &to_circular(control, phase * eps))
        .unwrap()
        .generator();
    // the generator is affine in the fields
    let g_probe = g_on - g_off;
    let rho0 = steady_state(&build_liouvillian(params, drive, &to_circular(control, Complex64::new(0.0, 0.0))).unwrap())
        .unwrap();
    let mut v: [Complex64; 16] = rho0.matrix().vectorize();

    let period = std::f64::consts::TAU / delta.abs();
    let per = (period / max_dt).ceil() as usize;
    let h = period / per as f64;
    let settle_periods = (settle / period).ceil() as usize;
    let measure_periods = (measure / period).ceil().max(1.0) as usize;

    let deriv = |t: f64, v: &[Complex64; 16]| -> [Complex64; 16] {
        let a = matvec(&g_off, v);
        let b = matvec(&g_probe, v);
        let c = (delta * t).cos();
        std::array::from_fn(|i| a[i] + b[i] * c)
    };
    let step = |t: f64, v: &[Complex64; 16]| -> [Complex64; 16] {
        let add = |x: &[Complex64; 16], s: f64, y: &[Complex64; 16]| -> [Complex64; 16] {
            std::array::from_fn(|i| x[i] + y[i] * s)
        };
        let k1 = deriv(t, v);
        let k2 = deriv(t + h / 2.0, &add(v, h / 2.0, &k1));
        let k3 = deriv(t + h / 2.0, &add(v, h / 2.0, &k2));
        let k4 = deriv(t + h, &add(v, h, &k3));
        std::array::from_fn(|i| v[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0))
    };
    for k in 0..settle_periods * per {
        v = step(k as f64 * h, &v);
    }
    let t0 = (settle_periods * per) as f64 * h;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..measure_periods * per {
        let t = t0 + k as f64 * h;
        acc += linear_probe_coherence(&v) * Complex64::from_polar(1.0, delta * t);
        v = step(t, &v);
    }
    let c = acc / (measure_periods * per) as f64;
    -2.0 * c * phase.conj() / eps
}
