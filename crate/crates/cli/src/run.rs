//! Executes a [`RunConfig`] and collects a table plus sidecar metadata.

use dlambda::propagation::transmission_with;
use dlambda::spectroscopy::sweep;
use dlambda::{
    build_liouvillian, group_velocity_class, pulse_response, solve_steady_state,
    susceptibility_spectrum, Curve, PropagationOptions, SolveDiagnostics, SweepSpec,
    SweepVariable,
};
use serde_json::{json, Value};

use crate::config::{Mode, RunConfig};

/// Tabular result in grid order plus mode-specific summary values.
#[derive(Clone, Debug)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Value,
    pub diagnostics: Value,
}

fn diagnostics_json(d: &SolveDiagnostics<f64>) -> Value {
    json!({
        "steady_states": d.steady_states,
        "max_relative_residual": d.max_relative_residual,
        "max_trace_error": d.max_trace_error,
        "max_hermiticity_error": d.max_hermiticity_error,
        "min_eigenvalue": d.min_eigenvalue,
        "max_refinement_delta": d.max_refinement_delta,
        "states_valid": d.states_valid(),
    })
}

fn options(cfg: &RunConfig) -> PropagationOptions {
    PropagationOptions {
        n_steps: cfg.n_steps,
        refine: true,
    }
}

fn sweep_spec(cfg: &RunConfig, variable: SweepVariable) -> dlambda::Result<SweepSpec<f64>> {
    Ok(SweepSpec::new(variable, cfg.grid_values(), cfg.atom_params()?, cfg.drive_config()?)?
        .with_options(options(cfg)))
}

fn curve_rows(c: &Curve<f64>) -> Vec<Vec<f64>> {
    c.points().iter().map(|&(x, y)| vec![x, y]).collect()
}

pub fn run(cfg: &RunConfig) -> dlambda::Result<Report> {
    let params = cfg.atom_params()?;
    let drive = cfg.drive_config()?;
    match cfg.mode {
        Mode::Steady => {
            let l = build_liouvillian(&params, &drive, &drive.input_fields())?;
            let s = solve_steady_state(&l)?;
            let mut d = SolveDiagnostics::default();
            d.record(&s);
            let rows = (0..4)
                .flat_map(|j| (0..4).map(move |i| (i, j)))
                .map(|(i, j)| {
                    let z = s.state.get(i, j);
                    vec![i as f64, j as f64, z.re, z.im]
                })
                .collect();
            Ok(Report {
                columns: vec!["row_idx", "col_idx", "re_rel", "im_rel"],
                rows,
                summary: json!({
                    "basis": "circular",
                    "relative_residual": s.relative_residual,
                }),
                diagnostics: diagnostics_json(&d),
            })
        }
        Mode::Transmit => {
            let r = transmission_with(&params, &drive, options(cfg))?;
            Ok(Report {
                columns: vec![
                    "transmission_rel",
                    "control_transmission_rel",
                    "theta_in_rad",
                    "theta_out_rad",
                    "accumulated_phase_rad",
                ],
                rows: vec![vec![
                    r.probe_power_out,
                    r.control_power_out,
                    r.theta_in,
                    r.theta_out,
                    r.accumulated_phase(),
                ]],
                summary: json!({
                    "transmission": r.probe_power_out,
                    "refinement_delta": r.refinement_delta(),
                }),
                diagnostics: diagnostics_json(&r.diagnostics),
            })
        }
        Mode::SweepPhase | Mode::SweepB => {
            let (variable, x_col) = if cfg.mode == Mode::SweepPhase {
                (SweepVariable::Phase, "phi_rad")
            } else {
                (SweepVariable::BField, "delta_b_hz")
            };
            let r = sweep(&sweep_spec(cfg, variable)?)?;
            Ok(Report {
                columns: vec![x_col, "transmission_rel"],
                rows: curve_rows(&r.curve),
                summary: json!({ "relative_variation": r.curve.relative_variation() }),
                diagnostics: diagnostics_json(&r.diagnostics),
            })
        }
        Mode::Spectrum => {
            let r = susceptibility_spectrum(&sweep_spec(cfg, SweepVariable::ProbeDetuning)?)?;
            let re = r.curve.map("re_chi_arb", |z| z.re);
            // a grid too coarse for the fit still yields the spectrum
            let fit = match group_velocity_class(&re, cfg.slope_window_hz) {
                Ok(g) => json!({
                    "slope_per_hz": g.slope,
                    "std_error": g.std_error,
                    "class": g.class.name(),
                    "points": g.points,
                }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            Ok(Report {
                columns: vec!["delta_probe_hz", "re_chi_arb", "im_chi_arb"],
                rows: r.curve.points().iter().map(|&(x, z)| vec![x, z.re, z.im]).collect(),
                summary: json!({
                    "group_velocity": fit,
                    "max_truncation_estimate": r.max_truncation_estimate,
                    "warned_points": r.warned_points,
                }),
                diagnostics: diagnostics_json(&r.diagnostics),
            })
        }
        Mode::Pulse => {
            let r = pulse_response(&params, &drive, &cfg.pulse_spec()?)?;
            let rows = r
                .input
                .points()
                .iter()
                .zip(r.output.points())
                .map(|(&(t, a), &(_, b))| vec![t, a, b])
                .collect();
            Ok(Report {
                columns: vec!["t_s", "input_power_rel", "output_power_rel"],
                rows,
                summary: json!({
                    "fractional_delay": r.fractional_delay,
                    "delay_s": r.fractional_delay * cfg.pulse.fwhm_s,
                    "peak_gain": r.peak_gain,
                    "evaluated_bins": r.evaluated_bins,
                }),
                diagnostics: diagnostics_json(&r.diagnostics),
            })
        }
    }
}
