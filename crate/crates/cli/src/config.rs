//! Flat `key = value` run configuration.
//!
//! All frequencies are ordinary frequencies in Hz and phases are radians;
//! conversion to angular units happens when the core types are built.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use dlambda::presets::PresetValues;
use dlambda::{angular, AtomParams64, DriveConfig64, Preset, PulseSpec};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Steady,
    Transmit,
    SweepPhase,
    SweepB,
    Spectrum,
    Pulse,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Steady,
        Mode::Transmit,
        Mode::SweepPhase,
        Mode::SweepB,
        Mode::Spectrum,
        Mode::Pulse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Steady => "steady",
            Mode::Transmit => "transmit",
            Mode::SweepPhase => "sweep-phase",
            Mode::SweepB => "sweep-b",
            Mode::Spectrum => "spectrum",
            Mode::Pulse => "pulse",
        }
    }

    pub fn is_sweep(self) -> bool {
        matches!(self, Mode::SweepPhase | Mode::SweepB | Mode::Spectrum)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Mode::ALL.iter().map(|m| m.name()).collect();
                format!("unknown mode {s:?} (expected one of {})", names.join(", "))
            })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtomHz {
    pub gamma_e_hz: f64,
    pub gamma_pop_hz: f64,
    pub gamma_coh_hz: f64,
    pub delta_exc_hz: f64,
    pub od: f64,
    pub cell_length_m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriveHz {
    pub delta_b_hz: f64,
    pub phi_rad: f64,
    pub omega_c_hz: f64,
    pub omega_p_hz: f64,
    pub delta_probe_hz: f64,
}

/// Sweep grid: radians for `sweep-phase` (half-open, `stop` excluded), Hz
/// otherwise (closed).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridHz {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PulseCfg {
    pub fwhm_s: f64,
    pub window_s: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub preset: Option<&'static str>,
    pub atom: AtomHz,
    pub drive: DriveHz,
    pub grid: GridHz,
    pub n_steps: usize,
    pub slope_window_hz: f64,
    pub pulse: PulseCfg,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn atom_params(&self) -> dlambda::Result<AtomParams64> {
        let a = &self.atom;
        AtomParams64::from_hz(
            a.gamma_e_hz,
            a.gamma_pop_hz,
            a.gamma_coh_hz,
            a.delta_exc_hz,
            a.od,
            a.cell_length_m,
        )
    }

    pub fn drive_config(&self) -> dlambda::Result<DriveConfig64> {
        let d = &self.drive;
        DriveConfig64::from_hz(
            d.delta_b_hz,
            d.phi_rad,
            d.omega_c_hz,
            d.omega_p_hz,
            d.delta_probe_hz,
        )
    }

    pub fn pulse_spec(&self) -> dlambda::Result<PulseSpec<f64>> {
        Ok(PulseSpec::new(
            self.pulse.fwhm_s,
            angular(self.drive.omega_p_hz),
            angular(self.drive.delta_probe_hz),
            self.pulse.window_s,
            self.pulse.samples,
        )?
        .with_z_steps(self.n_steps))
    }

    pub fn grid_values(&self) -> Vec<f64> {
        let g = &self.grid;
        if self.mode == Mode::SweepPhase {
            dlambda::SweepSpec::periodic_grid(g.start, g.stop, g.points)
        } else {
            dlambda::SweepSpec::closed_grid(g.start, g.stop, g.points)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{}: expected `key = value`, got {text:?}", loc(*.line))]
    Syntax { line: usize, text: String },
    #[error("{}: unknown key {key:?}", loc(*.line))]
    UnknownKey { line: usize, key: String },
    #[error("{}: key {key:?} already set on line {first}", loc(*.line))]
    Duplicate {
        line: usize,
        key: String,
        first: usize,
    },
    #[error("{}: {key}: {reason}", loc(*.line))]
    OutOfRange {
        line: usize,
        key: &'static str,
        reason: String,
    },
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<&'static str>),
}

fn loc(line: usize) -> String {
    if line == 0 {
        "command line".into()
    } else {
        format!("line {line}")
    }
}

/// Where a value came from: a line of the document, or a command-line
/// override (line 0).
type Located = (usize, String);

#[derive(Clone, Copy)]
enum Kind {
    Mode,
    Preset,
    Positive,
    NonNegative,
    Finite,
    Count(usize),
    PowerOfTwo(usize),
    Path,
}

struct KeySpec {
    key: &'static str,
    kind: Kind,
    /// Supplied by a preset.
    from_preset: bool,
    default: Option<&'static str>,
}

const fn spec(key: &'static str, kind: Kind, from_preset: bool, default: Option<&'static str>) -> KeySpec {
    KeySpec {
        key,
        kind,
        from_preset,
        default,
    }
}

const KEYS: &[KeySpec] = &[
    spec("mode", Kind::Mode, false, None),
    spec("preset", Kind::Preset, false, None),
    spec("gamma_e_hz", Kind::Positive, true, None),
    spec("gamma_pop_hz", Kind::Positive, true, None),
    spec("gamma_coh_hz", Kind::Positive, true, None),
    spec("delta_exc_hz", Kind::Finite, true, None),
    spec("od", Kind::NonNegative, true, None),
    spec("cell_length_m", Kind::Positive, true, None),
    spec("delta_b_hz", Kind::Finite, false, Some("0")),
    spec("phi_rad", Kind::Finite, false, Some("0")),
    spec("omega_c_hz", Kind::NonNegative, true, None),
    spec("omega_p_hz", Kind::NonNegative, true, None),
    spec("delta_probe_hz", Kind::Finite, false, Some("0")),
    spec("grid_start", Kind::Finite, false, None),
    spec("grid_stop", Kind::Finite, false, None),
    spec("points", Kind::Count(2), false, Some("64")),
    spec("n_steps", Kind::Count(16), false, Some("256")),
    spec("slope_window_hz", Kind::Positive, false, Some("10")),
    spec("pulse_fwhm_s", Kind::Positive, false, Some("0.005")),
    spec("pulse_window_s", Kind::Positive, false, Some("0.08")),
    spec("pulse_samples", Kind::PowerOfTwo(256), false, Some("512")),
    spec("out", Kind::Path, false, None),
];

/// Known configuration keys in canonical order.
pub fn known_keys() -> impl Iterator<Item = &'static str> {
    KEYS.iter().map(|k| k.key)
}

fn preset_value(v: &PresetValues, key: &str) -> Option<f64> {
    Some(match key {
        "gamma_e_hz" => v.gamma_e_hz,
        "gamma_pop_hz" => v.gamma_pop_hz,
        "gamma_coh_hz" => v.gamma_coh_hz,
        "delta_exc_hz" => v.delta_exc_hz,
        "od" => v.od,
        "cell_length_m" => v.cell_length_m,
        "omega_c_hz" => v.omega_c_hz,
        "omega_p_hz" => v.omega_p_hz,
        _ => return None,
    })
}

/// Default sweep bounds per mode (phase in radians, others in Hz).
fn default_grid(mode: Mode) -> (f64, f64) {
    match mode {
        Mode::SweepPhase => (0.0, std::f64::consts::TAU),
        Mode::SweepB => (-100.0, 100.0),
        _ => (-10.0, 10.0),
    }
}

/// Splits a document into located key/value pairs.
fn tokenize(text: &str) -> Result<BTreeMap<String, Located>, ConfigError> {
    let mut map: BTreeMap<String, Located> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: raw.to_string(),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: raw.to_string(),
            });
        }
        if !KEYS.iter().any(|s| s.key == k) {
            return Err(ConfigError::UnknownKey {
                line,
                key: k.to_string(),
            });
        }
        if let Some((first, _)) = map.get(k) {
            return Err(ConfigError::Duplicate {
                line,
                key: k.to_string(),
                first: *first,
            });
        }
        map.insert(k.to_string(), (line, v.to_string()));
    }
    Ok(map)
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Like [`parse_config`], with `overrides` (e.g. from the command line)
/// taking precedence over the document. Overrides are reported as line 0.
pub fn parse_config_with(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, ConfigError> {
    let mut map = tokenize(text)?;
    for (k, v) in overrides {
        if !KEYS.iter().any(|s| s.key == k) {
            return Err(ConfigError::UnknownKey { line: 0, key: k.clone() });
        }
        map.insert(k.clone(), (0, v.clone()));
    }
    Resolver::new(map)?.finish()
}

struct Resolver {
    map: BTreeMap<String, Located>,
    preset: Option<Preset>,
    mode: Option<Mode>,
    missing: Vec<&'static str>,
}

impl Resolver {
    fn new(map: BTreeMap<String, Located>) -> Result<Self, ConfigError> {
        let mut r = Self {
            map,
            preset: None,
            mode: None,
            missing: Vec::new(),
        };
        if let Some((line, v)) = r.map.get("preset") {
            r.preset = Some(v.parse().map_err(|e: dlambda::Error| ConfigError::OutOfRange {
                line: *line,
                key: "preset",
                reason: e.to_string(),
            })?);
        }
        match r.map.get("mode") {
            Some((line, v)) => {
                r.mode = Some(v.parse().map_err(|reason| ConfigError::OutOfRange {
                    line: *line,
                    key: "mode",
                    reason,
                })?)
            }
            None => r.missing.push("mode"),
        }
        Ok(r)
    }

    fn spec(key: &str) -> &'static KeySpec {
        KEYS.iter().find(|s| s.key == key).expect("key is in the table")
    }

    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |(l, _)| *l)
    }

    fn float(&mut self, key: &'static str, fallback: Option<f64>) -> Result<f64, ConfigError> {
        let s = Self::spec(key);
        let (line, value) = match self.map.get(key) {
            Some((line, raw)) => {
                let v = raw.parse::<f64>().map_err(|_| ConfigError::OutOfRange {
                    line: *line,
                    key,
                    reason: format!("not a number: {raw:?}"),
                })?;
                (*line, v)
            }
            None => {
                let preset = if s.from_preset {
                    self.preset.and_then(|p| preset_value(&p.values(), key))
                } else {
                    None
                };
                match preset
                    .or(fallback)
                    .or_else(|| s.default.map(|d| d.parse().expect("default parses")))
                {
                    Some(v) => (0, v),
                    None => {
                        self.missing.push(key);
                        return Ok(f64::NAN);
                    }
                }
            }
        };
        let ok = match s.kind {
            Kind::Positive => value.is_finite() && value > 0.0,
            Kind::NonNegative => value.is_finite() && value >= 0.0,
            _ => value.is_finite(),
        };
        if !ok {
            let need = match s.kind {
                Kind::Positive => "finite and > 0",
                Kind::NonNegative => "finite and ≥ 0",
                _ => "finite",
            };
            return Err(ConfigError::OutOfRange {
                line,
                key,
                reason: format!("must be {need}, got {value}"),
            });
        }
        Ok(value)
    }

    fn count(&mut self, key: &'static str) -> Result<usize, ConfigError> {
        let s = Self::spec(key);
        let (line, raw) = match self.map.get(key) {
            Some((l, r)) => (*l, r.clone()),
            None => (0, s.default.expect("counts have defaults").to_string()),
        };
        let bad = |reason: String| ConfigError::OutOfRange { line, key, reason };
        let n: usize = raw
            .parse()
            .map_err(|_| bad(format!("not a non-negative integer: {raw:?}")))?;
        match s.kind {
            Kind::Count(min) if n < min => Err(bad(format!("must be ≥ {min}, got {n}"))),
            Kind::PowerOfTwo(min) if n < min || !n.is_power_of_two() => {
                Err(bad(format!("must be a power of two ≥ {min}, got {n}")))
            }
            _ => Ok(n),
        }
    }

    fn finish(mut self) -> Result<RunConfig, ConfigError> {
        let mode = self.mode;
        let atom = AtomHz {
            gamma_e_hz: self.float("gamma_e_hz", None)?,
            gamma_pop_hz: self.float("gamma_pop_hz", None)?,
            gamma_coh_hz: self.float("gamma_coh_hz", None)?,
            delta_exc_hz: self.float("delta_exc_hz", Some(dlambda::presets::EXCITED_SPLITTING_HZ))?,
            od: self.float("od", None)?,
            cell_length_m: self.float("cell_length_m", Some(dlambda::presets::CELL_LENGTH_M))?,
        };
        let drive = DriveHz {
            delta_b_hz: self.float("delta_b_hz", None)?,
            phi_rad: self.float("phi_rad", None)?,
            omega_c_hz: self.float("omega_c_hz", None)?,
            omega_p_hz: self.float("omega_p_hz", None)?,
            delta_probe_hz: self.float("delta_probe_hz", None)?,
        };
        let (lo, hi) = default_grid(mode.unwrap_or(Mode::Spectrum));
        let grid = GridHz {
            start: self.float("grid_start", Some(lo))?,
            stop: self.float("grid_stop", Some(hi))?,
            points: self.count("points")?,
        };
        let n_steps = self.count("n_steps")?;
        let slope_window_hz = self.float("slope_window_hz", None)?;
        let pulse = PulseCfg {
            fwhm_s: self.float("pulse_fwhm_s", None)?,
            window_s: self.float("pulse_window_s", None)?,
            samples: self.count("pulse_samples")?,
        };
        if !self.missing.is_empty() {
            return Err(ConfigError::Missing(self.missing));
        }
        let mode = mode.expect("missing mode reported above");
        let out = match self.map.get("out") {
            Some((_, p)) => PathBuf::from(p),
            None => PathBuf::from(format!("{}.csv", mode.name())),
        };

        if atom.gamma_coh_hz < atom.gamma_pop_hz {
            return Err(ConfigError::OutOfRange {
                line: self.line_of("gamma_coh_hz"),
                key: "gamma_coh_hz",
                reason: format!(
                    "coherence decay {} Hz must not be below population decay {} Hz",
                    atom.gamma_coh_hz, atom.gamma_pop_hz
                ),
            });
        }
        if mode.is_sweep() && !(grid.stop > grid.start) {
            return Err(ConfigError::OutOfRange {
                line: self.line_of("grid_stop"),
                key: "grid_stop",
                reason: format!("must exceed grid_start = {}", grid.start),
            });
        }
        if mode == Mode::Transmit && !(drive.omega_p_hz > 0.0) {
            return Err(ConfigError::OutOfRange {
                line: self.line_of("omega_p_hz"),
                key: "omega_p_hz",
                reason: "transmission needs a non-zero probe".into(),
            });
        }
        if mode == Mode::Pulse && pulse.window_s < 8.0 * pulse.fwhm_s {
            return Err(ConfigError::OutOfRange {
                line: self.line_of("pulse_window_s"),
                key: "pulse_window_s",
                reason: format!("must be at least 8 × pulse_fwhm_s = {}", 8.0 * pulse.fwhm_s),
            });
        }
        Ok(RunConfig {
            mode,
            preset: self.preset.map(Preset::name),
            atom,
            drive,
            grid,
            n_steps,
            slope_window_hz,
            pulse,
            out,
        })
    }
}

/// Canonical document for `config`; `parse_config(emit_config(c)) == c`.
pub fn emit_config(config: &RunConfig) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: &dyn fmt::Display| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("mode", &config.mode);
    if let Some(p) = config.preset {
        kv("preset", &p);
    }
    let a = &config.atom;
    kv("gamma_e_hz", &a.gamma_e_hz);
    kv("gamma_pop_hz", &a.gamma_pop_hz);
    kv("gamma_coh_hz", &a.gamma_coh_hz);
    kv("delta_exc_hz", &a.delta_exc_hz);
    kv("od", &a.od);
    kv("cell_length_m", &a.cell_length_m);
    let d = &config.drive;
    kv("delta_b_hz", &d.delta_b_hz);
    kv("phi_rad", &d.phi_rad);
    kv("omega_c_hz", &d.omega_c_hz);
    kv("omega_p_hz", &d.omega_p_hz);
    kv("delta_probe_hz", &d.delta_probe_hz);
    kv("grid_start", &config.grid.start);
    kv("grid_stop", &config.grid.stop);
    kv("points", &config.grid.points);
    kv("n_steps", &config.n_steps);
    kv("slope_window_hz", &config.slope_window_hz);
    kv("pulse_fwhm_s", &config.pulse.fwhm_s);
    kv("pulse_window_s", &config.pulse.window_s);
    kv("pulse_samples", &config.pulse.samples);
    kv("out", &config.out.display());
    s
}
