use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dlambda_cli::{emit_config, parse_config_with, run, write_outputs, Mode};

#[derive(Parser)]
#[command(name = "dlambda", version, about = "Double-lambda atom simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Atomic steady state (circular basis) for the input fields
    Steady(Common),
    /// Probe transmission through the cell
    Transmit(Common),
    /// Transmission against the relative phase (rad)
    SweepPhase(Common),
    /// Transmission against the magnetic splitting (Hz)
    SweepB(Common),
    /// Weak-probe susceptibility against probe detuning (Hz)
    Spectrum(Common),
    /// Gaussian probe pulse through the cell
    Pulse(Common),
}

#[derive(Args)]
struct Common {
    /// Parameter preset (fig3-cold or fig4-warm)
    #[arg(value_name = "PRESET")]
    preset_pos: Option<String>,
    /// Config file with `key = value` lines
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "preset_pos")]
    preset: Option<String>,
    /// CSV output path; the JSON sidecar goes next to it
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// z steps through the cell
    #[arg(long)]
    steps: Option<usize>,
    /// Sweep grid points
    #[arg(long)]
    points: Option<usize>,
    /// Override any config key
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the resolved configuration and exit
    #[arg(long)]
    print_config: bool,
}

fn execute(mode: Mode, args: Common) -> Result<()> {
    let text = match &args.config {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => String::new(),
    };
    let mut overrides = vec![("mode".to_string(), mode.name().to_string())];
    if let Some(p) = args.preset_pos.or(args.preset) {
        overrides.push(("preset".into(), p));
    }
    if let Some(o) = &args.out {
        overrides.push(("out".into(), o.display().to_string()));
    }
    if let Some(n) = args.steps {
        overrides.push(("n_steps".into(), n.to_string()));
    }
    if let Some(n) = args.points {
        overrides.push(("points".into(), n.to_string()));
    }
    for kv in &args.set {
        let Some((k, v)) = kv.split_once('=') else {
            bail!("--set expects KEY=VALUE, got {kv:?}");
        };
        overrides.push((k.trim().to_string(), v.trim().to_string()));
    }
    // overrides, the subcommand's mode included, replace keys from the file
    let cfg = parse_config_with(&text, &overrides)?;
    if args.print_config {
        print!("{}", emit_config(&cfg));
        return Ok(());
    }
    log::info!("running {} -> {}", cfg.mode, cfg.out.display());
    let report = run(&cfg).with_context(|| format!("{} run failed", cfg.mode))?;
    let (csv, side) = write_outputs(&cfg, &report)?;
    println!("wrote {} ({} rows) and {}", csv.display(), report.rows.len(), side.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Steady(a) => (Mode::Steady, a),
        Command::Transmit(a) => (Mode::Transmit, a),
        Command::SweepPhase(a) => (Mode::SweepPhase, a),
        Command::SweepB(a) => (Mode::SweepB, a),
        Command::Spectrum(a) => (Mode::Spectrum, a),
        Command::Pulse(a) => (Mode::Pulse, a),
    };
    match execute(mode, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // core errors already embed their sources in the message
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
