#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracctl::experiments::{self, config, ExperimentConfig, RawConfig};
use fracctl::{Error, Result};

#[derive(Parser)]
#[command(name = "fracctl", version, about = "Approximate controllability experiments for nonlocal fractional systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; fields override the preset.
    config: Option<PathBuf>,
    /// Built-in preset (heat, scalar).
    #[arg(long)]
    preset: Option<String>,
    /// Number of uniform time steps M.
    #[arg(long)]
    grid: Option<usize>,
    /// Run even if hypothesis checks fail.
    #[arg(long)]
    force: bool,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the nonlocal smallness, growth, and actuation conditions.
    Verify(Common),
    /// Open-loop solve with a constant control.
    Simulate(Common),
    /// Synthesize the steering control for one regularization level.
    Synthesize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        reg: f64,
    },
    /// Regularization sweep written as CSV.
    Sweep(Common),
    /// Compare the mild formula with the time stepper on a single mode.
    OracleCheck(Common),
}

fn load(c: &Common) -> Result<ExperimentConfig> {
    let mut raw = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            config::parse_config(&text, path)?
        }
        None => RawConfig::default(),
    };
    if let Some(p) = &c.preset {
        raw.preset = Some(p.clone());
    }
    if raw.preset.is_none() && c.config.is_none() {
        return Err(Error::validation("config", "give a configuration file or --preset"));
    }
    if let Some(m) = c.grid {
        raw.grid_size = Some(m);
    }
    experiments::resolve(&raw)
}

fn out_path(c: &Common, cfg: &ExperimentConfig) -> PathBuf {
    c.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output_path))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Verify(c) => {
            let cfg = load(&c)?;
            let report = experiments::run_verify(&cfg);
            println!("{report}");
            if !report.passed() {
                return Err(Error::Assumption("hypothesis checks failed".into()));
            }
        }
        Command::Simulate(c) => {
            let cfg = load(&c)?;
            let report = experiments::run_simulate(&cfg, c.force)?;
            println!("{report}");
            if let Some(path) = &c.out {
                experiments::write_trajectory_csv(path, &report.trajectory)?;
                println!("trajectory written to {}", path.display());
            }
        }
        Command::Synthesize { common: c, reg } => {
            let cfg = load(&c)?;
            if !(reg > 0.0) {
                return Err(Error::validation("--reg", format!("a = {reg} must be positive")));
            }
            let r = experiments::run_synthesize(&cfg, reg, c.force)?;
            println!("a = {reg:e}");
            println!("converged = {} after {} iterations", r.converged, r.iterations);
            println!("residual = {:.3e}", r.residual);
            println!("terminal_error = {:.16e}", r.terminal_error);
            println!("identity_defect = {:.3e}", r.identity_defect);
            println!("control_energy = {:.16e}", r.control_energy);
            if let Some(path) = &c.out {
                experiments::write_control_csv(path, &r.control_samples)?;
                println!("control written to {}", path.display());
            }
        }
        Command::Sweep(c) => {
            let cfg = load(&c)?;
            let table = experiments::run_sweep(&cfg, c.force)?;
            let path = out_path(&c, &cfg);
            experiments::write_sweep_csv(&path, &table)?;
            for r in &table.rows {
                println!(
                    "a = {:.1e}  terminal_error = {:.6e}  energy = {:.6e}  iterations = {}  converged = {}",
                    r.a, r.terminal_error, r.control_energy, r.iterations, r.converged
                );
            }
            println!("sweep written to {}", path.display());
        }
        Command::OracleCheck(c) => {
            let cfg = load(&c)?;
            let m = c.grid.unwrap_or(2000);
            println!("{}", experiments::run_oracle_check(&cfg, m)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
