use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use wavetail_cli::{config::ExperimentConfig, ExperimentName, RunError};

/// Spectral localization experiments for free relativistic wave equations.
#[derive(Parser)]
#[command(name = "wavetail", version)]
struct Args {
    /// JSON experiment config; defaults are built in per experiment
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory (default: $WAVETAIL_OUT or ./out)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Multiply the lattice point count (oracle runs)
    #[arg(long, default_value_t = 1)]
    resolution_scale: usize,

    /// Experiment name; overrides the config's
    #[arg(long)]
    experiment: Option<ExperimentName>,

    /// Dry run: print resolution warnings and exit
    #[arg(long)]
    validate: bool,
}

fn load_config(args: &Args) -> Result<ExperimentConfig, RunError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
            cfg
        }
        None => {
            let name = args.experiment.ok_or_else(|| {
                RunError::Config("need --config or --experiment".into())
            })?;
            ExperimentConfig::default_for(name)
        }
    };
    if let Some(name) = args.experiment {
        cfg.experiment = name;
    }
    if args.resolution_scale > 1 {
        cfg = cfg.scaled(args.resolution_scale);
    }
    Ok(cfg)
}

fn out_dir(args: &Args, cfg: &ExperimentConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os("WAVETAIL_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };

    if args.validate {
        match wavetail_cli::validate(&cfg) {
            Ok(warnings) if warnings.is_empty() => {
                println!("{}: config ok, no warnings", cfg.experiment);
                ExitCode::SUCCESS
            }
            Ok(warnings) => {
                for w in &warnings {
                    println!("warning: {w}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        }
    } else {
        let dir = out_dir(&args, &cfg);
        match wavetail_cli::run(&cfg, &dir) {
            Ok(report) => {
                for c in &report.checks {
                    println!(
                        "{} {}: {:e} ({})",
                        if c.pass { "pass" } else { "FAIL" },
                        c.name,
                        c.value,
                        c.tolerance
                    );
                }
                println!(
                    "{}: {} -> {}",
                    cfg.experiment,
                    if report.passed { "passed" } else { "FAILED" },
                    dir.join(cfg.experiment.as_str()).display()
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        }
    }
}
