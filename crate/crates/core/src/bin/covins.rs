//! Command-line front end: one job per invocation, JSON report out.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use covins_core::cli::{run, JobConfig, Task};

/// Covariant-instrument toolkit: validate, enumerate, build, dilate,
/// decompose, model and simulate instruments over finite groups.
#[derive(Parser, Debug)]
#[command(name = "covins", version, about)]
struct Args {
    /// Path to a JSON job configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Task name (validate, enumerate-b, build, dilate, decompose,
    /// model, simulate); overrides the config file.
    #[arg(long)]
    task: Option<String>,

    /// RNG seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,

    /// Residual tolerance; overrides the config file.
    #[arg(long)]
    tol: Option<f64>,

    /// Report output path; `-` or absent writes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Builtin fixture name (see `--list-fixtures`); overrides the
    /// config file.
    #[arg(long)]
    fixture: Option<String>,

    /// Print the fixture catalog and exit.
    #[arg(long, default_value_t = false)]
    list_fixtures: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_fixtures {
        for name in covins_core::fixtures::base_names() {
            println!("{name}");
        }
        for name in covins_core::fixtures::instrument_names() {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }

    let mut config = match &args.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("covins: cannot read {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            match JobConfig::from_json_str(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("covins: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
        }
        None => JobConfig::default(),
    };

    if let Some(name) = &args.task {
        match Task::parse(name) {
            Ok(task) => config.task = Some(task),
            Err(e) => {
                eprintln!("covins: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if let Some(seed) = args.seed {
        config.seed = Some(seed);
    }
    if let Some(tol) = args.tol {
        config.tolerance = Some(tol);
    }
    if let Some(fixture) = &args.fixture {
        config.fixture = Some(fixture.clone());
    }
    if let Some(out) = &args.out {
        config.output = Some(out.clone());
    }

    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("covins: {e}");
            return ExitCode::from(2);
        }
    };

    let text = report.to_json_string();
    match &config.output {
        Some(path) if path.as_os_str() != "-" => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("covins: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        _ => println!("{text}"),
    }

    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
