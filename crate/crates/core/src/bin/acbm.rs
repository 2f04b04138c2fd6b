//! Batch front end over scene files.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse error, 3 a violated
//! invariance statement.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acbm::error::Error;
use acbm::report::{cmd_classify, cmd_conformal, cmd_connection, cmd_validate, ConformalOptions};
use acbm::scene::Scene;
use acbm::tensor::DEFAULT_TOL;
use clap::{Parser, Subcommand};
use serde::Serialize;

const TOL_ENV: &str = "ACBM_TOL";

#[derive(Parser)]
#[command(
    name = "acbm",
    version,
    about = "Pointwise almost contact B-metric computations"
)]
struct Cli {
    /// Write the structured report as JSON to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure axioms and the admissibility of F.
    Validate { file: PathBuf },
    /// Decompose F into the eleven basic classes.
    Classify { file: PathBuf },
    /// The phi-canonical connection, its torsion forms and torsion class.
    Connection { file: PathBuf },
    /// Apply the contactly conformal group and check the invariance statements.
    Conformal {
        file: PathBuf,
        #[arg(long)]
        check_invariance: bool,
        /// Draw random elements from G0 only.
        #[arg(long)]
        g0_only: bool,
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn tolerance() -> Result<f64, String> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(v) => match v.parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(format!("{TOL_ENV} must be a positive number, got `{v}`")),
        },
    }
}

fn read_scene(path: &Path) -> Result<Scene, (u8, String)> {
    let text =
        std::fs::read_to_string(path).map_err(|e| (2, format!("{}: {e}", path.display())))?;
    Scene::parse(&text).map_err(|e| (2, format!("{}: {e}", path.display())))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn emit<R: Serialize + Display>(report: &R, out: Option<&Path>) -> Result<(), (u8, String)> {
    print!("{report}");
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(report).map_err(|e| (1, e.to_string()))?;
        std::fs::write(path, json + "\n").map_err(|e| (1, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let tol = tolerance().map_err(|m| (1, m))?;
    let out = cli.out.as_deref();
    let fail = |e: Error| (exit_code(&e), e.to_string());
    match cli.command {
        Command::Validate { file } => {
            let scene = read_scene(&file)?;
            emit(&cmd_validate(&scene, tol).map_err(fail)?, out)?;
        }
        Command::Classify { file } => {
            let scene = read_scene(&file)?;
            emit(&cmd_classify(&scene, tol).map_err(fail)?, out)?;
        }
        Command::Connection { file } => {
            let scene = read_scene(&file)?;
            emit(&cmd_connection(&scene, tol).map_err(fail)?, out)?;
        }
        Command::Conformal {
            file,
            check_invariance,
            g0_only,
            trials,
            seed,
        } => {
            let scene = read_scene(&file)?;
            let opts = ConformalOptions {
                check_invariance,
                g0_only,
                trials,
                seed,
            };
            let report = cmd_conformal(&scene, &opts, tol).map_err(fail)?;
            emit(&report, out)?;
            if report.has_violation() {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
