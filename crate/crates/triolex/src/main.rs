//! `triolex`: validate triole-algebra workspace files and run named
//! analyses over their objects. Stdout carries machine-first JSON,
//! diagnostics go to stderr; exit 0 = all valid, 1 = validation or
//! lookup failure, 2 = parse/schema error.

use triolex::{commands, validate, workspace};

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use workspace::{Workspace, WorkspaceError};

#[derive(Parser)]
#[command(name = "triolex", version, about = "exact triole-algebra calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the algebra and every object in the workspace file.
    Validate {
        file: PathBuf,
        /// Human-readable indentation (canonical compact JSON otherwise).
        #[arg(long)]
        pretty: bool,
    },
    /// Run a named analysis against one object of the workspace.
    Analyze {
        file: PathBuf,
        /// One of: curvature, flat-check, poisson-check, symbol, atiyah,
        /// h0, bracket, gauge.
        #[arg(long)]
        cmd: String,
        /// Object name ("X,Y" pair for bracket).
        #[arg(long)]
        target: String,
        #[arg(long)]
        pretty: bool,
        /// Degree bound for h0.
        #[arg(long, default_value_t = 3)]
        dmax: u32,
    },
}

fn emit(value: &serde_json::Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    };
    println!("{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file, pretty } => match Workspace::load(&file) {
            Err(WorkspaceError::Parse(msg)) => {
                eprintln!("parse error: {msg}");
                ExitCode::from(2)
            }
            Ok(ws) => {
                let (report, all_valid) = validate::validate_workspace(&ws);
                emit(&report, pretty);
                if all_valid {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
        },
        Command::Analyze {
            file,
            cmd,
            target,
            pretty,
            dmax,
        } => match Workspace::load(&file) {
            Err(WorkspaceError::Parse(msg)) => {
                eprintln!("parse error: {msg}");
                ExitCode::from(2)
            }
            Ok(ws) => {
                let Some(command) = commands::find(&cmd) else {
                    eprintln!(
                        "unknown command {cmd:?}; available: {}",
                        commands::registry()
                            .iter()
                            .map(|c| c.name())
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    return ExitCode::from(1);
                };
                let opts = commands::AnalyzeOpts { target, dmax };
                match command.run(&ws, &opts) {
                    Ok(result) => {
                        let wrapped = serde_json::json!({
                            "command": command.name(),
                            "target": opts.target,
                            "result": result,
                        });
                        emit(&wrapped, pretty);
                        ExitCode::SUCCESS
                    }
                    Err(msg) => {
                        eprintln!("{msg}");
                        ExitCode::from(1)
                    }
                }
            }
        },
    }
}
