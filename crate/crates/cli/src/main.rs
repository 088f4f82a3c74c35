//! `freelab`: command-line front end for the FREE actuator workbench.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration or parse error,
//! 3 numeric failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "freelab", version, about = "Model, simulate and control FREE soft actuators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Workbench configuration (TOML). Defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory receiving the CSV tables and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit or evaluate elastomer laws, or convert Shore A hardness.
    Material(commands::material::MaterialArgs),
    /// Open-loop response of the nonlinear and linearized models.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: commands::simulate::SimulateArgs,
    },
    /// Closed-loop PID simulation of a reference scenario.
    Control {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: commands::control::ControlArgs,
    },
    /// Blocked reactions and free stroke over winding angle and pressure.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: commands::sweep::SweepArgs,
    },
    /// Closed-loop characteristic roots over a gain grid.
    Locus {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: commands::locus::LocusArgs,
    },
    /// Identify stiffness or damping from measured data.
    Sysid(commands::sysid::SysidArgs),
    /// End-effector poses of a four-FREE module over the actuation cases.
    Workspace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: commands::workspace::WorkspaceArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    Axial,
    Torsional,
}

/// Arguments as recorded in the manifest: the output directory is dropped
/// so that runs into different directories compare equal.
fn recorded_arguments() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--out" {
            args.next();
        } else if !a.starts_with("--out=") {
            out.push(a);
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    let args = recorded_arguments();
    let (name, out, result) = match cli.command {
        Command::Material(a) => ("material", a.out().to_path_buf(), commands::material::run(&a)?),
        Command::Simulate { common, args } => ("simulate", common.out.clone(), commands::simulate::run(&common, &args)?),
        Command::Control { common, args } => ("control", common.out.clone(), commands::control::run(&common, &args)?),
        Command::Sweep { common, args } => ("sweep", common.out.clone(), commands::sweep::run(&common, &args)?),
        Command::Locus { common, args } => ("locus", common.out.clone(), commands::locus::run(&common, &args)?),
        Command::Sysid(a) => ("sysid", a.out.clone(), commands::sysid::run(&a)?),
        Command::Workspace { common, args } => ("workspace", common.out.clone(), commands::workspace::run(&common, &args)?),
    };
    for path in result.write(&out, name, &args)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FREELAB_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("freelab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
