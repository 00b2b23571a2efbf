use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use irslab_cli::commands::{self, MtpMode, Outcome};
use irslab_cli::{emit, exit, report, suite, CliError, CliResult, RunConfig};

/// Exact and numeric checks for invariant subgroup measures.
#[derive(Debug, Parser)]
#[command(name = "irslab", version)]
struct Cli {
    /// Seed for every generated test set and sample point.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Quadrature cells per axis for modular-function estimates.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Tolerance for the numeric check run by a `lie` subcommand.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Output file (a directory for `suite`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Subgroup lattice of a finite group file.
    Subgroups {
        #[arg(long)]
        group: PathBuf,
    },
    /// Mass transport check of a subgroup measure file. Exits 1 on any violation.
    MtpVerify {
        #[arg(long)]
        measure: PathBuf,
        /// Group file, required for measures on a finite group.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Discrete)]
        mode: Mode,
        /// Ball radius for `--mode graph`.
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Subgroups of a given index in the free group of a given rank, as coset tables.
    FreeEnumerate {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        index: usize,
        /// Attach a Graphviz rendering to every table.
        #[arg(long)]
        dot: bool,
    },
    /// Numeric checks on the Lie group catalog.
    Lie {
        #[command(subcommand)]
        command: LieCommand,
    },
    /// Runs the verification suite and writes one report per section into `--out`.
    Suite {
        /// Comma-separated section ids; all sections when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Summarizes a suite run directory.
    Report { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
enum LieCommand {
    /// Modular function estimates at an element or at seeded samples.
    Modular {
        #[arg(long)]
        group: String,
        /// Element in standard coordinates, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        element: Option<Vec<f64>>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Whether G/H carries a nonzero invariant measure.
    Admits {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Test-function integrals along a convergent family.
    Continuity {
        #[arg(long)]
        family: String,
    },
    /// Whether the limit of a family again admits an invariant measure.
    Closedness {
        #[arg(long)]
        family: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Discrete,
    Graph,
}

fn config(cli: &Cli, tolerance_key: Option<&str>) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::from_env()?;
    cfg.seed = cli.seed;
    if let Some(r) = cli.resolution {
        if r == 0 {
            return Err(CliError::input("resolution must be positive"));
        }
        cfg.resolution = r;
    }
    if let (Some(key), Some(t)) = (tolerance_key, cli.tolerance) {
        cfg.tolerances.insert(key.into(), t);
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> CliResult<i32> {
    let out = cli.out.as_deref();
    let outcome: Outcome = match &cli.command {
        Command::Subgroups { group } => commands::subgroups(&config(cli, None)?, group)?,
        Command::MtpVerify { measure, group, mode, radius } => {
            let mode = match mode {
                Mode::Discrete => MtpMode::Discrete,
                Mode::Graph => MtpMode::Graph,
            };
            commands::mtp_verify(measure, group.as_deref(), mode, *radius)?
        }
        Command::FreeEnumerate { rank, index, dot } => {
            commands::free_enumerate(&config(cli, None)?, *rank, *index, *dot)?
        }
        Command::Lie { command } => match command {
            LieCommand::Modular { group, element, samples } => {
                commands::lie_modular(&config(cli, Some("unimodular"))?, group, element.as_deref(), *samples)?
            }
            LieCommand::Admits { group, subgroup } => {
                commands::lie_admits(&config(cli, Some("admits"))?, group, subgroup)?
            }
            LieCommand::Continuity { family } => commands::lie_continuity(&config(cli, Some("continuity"))?, family)?,
            LieCommand::Closedness { family } => commands::lie_closedness(&config(cli, Some("admits"))?, family)?,
        },
        Command::Suite { only } => {
            let dir = out.ok_or_else(|| CliError::input("suite needs --out <dir>"))?;
            let sections = suite::run_suite(&config(cli, None)?, only, dir)?;
            let summary = report::summarize(dir)?;
            eprint!("{}", summary.text);
            let code = if sections.iter().all(|s| s.passed) { exit::OK } else { exit::VIOLATION };
            emit(&summary.value, None)?;
            return Ok(code);
        }
        Command::Report { dir } => {
            let summary = report::summarize(dir)?;
            eprint!("{}", summary.text);
            emit(&summary.value, out)?;
            return Ok(summary.code);
        }
    };
    emit(&outcome.report, out)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("irslab: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
