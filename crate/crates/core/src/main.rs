use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use specint::app::{self, tables, AppError, Backend, Report};

#[derive(Parser)]
#[command(name = "specint", version, about = "Spectral integration for linear boundary value problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print error / overshoot as CSV.
    Solve {
        file: PathBuf,
        /// Report setup and solve times on stderr.
        #[arg(long)]
        time: bool,
        /// Exit with status 1 if the error (or overshoot) exceeds this.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        backend: Option<Backend>,
    },
    /// Reproduce a table: 1a, 1b, 1c, 1d, 1e, 3 or 4.
    Tables { id: String },
    /// Singular spectrum of each factor's banded system.
    Diag {
        file: PathBuf,
        /// Grid order; defaults to the file's single-grid `m`.
        #[arg(long)]
        m: Option<usize>,
    },
}

fn load(file: &PathBuf) -> Result<app::ProblemSpec, AppError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| AppError::Input(format!("{}: {e}", file.display())))?;
    app::parse_problem(&text).map_err(|e| match e {
        AppError::Parse { line, msg } => AppError::Input(format!("{}:{line}: {msg}", file.display())),
        e => e,
    })
}

fn execute(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Solve { file, time, tol, backend } => {
            let mut spec = load(&file)?;
            if let Some(b) = backend {
                spec = spec.with_backend(b)?;
            }
            let report: Report = app::run(&spec, time)?;
            println!("{}", Report::CSV_HEADER);
            println!("{}", report.csv_row());
            if let Some(t) = &report.timing {
                eprintln!("{}", app::describe_timing(t));
            }
            if let Some(tol) = tol {
                let value = report
                    .headline()
                    .ok_or_else(|| AppError::Input("--tol needs an [exact] section".into()))?;
                if value.is_nan() || value > tol {
                    eprintln!("tolerance exceeded: {value:e} > {tol:e}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Tables { id } => tables::reproduce(&id, std::io::stdout().lock())?,
        Command::Diag { file, m } => {
            let spec = load(&file)?;
            app::diag(&spec, m, std::io::stdout().lock(), std::io::stderr().lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(AppError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
