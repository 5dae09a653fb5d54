use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qfisher::io::{parse_problem, run_command, Command, Overrides};
use qfisher::Error;

/// Quantum Fisher information of channel outputs, maximized over inputs.
#[derive(Debug, Parser)]
#[command(name = "qfisher", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// TOML problem file.
    #[arg(long)]
    problem: PathBuf,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    restarts: Option<usize>,

    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    max_iters: Option<usize>,

    /// Also write the iteration trace as CSV.
    #[arg(long)]
    trace_csv: Option<PathBuf>,

    /// Suppress warnings on stderr.
    #[arg(long)]
    quiet: bool,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_numeric() {
        3
    } else {
        2
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let text = std::fs::read_to_string(&cli.problem)?;
    let mut file = parse_problem(&text)?;
    file.apply_overrides(&Overrides {
        seed: cli.seed,
        restarts: cli.restarts,
        tol: cli.tol,
        max_iters: cli.max_iters,
    });
    let report = run_command(cli.command, &file)?;
    if let Some(path) = &cli.trace_csv {
        report.save_trace_csv(path)?;
    }
    if !cli.quiet {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    print!("{}", report.to_json());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
