use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use thinseq_cli::{CliError, CliResult, Format, Status};

/// Thin interpolating sequences in the disk.
#[derive(Debug, Parser)]
#[command(name = "thinseq", version)]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the window constants over N and write one row per N.
    Analyze,
    /// Run verification suites and report PASS/FAIL per suite.
    Verify {
        /// Comma-separated suite ids, overriding `verify.suites`.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
    },
    /// Solve an interpolation problem on `interpolate.start..=interpolate.end`.
    Interpolate {
        /// CSV rows `index,re,im`; indices not listed are zero.
        #[arg(long)]
        targets: PathBuf,
    },
    /// Write the sequence points and their thinness profile.
    Generate,
}

fn run(cli: Cli) -> CliResult<Status> {
    let mut cfg = thinseq_cli::load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let format = cli.format.unwrap_or(cfg.output.format);
    let out = thinseq_cli::output_path(cli.out, &cfg);
    let exec = thinseq_cli::exec_for(cli.jobs)?;
    match cli.command {
        Command::Analyze => {
            let (bytes, status) = thinseq_cli::analyze(&cfg, format, exec)?;
            thinseq_cli::emit(out.as_deref(), &bytes)?;
            if status != Status::Ok {
                eprintln!("thinseq: some rows carry numerical errors (see row_error)");
            }
            Ok(status)
        }
        Command::Verify { suites } => {
            let ids = thinseq_cli::suite_list(&cfg, suites.as_deref())?;
            let reports = thinseq_cli::verify(&cfg, &ids, exec)?;
            thinseq_cli::emit(out.as_deref(), &thinseq_cli::render_suites(&reports, format))?;
            Ok(if reports.iter().all(|r| r.passed()) { Status::Ok } else { Status::SuiteFailure })
        }
        Command::Interpolate { targets } => {
            let ip = &cfg.interpolate;
            let values = thinseq_cli::read_targets(&targets, ip.start, ip.end)?;
            let report = thinseq_cli::interpolate(&cfg, &values, exec)?;
            thinseq_cli::emit(out.as_deref(), &thinseq_cli::render_interpolation(&report, format))?;
            Ok(Status::Ok)
        }
        Command::Generate => {
            let bytes = thinseq_cli::generate(&cfg, format, exec)?;
            thinseq_cli::emit(out.as_deref(), &bytes)?;
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("thinseq: {e}");
            ExitCode::from(CliError::exit_code(&e))
        }
    }
}
