mod cli;
mod commands;
mod input;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use kernelforge::par::ExecMode;
use kernelforge::Error;

use cli::{Cli, Command};
use report::EvalReport;

/// Usage errors: bad flags, unparsable input (sysexits EX_USAGE).
const EXIT_USAGE: u8 = 64;
/// Unreadable or unwritable files (sysexits EX_IOERR).
const EXIT_IO: u8 = 74;

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Domain(_) | Error::Divisibility { .. } | Error::Index { .. }) => 2,
            Failure::Core(Error::NonConvergence { .. } | Error::Quadrature { .. }) => 3,
            Failure::Core(Error::Conditioning { .. }) => 4,
            Failure::Core(Error::Parse(_)) | Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) => format!("usage: {m}"),
            Failure::Io(m) => format!("i/o: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let mode = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Kernel(a) => commands::kernel(a, mode),
        Command::NormExpand(a) => commands::norm_expand(a, mode),
        Command::Sigma(a) => commands::sigma_cmd(a),
        Command::Verify(a) => commands::verify(a, mode),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.exit_code());
        }
    };
    let echo = std::env::args().skip(1).collect();
    let report = EvalReport::new(echo, outcome.parameters, outcome.items, start.elapsed().as_secs_f64());
    let mut out = io::stdout().lock();
    if let Err(e) = report.write(cli.format, &mut out).and_then(|_| out.flush()) {
        eprintln!("error: i/o: {e}");
        return ExitCode::from(EXIT_IO);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
