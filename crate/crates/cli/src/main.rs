//! `qsfrac`: command-line front-end for the qs-fractal library.
//!
//! Every subcommand prints a JSON envelope
//! `{"command", "inputs", "result", "backend"}` or, with `--format csv`, a
//! table. Exit status is 0 on success, 2 on malformed arguments and 1 when
//! the arguments are well formed but outside an operation's domain.

mod args;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use qs_fractal::QsError;

use crate::args::Cli;

/// Failure of a command, tagged with the argument it concerns.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { arg: &'static str, source: QsError },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Domain { arg, source } => write!(f, "{arg}: {source}"),
        }
    }
}

/// Attaches an argument name to a library error.
pub fn on(arg: &'static str) -> impl Fn(QsError) -> CliError {
    move |source| CliError::Domain { arg, source }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let rendered = e.render().to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("qsfrac: {line}");
            return ExitCode::from(2);
        }
    };
    let (name, inputs, report) = match commands::run(&cli) {
        Ok(done) => done,
        Err(e) => {
            eprintln!("qsfrac: error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Some(path) = output::find_non_finite(&report.result, "result") {
        eprintln!("qsfrac: error: {path}: non-finite value in output");
        return ExitCode::from(1);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match output::write(&mut out, cli.format, &name, &inputs, &report).and_then(|_| out.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsfrac: error: writing output: {e}");
            ExitCode::from(1)
        }
    }
}
