//! `carbon` command-line front end: argument parsing, dispatch to
//! carbon-core, and report emission.
//!
//! Exit codes: 0 on success, 2 on usage, validation or load errors, 3 when
//! `--strict` is set and a break-even is never reached.

use std::fmt;

pub mod inputs;
pub mod report;

mod commands;

pub use report::{emit_report, emit_series, Format, Report, ResultGroup, SeriesPoint, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NEVER_AMORTIZES: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<carbon_core::Error> for CliError {
    fn from(e: carbon_core::Error) -> Self {
        CliError(e.to_string())
    }
}

/// Result of running the CLI on an argument list.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (without the program name) and runs the subcommand.
pub fn execute_command(argv: &[String]) -> (i32, Report) {
    let run = commands::execute(argv);
    (run.code, run.report)
}

/// Runs the CLI and renders what it would print.
pub fn run(argv: &[String]) -> Output {
    let run = commands::execute(argv);
    if let Some(text) = run.usage {
        return if run.code == EXIT_OK {
            Output {
                code: run.code,
                stdout: text,
                stderr: String::new(),
            }
        } else {
            Output {
                code: run.code,
                stdout: String::new(),
                stderr: text,
            }
        };
    }
    if let Some(e) = &run.report.error {
        return Output {
            code: run.code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        };
    }
    if run.series {
        return match &run.report.series {
            Some(points) => Output {
                code: run.code,
                stdout: emit_series(points),
                stderr: String::new(),
            },
            None => Output {
                code: EXIT_INVALID,
                stdout: String::new(),
                stderr: "error: --series is only available for pareto and trend\n".into(),
            },
        };
    }
    let stderr = if run.code == EXIT_NEVER_AMORTIZES {
        "error: embodied carbon never amortizes\n".to_string()
    } else {
        String::new()
    };
    Output {
        code: run.code,
        stdout: emit_report(&run.report, run.format),
        stderr,
    }
}
