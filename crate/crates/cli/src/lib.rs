//! Script front end for the `lochom` engine: declarations, commands,
//! canonical JSON reports and certificate re-verification.

pub mod commands;
pub mod error;
pub mod report;
pub mod script;
pub mod session;
pub mod verify;

pub use commands::{run, CommandLine, Format, Op, Options};
pub use error::{CommandError, ErrorKind, Exit, ScriptError};
pub use report::{Certificate, Report};
pub use script::SessionScript;
pub use session::{parse, Session};
pub use verify::{verify_report, VerifyError, VerifySummary};

/// Parses a script and runs each of its commands in order.
pub fn execute(src: &str) -> Result<Vec<Report>, CommandError> {
    let script = script::parse_syntax(src)?;
    let session = Session::build(&script)?;
    script.commands().map(|c| run(&session, c)).collect()
}

/// A report in the format its command asked for (JSON by default).
pub fn render(report: &Report, format: Option<Format>) -> String {
    match format {
        Some(Format::Table) => report.to_table(),
        _ => report.to_json(),
    }
}
