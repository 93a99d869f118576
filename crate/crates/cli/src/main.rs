use std::fs;
use std::io::Write;
use std::process::ExitCode;

use lochom_cli::{render, run, session::Session, verify_report, CommandError, CommandLine, Exit, Format, VerifyError};

const USAGE: &str = "\
usage:
  lochom run SCRIPT [--format json|table]
  lochom OP ARGS... --script SCRIPT [--window lo..hi] [--depth n] [--smax n] [--nmax n]
         [--grid SxT] [--maxsummand N] [--k n] [--bound n] [--power n] [--format json|table] [--out path]
  lochom verify REPORT
  lochom fmt SCRIPT

ops: koszul wpr-check lhom lderived lcompare complete? homcomplete ctensor ext exthat
     ml-cert adams-e2 selfdual dual";

fn read(path: &str) -> Result<String, CommandError> {
    fs::read_to_string(path).map_err(|e| CommandError::input(format!("{path}: {e}")))
}

/// Writes to stdout; a closed pipe (`lochom run x | head`) is not an error.
fn say(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn emit(text: &str, out: Option<&str>) -> Result<(), CommandError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CommandError::input(format!("{p}: {e}"))),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn load(path: &str) -> Result<(lochom_cli::SessionScript, Session), CommandError> {
    let script = lochom_cli::script::parse_syntax(&read(path)?)?;
    let session = Session::build(&script)?;
    Ok((script, session))
}

fn run_one(session: &Session, cmd: &CommandLine, format: Option<Format>) -> Result<Exit, CommandError> {
    let report = run(session, cmd)?;
    emit(&render(&report, cmd.opts.format.or(format)), cmd.opts.out.as_deref())?;
    for m in &report.status.messages {
        eprintln!("{}: {m}", cmd.op.name());
    }
    Ok(report.exit())
}

fn main_inner(args: &[String]) -> Result<Exit, CommandError> {
    match args.first().map(String::as_str) {
        None | Some("-h") | Some("--help") | Some("help") => {
            say(&format!("{USAGE}\n"));
            Ok(Exit::Ok)
        }
        Some("verify") => {
            let [_, path] = args else { return Err(CommandError::input("usage: lochom verify REPORT")) };
            match verify_report(&read(path)?) {
                Ok(s) => {
                    say(&format!("PASS: {} certificate(s), {} matrix cell(s) recomputed\n", s.certificates, s.cells));
                    Ok(Exit::Ok)
                }
                Err(e @ VerifyError::RankMismatch { .. }) => {
                    say(&format!("FAIL: {e}\n"));
                    Ok(Exit::Mismatch)
                }
                Err(e) => Err(CommandError::input(e.to_string())),
            }
        }
        Some("fmt") => {
            let [_, path] = args else { return Err(CommandError::input("usage: lochom fmt SCRIPT")) };
            let (script, _) = load(path)?;
            say(&script.to_string());
            Ok(Exit::Ok)
        }
        Some("run") => {
            let (path, format) = match &args[1..] {
                [p] => (p, None),
                [p, f, v] if f == "--format" => (p, Some(if v == "table" { Format::Table } else { Format::Json })),
                _ => return Err(CommandError::input("usage: lochom run SCRIPT [--format json|table]")),
            };
            let (script, session) = load(path)?;
            let mut worst = Exit::Ok;
            for cmd in script.commands() {
                let exit = match run_one(&session, cmd, format) {
                    Ok(e) => e,
                    Err(e) => {
                        eprintln!("{}: {e}", cmd.op.name());
                        e.exit
                    }
                };
                worst = worst.max(exit);
            }
            Ok(worst)
        }
        Some(_) => {
            let mut words: Vec<&str> = Vec::new();
            let mut script: Option<String> = None;
            let mut it = args.iter();
            while let Some(a) = it.next() {
                if a == "--script" {
                    script = it.next().cloned();
                } else if let Some(p) = a.strip_prefix("--script=") {
                    script = Some(p.to_string());
                } else {
                    words.push(a);
                }
            }
            let path = script.ok_or_else(|| CommandError::input("missing --script SCRIPT"))?;
            let cmd = CommandLine::from_words(&words).map_err(CommandError::input)?;
            let (_, session) = load(&path)?;
            run_one(&session, &cmd, None)
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let exit = main_inner(&args).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit
    });
    ExitCode::from(exit.code() as u8)
}
