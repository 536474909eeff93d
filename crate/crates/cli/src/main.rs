mod args;
mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, Output, INVALID_GRAPH, USAGE};
use report::RunReport;

/// Runs the command and returns the bytes to emit and the exit code.
fn run(cli: &Cli, argv: Vec<String>) -> Result<(String, u8), Failure> {
    let start = Instant::now();
    let report = RunReport::new(argv);
    let out = match &cli.command {
        Command::Generate(a) => commands::generate(a)?,
        Command::Search(a) => commands::search(a, report)?,
        Command::Oracle(a) => commands::oracle(a, report)?,
        Command::Compare(a) => commands::compare(a, report)?,
        Command::Decide(a) => commands::decide(a, report)?,
        Command::Dominance(a) => commands::dominance(a, report)?,
    };
    Ok(match out {
        Output::Text(text) => (text, 0),
        Output::Report(mut report, code) => {
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            (report.to_json(), code)
        }
    })
}

fn fail(code: u8, message: &str) -> ExitCode {
    let line = message.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ");
    eprintln!("error[{code}]: {line}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            return fail(USAGE, "missing subcommand; see --help");
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return fail(USAGE, first.trim_start_matches("error: "));
        }
    };
    match run(&cli, argv[1..].to_vec()) {
        Ok((body, code)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &body) {
                    return fail(INVALID_GRAPH, &format!("cannot write {}: {e}", path.display()));
                }
            } else if !cli.quiet {
                let _ = std::io::stdout().write_all(body.as_bytes());
            }
            ExitCode::from(code)
        }
        Err(f) => fail(f.code, &f.message),
    }
}
