//! `indisc`: batch front end for the indisc-core library.

mod args;
mod check;
mod extract;
mod maps;
mod qftp;
mod report;
mod tp2;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use report::{Failure, Report};

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Qftp(c) => qftp::run(c),
        Command::Maps(c) => maps::run(c),
        Command::Extract(c) => extract::run(c),
        Command::Check(c) => check::run(c),
        Command::Tp2(c) => tp2::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = match cli.format {
                Format::Text => out.write_all(report.render_text().as_bytes()),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.render_json()).unwrap()),
            };
            ExitCode::from(if report.violation.is_some() { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
