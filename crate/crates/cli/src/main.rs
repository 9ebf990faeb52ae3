//! `alf-mass`: masses, curvature checks and exterior mode analysis for ALF
//! metrics.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Flags, Output, RunConfig};
use report::{Failure, EXIT_CONFIG};

/// Finds `--out` in raw arguments when flag parsing itself failed.
fn raw_out_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if let Some(p) = s.strip_prefix("--out=") {
            return Some(p.into());
        }
        if s == "--out" {
            return it.next().map(PathBuf::from);
        }
    }
    None
}

fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        },
    }
}

/// `--gamma <GAMMA>` becomes `gamma`.
fn flag_key(arg: &str) -> String {
    arg.split_whitespace().next().unwrap_or(arg).trim_start_matches('-').to_owned()
}

fn fail(f: &Failure, command: Option<&str>, out: Option<&Path>) -> ExitCode {
    eprintln!("alf-mass: {}", f.message);
    if let Err(e) = emit(out, &f.diagnostic(command)) {
        eprintln!("alf-mass: cannot write diagnostic: {e}");
    }
    ExitCode::from(f.exit_code as u8)
}

fn load(flags: Flags) -> Result<RunConfig, Failure> {
    let flags = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::io("config", e))?;
            flags.or(Flags::from_toml(&text)?)
        }
        None => flags,
    };
    RunConfig::from_flags(flags)
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let flags = match Flags::try_parse_from(&args) {
        Ok(f) => f,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let f = Failure {
                exit_code: EXIT_CONFIG,
                kind: "invalid-config",
                message: e.render().to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_owned(),
                key: e.get(clap::error::ContextKind::InvalidArg).map(|v| flag_key(&v.to_string())),
                table: Vec::new(),
            };
            let _ = emit(raw_out_path(&args).as_deref(), &f.diagnostic(None));
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let early_out = flags.out.clone();
    let early_command = flags.command.map(|c| c.name());
    let cfg = match load(flags) {
        Ok(c) => c,
        Err(f) => return fail(&f, early_command, early_out.as_deref()),
    };
    let command = cfg.command.name();
    let out = cfg.out_path.as_deref();
    match commands::run(&cfg) {
        Ok(report) => {
            let text = match cfg.output {
                Output::Json => report.json(command),
                Output::Csv => report.csv(),
                Output::Table => report.table(),
            };
            match emit(out, &text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&Failure::io("out", e), Some(command), None),
            }
        }
        Err(f) => fail(&f, Some(command), out),
    }
}
