//! Command-line front end: `mtf <command> --config <path> [--out <dir>]
//! [--emit-unscaled]` with commands `eos-table`, `solve`, `scan`, `selftest`.

pub mod commands;
pub mod config;
pub mod selftest;

pub use commands::{EXIT_CONFIG, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_PARTIAL};
pub use config::RunConfig;

use std::path::PathBuf;

const USAGE: &str = "usage: mtf <eos-table|solve|scan|selftest> [--config <path>] [--out <dir>] [--emit-unscaled]";

/// Parse arguments, load the configuration, dispatch; returns the exit code.
pub fn main_entry(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_CONFIG
        }
    }
}

fn dispatch(args: &[String]) -> crate::Result<i32> {
    let mut command = None;
    let mut config_path: Option<PathBuf> = None;
    let mut out_dir = PathBuf::from(".");
    let mut emit_unscaled = false;

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => {
                let path = it
                    .next()
                    .ok_or_else(|| crate::MtfError::Config("--config needs a path".into()))?;
                config_path = Some(PathBuf::from(path));
            }
            "--out" => {
                let path =
                    it.next().ok_or_else(|| crate::MtfError::Config("--out needs a path".into()))?;
                out_dir = PathBuf::from(path);
            }
            "--emit-unscaled" => emit_unscaled = true,
            "--help" | "-h" => {
                println!("{USAGE}");
                return Ok(EXIT_OK);
            }
            other if command.is_none() && !other.starts_with('-') => {
                command = Some(other.to_string());
            }
            other => {
                return Err(crate::MtfError::Config(format!(
                    "unexpected argument `{other}`\n{USAGE}"
                )));
            }
        }
    }

    let command =
        command.ok_or_else(|| crate::MtfError::Config(format!("missing command\n{USAGE}")))?;

    let cfg = match &config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                crate::MtfError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RunConfig::parse(&text)?
        }
        None if command == "selftest" => RunConfig::default(),
        None => return Err(crate::MtfError::Config("--config <path> is required".into())),
    };

    match command.as_str() {
        "eos-table" => commands::run_eos_table(&cfg, &out_dir),
        "solve" => commands::run_solve(&cfg, &out_dir, emit_unscaled),
        "scan" => commands::run_scan(&cfg, &out_dir),
        "selftest" => commands::run_selftest(&cfg),
        other => Err(crate::MtfError::Config(format!("unknown command `{other}`\n{USAGE}"))),
    }
}
