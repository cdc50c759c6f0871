//! Optional `key = value` configuration merged into the argument list.
//!
//! Each key becomes `--key value`, inserted right after the subcommand so
//! that flags given on the command line (which come later) override it.

use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

pub fn parse_config(path: &Path, text: &str) -> CliResult<Vec<String>> {
    let mut args = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| CliError::Config { path: path.to_path_buf(), line: n + 1, message: message.into() };
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() {
            return Err(err("empty key"));
        }
        if key == "config" || key == "error-json" {
            return Err(err("key not allowed in a config file"));
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value.to_string());
            }
        }
    }
    Ok(args)
}

/// Path given with `--config`, and the argument list without it.
pub fn take_config(argv: &[String]) -> (Option<PathBuf>, Vec<String>) {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = it.next().map(PathBuf::from);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        } else {
            rest.push(a.clone());
        }
    }
    (path, rest)
}

/// Inserts `extra` after the first token naming a subcommand.
pub fn merge(argv: &[String], extra: Vec<String>, commands: &[String]) -> Vec<String> {
    let pos = argv.iter().skip(1).position(|a| commands.contains(a)).map(|p| p + 2).unwrap_or(argv.len());
    let mut out = argv[..pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[pos..]);
    out
}
