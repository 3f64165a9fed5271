//! Key-value run configuration files.
//!
//! One `key = value` pair per line; keys are the long flag names of the
//! subcommand (`alpha`, `C`, `n`, `seed`, ...). Blank lines and lines starting
//! with `#` are ignored. A file is applied by expanding it into `--key=value`
//! arguments placed before the command-line flags, so flags given on the
//! command line win.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", i + 1)));
        };
        let key = key.trim();
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("config line {}: invalid key {key:?}", i + 1)));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn to_args(pairs: &[(String, String)]) -> Vec<String> {
    pairs.iter().map(|(k, v)| format!("--{k}={v}")).collect()
}

pub fn render(command: &str, pairs: &[(String, String)]) -> String {
    let mut out = format!("# rhg {command}\n");
    for (k, v) in pairs {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

/// Returns the value of `--config` if present in `args`.
pub fn find_config_path(args: &[String]) -> Option<&str> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            return iter.next().map(String::as_str);
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Some(path);
        }
    }
    None
}

/// Splices the pairs of the config file named by `--config` in after the
/// subcommand name.
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = find_config_path(&args) else {
        return Ok(args);
    };
    if args.len() < 2 {
        return Ok(args);
    }
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|e| CliError::Io(format!("reading config {path}: {e}")))?;
    let extra = to_args(&parse(&text)?);
    let mut expanded = args[..2].to_vec();
    expanded.extend(extra);
    expanded.extend_from_slice(&args[2..]);
    Ok(expanded)
}
