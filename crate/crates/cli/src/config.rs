//! Flat key-value config files. Each key becomes the long flag of the same
//! name, inserted after the subcommand so that command-line flags win.

use std::path::Path;

pub fn config_args(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let table: toml::Table = text.parse().map_err(|e| format!("config {}: {e}", path.display()))?;
    let mut args = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => args.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => args.extend([flag, s]),
            toml::Value::Integer(i) => args.extend([flag, i.to_string()]),
            toml::Value::Float(f) => args.extend([flag, f.to_string()]),
            other => return Err(format!("config key '{key}': expected a scalar, got {}", other.type_str())),
        }
    }
    Ok(args)
}

/// Finds `--config PATH` or `--config=PATH` before any subcommand argument.
pub fn find_config(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Inserts `extra` right after the subcommand token.
pub fn splice(args: &[String], subcommands: &[&str], extra: Vec<String>) -> Vec<String> {
    match args.iter().position(|a| subcommands.contains(&a.as_str())) {
        Some(i) => {
            let mut out = args[..=i].to_vec();
            out.extend(extra);
            out.extend_from_slice(&args[i + 1..]);
            out
        }
        None => args.to_vec(),
    }
}
