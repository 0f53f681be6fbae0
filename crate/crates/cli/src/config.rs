//! Option files and the hash that identifies a run.
//!
//! A config file holds `key = value` lines; each becomes `--key value`
//! inserted right after the subcommand. Keys already given on the command
//! line are skipped, so the command line always wins.

use std::fs;

use clap::CommandFactory;
use digitlab::Error;
use sha2::{Digest, Sha256};

use crate::cli::Cli;

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Position right after the last subcommand name in `args`.
fn subcommand_end(args: &[String]) -> usize {
    let mut cmd = Cli::command();
    let mut end = 1;
    for (i, a) in args.iter().enumerate().skip(1) {
        let next = cmd.get_subcommands().find(|c| c.get_name() == a).cloned();
        if let Some(c) = next {
            end = i + 1;
            if c.get_subcommands().next().is_none() {
                break;
            }
            cmd = c;
        }
    }
    end
}

fn parse_lines(text: &str) -> Result<Vec<(String, String)>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('[') && line.ends_with(']') && !line.contains('=') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::InvalidInput(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        let v = v.trim().trim_matches('"').to_string();
        if k.is_empty() {
            return Err(Error::InvalidInput(format!("config line {}: empty key", i + 1)));
        }
        out.push((k, v));
    }
    Ok(out)
}

/// argv with the config file, if any, expanded into options.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, Error> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let mut tokens = Vec::new();
    for (k, v) in parse_lines(&text)? {
        if given(&args, &k) {
            continue;
        }
        match v.as_str() {
            "true" => tokens.push(format!("--{k}")),
            "false" => {}
            _ => {
                tokens.push(format!("--{k}"));
                if k == "interval" {
                    tokens.extend(v.split_whitespace().map(str::to_string));
                } else {
                    tokens.push(v);
                }
            }
        }
    }
    let at = subcommand_end(&args);
    let mut out = args[..at].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

/// The effective arguments without the program name and without the
/// output and config paths: what a run's results depend on.
pub fn canonical(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--out" || a == "--config" {
            skip = true;
        } else if !(a.starts_with("--out=") || a.starts_with("--config=")) {
            out.push(a.clone());
        }
    }
    out
}

/// SHA-256 over the canonical arguments, NUL separated.
pub fn hash(canon: &[String]) -> String {
    let mut h = Sha256::new();
    for a in canon {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn insertion_point() {
        assert_eq!(subcommand_end(&argv("digitlab --seed 3 digits -N 5")), 4);
        assert_eq!(subcommand_end(&argv("digitlab twisted gap-suite --systems 3")), 3);
        assert_eq!(subcommand_end(&argv("digitlab experiment digit-changes")), 3);
    }

    #[test]
    fn hash_ignores_output_path() {
        let a = hash(&canonical(&argv("digitlab digits -N 8 --out a.json")));
        let b = hash(&canonical(&argv("digitlab digits -N 8 --out=b.json --config c.cfg")));
        assert_eq!(a, b);
        assert_ne!(a, hash(&canonical(&argv("digitlab digits -N 9"))));
    }

    #[test]
    fn lines() {
        let kv = parse_lines("# comment\n[digits]\nn_max = 20\nsource = \"champernowne\"\n").unwrap();
        assert_eq!(kv, vec![("n-max".to_string(), "20".to_string()), ("source".to_string(), "champernowne".to_string())]);
        assert!(parse_lines("oops").is_err());
    }
}
