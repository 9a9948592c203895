//! Flat `key = value` config files. Keys are long flag names; anything given
//! on the command line wins.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = vec![];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value", i + 1);
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        out.push((key, v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text).with_context(|| format!("in config {}", path.display()))
}

fn flag(cmd: &Command, key: &str) -> Option<(String, bool)> {
    cmd.get_arguments()
        .find(|a| a.get_long() == Some(key))
        .map(|a| (a.get_id().to_string(), matches!(a.get_action(), ArgAction::SetTrue)))
}

/// Extra arguments supplying config values that the command line left unset.
/// Keys belonging only to other subcommands are skipped.
pub fn extra_args(root: &Command, matches: &ArgMatches, entries: &[(String, String)]) -> Result<Vec<OsString>> {
    let Some((name, sub_m)) = matches.subcommand() else { return Ok(vec![]) };
    let sub = root.find_subcommand(name).expect("parsed subcommand exists");
    let mut out = vec![];
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let (m, found) = match flag(sub, key) {
            Some(f) => (sub_m, f),
            None => match flag(root, key) {
                Some(f) => (matches, f),
                None if root.get_subcommands().any(|c| flag(c, key).is_some()) => continue,
                None => bail!("unknown config key `{key}`"),
            },
        };
        let (id, is_switch) = found;
        if m.value_source(&id) == Some(ValueSource::CommandLine) {
            continue;
        }
        if is_switch {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => out.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => bail!("config key `{key}` expects true or false, got `{value}`"),
            }
        } else {
            out.push(format!("--{key}={value}").into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let got = parse("# box\nn_max = 350\n\nsign=positive # trailing\nout = \"./r\"\n").unwrap();
        assert_eq!(
            got,
            vec![("n-max".into(), "350".into()), ("sign".into(), "positive".into()), ("out".into(), "./r".into())]
        );
    }

    #[test]
    fn rejects_lines_without_equals() {
        assert!(parse("threads 8").is_err());
    }
}
