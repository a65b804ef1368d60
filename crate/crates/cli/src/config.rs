//! Run configuration: a flat `key = value` document merged with CLI flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::CliError;

/// Experiments exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Threebox,
    Weakvalue,
    Interferometer,
    ReadoutSweep,
    Fit,
    HomSweep,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Threebox,
        Command::Weakvalue,
        Command::Interferometer,
        Command::ReadoutSweep,
        Command::Fit,
        Command::HomSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Threebox => "threebox",
            Command::Weakvalue => "weakvalue",
            Command::Interferometer => "interferometer",
            Command::ReadoutSweep => "readout-sweep",
            Command::Fit => "fit",
            Command::HomSweep => "hom-sweep",
        }
    }

    /// Parameter keys accepted by this command, besides `command` and `output`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Threebox => &[],
            Command::Weakvalue => &["p_A"],
            Command::Interferometer => &["p_A", "G"],
            Command::ReadoutSweep => &[
                "p_A",
                "G",
                "grid",
                "trials",
                "seed",
                "background",
                "calibrate",
            ],
            Command::Fit => &["input"],
            Command::HomSweep => &[
                "p_A",
                "p_A1",
                "G",
                "grid",
                "step",
                "hwp4",
                "background_ratio",
                "kappa",
            ],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Validation(format!("unknown command {s:?}")))
    }
}

/// Resolved command plus its raw, not yet validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, String>,
}

/// Parses a `key = value` document. Blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("config line {}: expected `key = value`", n + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Validation(format!(
                "config line {}: empty key",
                n + 1
            )));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Validation(format!(
                "config line {}: duplicate key {k:?}",
                n + 1
            )));
        }
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

impl RunConfig {
    /// File values first, then flags on top.
    pub fn merge(
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut params = file;
        params.extend(flags);
        let command = params
            .remove("command")
            .ok_or_else(|| CliError::Validation("no command given".into()))?
            .parse::<Command>()?;
        let allowed = command.keys();
        if let Some(bad) = params
            .keys()
            .find(|k| k.as_str() != "output" && !allowed.contains(&k.as_str()))
        {
            return Err(CliError::Validation(format!(
                "parameter {bad:?} does not apply to {command}"
            )));
        }
        Ok(RunConfig { command, params })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn output(&self) -> Option<PathBuf> {
        self.raw("output").filter(|s| *s != "-").map(PathBuf::from)
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key).map(|v| parse_real(key, v)).transpose()
    }

    pub fn require_real(&self, key: &str) -> Result<f64, CliError> {
        self.real(key)?
            .ok_or_else(|| CliError::Validation(format!("missing parameter {key}")))
    }

    pub fn real_in(&self, key: &str, lo: f64, hi: f64) -> Result<Option<f64>, CliError> {
        match self.real(key)? {
            Some(x) if !(lo..=hi).contains(&x) => Err(CliError::Validation(format!(
                "{key} = {x} is outside [{lo}, {hi}]"
            ))),
            other => Ok(other),
        }
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|x| parse_real(key, x.trim()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()
    }

    pub fn grid(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key).map(|v| parse_grid(key, v)).transpose()
    }

    pub fn uint(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    CliError::Validation(format!("{key} = {v:?} is not a non-negative integer"))
                })
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(CliError::Validation(format!(
                "{key} = {v:?} is not true/false"
            ))),
        }
    }
}

fn parse_real(key: &str, v: &str) -> Result<f64, CliError> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::Validation(format!(
            "{key} = {v:?} is not a finite number"
        ))),
    }
}

/// `start:stop:step`, inclusive of `start` and of `stop` when it sits on the
/// lattice within 1e−9 steps. A single number is a one-point grid.
pub fn parse_grid(key: &str, spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [one] => Ok(vec![parse_real(key, one)?]),
        [start, stop, step] => {
            let (start, stop, step) = (
                parse_real(key, start)?,
                parse_real(key, stop)?,
                parse_real(key, step)?,
            );
            if step <= 0.0 || stop < start {
                return Err(CliError::Validation(format!(
                    "{key}: grid needs step > 0 and stop >= start"
                )));
            }
            let n = ((stop - start) / step + 1e-9).floor();
            if n > 10_000_000.0 {
                return Err(CliError::Validation(format!("{key}: grid too large")));
            }
            Ok((0..=n as u64).map(|i| start + step * i as f64).collect())
        }
        _ => Err(CliError::Validation(format!(
            "{key} = {spec:?}: expected start:stop:step"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_stop_on_lattice() {
        let g = parse_grid("G", "0.05:0.95:0.05").unwrap();
        assert_eq!(g.len(), 19);
        assert!((g[18] - 0.95).abs() < 1e-12);
        let g = parse_grid("G", "0:1:0.3").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(parse_grid("G", "0.29").unwrap(), vec![0.29]);
        let g = parse_grid("grid", "-20:10:0.05").unwrap();
        assert_eq!(g.len(), 601);
    }

    #[test]
    fn grid_errors() {
        assert!(parse_grid("G", "1:0:0.1").is_err());
        assert!(parse_grid("G", "0:1:0").is_err());
        assert!(parse_grid("G", "0:1").is_err());
        assert!(parse_grid("G", "a:1:0.1").is_err());
    }

    #[test]
    fn config_text_and_merge() {
        let file =
            parse_config_text("# run\ncommand = interferometer\np_A = -1\n\nG = 0.5\n").unwrap();
        let mut flags = BTreeMap::new();
        flags.insert("G".to_string(), "0.29".to_string());
        let cfg = RunConfig::merge(file, flags).unwrap();
        assert_eq!(cfg.command, Command::Interferometer);
        assert_eq!(cfg.real("G").unwrap(), Some(0.29));
        assert_eq!(cfg.real("p_A").unwrap(), Some(-1.0));
    }

    #[test]
    fn config_rejects_junk() {
        assert!(parse_config_text("p_A -1").is_err());
        assert!(parse_config_text("p_A = 1\np_A = 2").is_err());
        assert!(parse_config_text(" = 2").is_err());
        let mut m = BTreeMap::new();
        m.insert("command".to_string(), "threebox".to_string());
        m.insert("p_A".to_string(), "1".to_string());
        assert!(RunConfig::merge(m, BTreeMap::new()).is_err());
        assert!("bogus".parse::<Command>().is_err());
        assert!(RunConfig::merge(BTreeMap::new(), BTreeMap::new()).is_err());
    }

    #[test]
    fn typed_accessors() {
        let mut m = BTreeMap::new();
        m.insert("command".to_string(), "hom-sweep".to_string());
        m.insert("p_A".to_string(), "-0.72, -0.87".to_string());
        m.insert("G".to_string(), "nan".to_string());
        let cfg = RunConfig::merge(m, BTreeMap::new()).unwrap();
        assert_eq!(cfg.list("p_A").unwrap(), Some(vec![-0.72, -0.87]));
        assert!(cfg.real("G").is_err());
        assert_eq!(cfg.real("kappa").unwrap(), None);
    }
}
