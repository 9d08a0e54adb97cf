//! Flat `key = value` run configuration. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn normalise(key: &str) -> String {
    let key = key.trim();
    // `N` is the atom number; every other key is case-insensitive
    if key == "N" {
        return key.to_string();
    }
    key.to_ascii_lowercase().replace('_', "-")
}

impl Config {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "config line {}: expected key = value",
                    lineno + 1
                )));
            };
            let key = normalise(key);
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::usage(format!(
                    "config line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(Self { values })
    }

    /// Flag value if given, otherwise the parsed config entry. The entry is
    /// consumed either way so leftovers can be reported.
    pub fn pick<T>(&mut self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let entry = self.values.remove(key);
        if flag.is_some() {
            return Ok(flag);
        }
        entry
            .map(|v| {
                v.parse::<T>().map_err(|e| {
                    CliError::usage(format!("config key '{key}': cannot parse '{v}': {e}"))
                })
            })
            .transpose()
    }

    /// Errors on keys that no option of the command consumed.
    pub fn finish(self) -> CliResult<()> {
        if self.values.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.values.keys().map(String::as_str).collect();
            Err(CliError::usage(format!(
                "unknown config keys: {}",
                keys.join(", ")
            )))
        }
    }
}

/// Comma-separated list, e.g. `5,10,30`.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<T>()
                    .map_err(|e| format!("'{}': {e}", p.trim()))
            })
            .collect::<Result<Vec<T>, String>>()
            .map(List)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let mut cfg = Config::parse("omega = 2\n# comment\ng=0.1 # trailing\nN = 30\n").unwrap();
        assert_eq!(cfg.pick(Some(3.0), "omega").unwrap(), Some(3.0));
        assert_eq!(cfg.pick::<f64>(None, "g").unwrap(), Some(0.1));
        assert_eq!(cfg.pick::<usize>(None, "N").unwrap(), Some(30));
        assert_eq!(cfg.pick::<f64>(None, "delta").unwrap(), None);
        cfg.finish().unwrap();
    }

    #[test]
    fn rejects_bad_lines_and_leftovers() {
        assert_eq!(Config::parse("omega 2").unwrap_err().code, 2);
        assert_eq!(Config::parse("g=1\ng=2").unwrap_err().code, 2);
        let cfg = Config::parse("n_max = 8\nbogus = 1").unwrap();
        let err = cfg.finish().unwrap_err();
        assert!(err.message.contains("bogus") && err.message.contains("n-max"));
        let mut cfg = Config::parse("g = fast").unwrap();
        assert_eq!(cfg.pick::<f64>(None, "g").unwrap_err().code, 2);
    }

    #[test]
    fn lists() {
        assert_eq!(
            "5, 10,30".parse::<List<usize>>().unwrap(),
            List(vec![5, 10, 30])
        );
        assert!("5,x".parse::<List<usize>>().is_err());
    }
}
