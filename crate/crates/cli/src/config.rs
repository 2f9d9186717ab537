//! Parameter resolution: command-line flags, then an optional TOML config
//! file whose keys are the long flag names, then built-in defaults.

use std::collections::BTreeMap;
use std::ffi::OsStr;
use std::path::Path;

use crate::error::{CliError, Result};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "REGIME_CONFIG";

pub const KNOWN_KEYS: &[&str] = &[
    "alpha", "c", "beta", "B", "psi", "B-over-psi", "theta", "x-star", "x-hat", "alpha-star",
    "y", "z", "n", "reps", "seed", "threads",
];

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, toml::Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        for key in table.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown key `{key}`")));
            }
        }
        Ok(Self {
            values: table.into_iter().collect(),
        })
    }

    /// Explicit path first, then the value of [`CONFIG_ENV`], else empty.
    pub fn discover(explicit: Option<&Path>, from_env: Option<&OsStr>) -> Result<Self> {
        if let Some(path) = explicit {
            return Self::load(path);
        }
        match from_env {
            Some(path) if !path.is_empty() => Self::load(Path::new(path)),
            _ => Ok(Self::default()),
        }
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(CliError::Config(format!("`{key}` must be a number, got {other}"))),
        }
    }

    pub fn count(&self, key: &str) -> Result<Option<u64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(other) => Err(CliError::Config(format!(
                "`{key}` must be a non-negative integer, got {other}"
            ))),
        }
    }
}

/// Merges one flag with the config file and a default.
pub struct Resolver<'a> {
    pub file: &'a FileConfig,
}

impl Resolver<'_> {
    pub fn real(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64> {
        Ok(self.real_opt(key, flag)?.unwrap_or(default))
    }

    pub fn real_opt(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>> {
        let value = match flag {
            Some(v) => Some(v),
            None => self.file.real(key)?,
        };
        match value {
            Some(v) if !v.is_finite() => Err(CliError::Usage(format!("--{key} must be finite"))),
            other => Ok(other),
        }
    }

    pub fn count_opt(&self, key: &str, flag: Option<u64>) -> Result<Option<u64>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.count(key),
        }
    }

    pub fn count(&self, key: &str, flag: Option<u64>, default: u64) -> Result<u64> {
        Ok(self.count_opt(key, flag)?.unwrap_or(default))
    }
}
