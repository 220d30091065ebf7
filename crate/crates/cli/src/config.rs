//! Layered configuration: defaults, then a TOML file, then flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MZV_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub precision: u32,
    pub truncation: usize,
    pub db: Option<PathBuf>,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Self { precision: 50, truncation: 8, db: None, format: Format::Text }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    precision: Option<u32>,
    truncation: Option<usize>,
    db: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("precision must be at least 15 digits (got {0})")]
    Precision(u32),
    #[error("truncation must be at most 12 (got {0})")]
    Truncation(usize),
}

/// Overrides taken from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub truncation: Option<usize>,
    pub db: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Config {
    /// Reads `file` if given, else the file named by `MZV_CONFIG` if set.
    pub fn load(file: Option<&Path>, overrides: &Overrides) -> Result<Self, ConfigError> {
        let from_env = std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        let path = file.map(Path::to_path_buf).or(from_env);
        let mut cfg = Config::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path).map_err(|source| ConfigError::Read { path: path.clone(), source })?;
            let fc: FileConfig =
                toml::from_str(&text).map_err(|e| ConfigError::Parse { path: path.clone(), message: e.to_string() })?;
            cfg.precision = fc.precision.unwrap_or(cfg.precision);
            cfg.truncation = fc.truncation.unwrap_or(cfg.truncation);
            cfg.format = fc.format.unwrap_or(cfg.format);
            // a relative db path is taken relative to the config file
            cfg.db = fc.db.map(|db| match path.parent() {
                Some(dir) if db.is_relative() => dir.join(db),
                _ => db,
            });
        }
        if let Some(p) = overrides.precision {
            cfg.precision = p;
        }
        if let Some(t) = overrides.truncation {
            cfg.truncation = t;
        }
        if let Some(db) = &overrides.db {
            cfg.db = Some(db.clone());
        }
        if let Some(f) = overrides.format {
            cfg.format = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.precision < 15 {
            return Err(ConfigError::Precision(self.precision));
        }
        if self.truncation > 12 {
            return Err(ConfigError::Truncation(self.truncation));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mzv.toml");
        std::fs::write(&path, "precision = 40\ntruncation = 6\ndb = \"rel.jsonl\"\nformat = \"json\"\n").unwrap();
        let cfg = Config::load(Some(&path), &Overrides::default()).unwrap();
        assert_eq!(cfg.precision, 40);
        assert_eq!(cfg.truncation, 6);
        assert_eq!(cfg.db, Some(dir.path().join("rel.jsonl")));
        assert_eq!(cfg.format, Format::Json);
        let cfg = Config::load(Some(&path), &Overrides { precision: Some(60), ..Default::default() }).unwrap();
        assert_eq!(cfg.precision, 60);
    }

    #[test]
    fn invalid_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "precision = 10\n").unwrap();
        assert!(matches!(Config::load(Some(&path), &Overrides::default()), Err(ConfigError::Precision(10))));
        std::fs::write(&path, "colour = \"red\"\n").unwrap();
        assert!(matches!(Config::load(Some(&path), &Overrides::default()), Err(ConfigError::Parse { .. })));
        let over = Overrides { truncation: Some(13), ..Default::default() };
        assert!(matches!(Config::load(Some(&path.with_extension("none")), &over), Err(ConfigError::Read { .. })));
    }
}
