//! Calibrated constants frozen to disk. The file is structured text with a
//! hash header binding it to the config it was produced under; verify
//! refuses to run suites against fixtures from a different config.

use crate::config::Config;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const FIXTURES_HEADER: &str = "# gegenbauer fixtures v1";

/// Default fixtures location relative to the working directory; overridden
/// by `GEGENBAUER_FIXTURES` or `--fixtures`.
pub const DEFAULT_FIXTURES_PATH: &str = "fixtures/default.fixtures";

#[derive(Debug, Clone, PartialEq)]
pub struct Fixtures {
    pub config_hash: String,
    values: BTreeMap<String, f64>,
}

#[derive(Debug)]
pub enum FixturesError {
    Missing(String),
    Parse(String),
    HashMismatch { expected: String, found: String },
    MissingKey(String),
}

impl std::fmt::Display for FixturesError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixturesError::Missing(p) => write!(f, "fixtures file not found: {p}"),
            FixturesError::Parse(s) => write!(f, "fixtures parse error: {s}"),
            FixturesError::HashMismatch { expected, found } => write!(
                f,
                "fixtures were produced under a different config (hash {found}, active config {expected}); re-run calibrate"
            ),
            FixturesError::MissingKey(k) => write!(f, "fixtures missing key {k}; re-run calibrate"),
        }
    }
}

impl Fixtures {
    pub fn new(config: &Config) -> Self {
        Self {
            config_hash: config.hash(),
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Result<f64, FixturesError> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| FixturesError::MissingKey(key.to_string()))
    }

    /// Short identifier used in reports.
    pub fn version(&self) -> String {
        self.config_hash.chars().take(12).collect()
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{FIXTURES_HEADER}");
        let _ = writeln!(s, "config-hash = {}", self.config_hash);
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k} = {v:.17e}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, FixturesError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(l) if l.trim() == FIXTURES_HEADER => {}
            other => {
                return Err(FixturesError::Parse(format!(
                    "bad header: {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut config_hash = String::new();
        let mut values = BTreeMap::new();
        for raw in lines {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| FixturesError::Parse(format!("missing '=': {line}")))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "config-hash" {
                config_hash = v.to_string();
            } else {
                let value: f64 = v
                    .parse()
                    .map_err(|_| FixturesError::Parse(format!("bad number for {k}: {v}")))?;
                values.insert(k.to_string(), value);
            }
        }
        if config_hash.is_empty() {
            return Err(FixturesError::Parse("missing config-hash".into()));
        }
        Ok(Self {
            config_hash,
            values,
        })
    }

    pub fn load(path: &Path, config: &Config) -> Result<Self, FixturesError> {
        let text = std::fs::read_to_string(path)
            .map_err(|_| FixturesError::Missing(path.display().to_string()))?;
        let fx = Self::parse(&text)?;
        let expected = config.hash();
        if fx.config_hash != expected {
            return Err(FixturesError::HashMismatch {
                expected,
                found: fx.config_hash,
            });
        }
        Ok(fx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialize_parse_round_trip() {
        let cfg = Config::default();
        let mut fx = Fixtures::new(&cfg);
        fx.set("C_cap", 1.25);
        fx.set("c_star", 0.1234567890123456789);
        let text = fx.serialize();
        let parsed = Fixtures::parse(&text).unwrap();
        assert_eq!(fx, parsed);
        // byte-identical reserialization
        assert_eq!(text, parsed.serialize());
    }

    #[test]
    fn hash_mismatch_detected() {
        let cfg = Config::default();
        let mut other = Config::default();
        other.lambda = 0.1;
        let fx = Fixtures::new(&other);
        let dir = std::env::temp_dir().join("gegenbauer-fixtures-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("f.fixtures");
        std::fs::write(&path, fx.serialize()).unwrap();
        assert!(matches!(
            Fixtures::load(&path, &cfg),
            Err(FixturesError::HashMismatch { .. })
        ));
    }
}
