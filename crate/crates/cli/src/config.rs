//! Line-oriented `key = value` configuration shared by the verify and
//! calibrate commands. The canonical serialization of the config is what
//! the fixtures hash covers.

use gegenbauer_core::GegenbauerParams;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub lambda: f64,
    pub regime_constant: f64,
    pub seed: u64,
    pub tail_tol: f64,
    /// radius grid: (min, max, count)
    pub radius_grid: (f64, f64, usize),
    /// x sweep grid: (lo, hi, count)
    pub x_grid: (f64, f64, usize),
}

impl Default for Config {
    fn default() -> Self {
        Self {
            lambda: 0.25,
            regime_constant: 1.0,
            seed: 20240801,
            tail_tol: 1e-12,
            radius_grid: (1e-3, 10.0, 32),
            x_grid: (0.0, 6.0, 25),
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Parse(String),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "config io error: {e}"),
            ConfigError::Parse(s) => write!(f, "config parse error: {s}"),
            ConfigError::Invalid(s) => write!(f, "invalid config: {s}"),
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Parse(format!("line {}: missing '='", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let fl = |v: &str| -> Result<f64, ConfigError> {
                v.parse()
                    .map_err(|_| ConfigError::Parse(format!("line {}: bad number {v}", lineno + 1)))
            };
            match key {
                "lambda" => cfg.lambda = fl(value)?,
                "regime_constant" | "c" => cfg.regime_constant = fl(value)?,
                "seed" => {
                    cfg.seed = value.parse().map_err(|_| {
                        ConfigError::Parse(format!("line {}: bad seed {value}", lineno + 1))
                    })?
                }
                "tail_tol" => cfg.tail_tol = fl(value)?,
                "radius_grid" => cfg.radius_grid = parse_log_grid(value, lineno + 1)?,
                "x_grid" => cfg.x_grid = parse_lin_grid(value, lineno + 1)?,
                other => {
                    return Err(ConfigError::Parse(format!(
                        "line {}: unknown key {other}",
                        lineno + 1
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        GegenbauerParams::new(self.lambda, self.regime_constant)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.radius_grid.2 < 16 {
            return Err(ConfigError::Invalid(
                "radius_grid needs at least 16 points".into(),
            ));
        }
        if self.x_grid.2 < 2 {
            return Err(ConfigError::Invalid("x_grid needs at least 2 points".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> GegenbauerParams {
        GegenbauerParams::new(self.lambda, self.regime_constant).expect("validated")
    }

    pub fn radius_grid(&self) -> gegenbauer_core::maximal::RadiusGrid {
        let (min, max, n) = self.radius_grid;
        gegenbauer_core::maximal::RadiusGrid::log_spaced(min, max, n).expect("validated")
    }

    pub fn x_grid_points(&self) -> Vec<f64> {
        let (lo, hi, n) = self.x_grid;
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Canonical serialization; the fixtures hash is computed over exactly
    /// this text.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "lambda = {:.17e}", self.lambda);
        let _ = writeln!(s, "regime_constant = {:.17e}", self.regime_constant);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "tail_tol = {:.17e}", self.tail_tol);
        let _ = writeln!(
            s,
            "radius_grid = log:{:.17e}:{:.17e}:{}",
            self.radius_grid.0, self.radius_grid.1, self.radius_grid.2
        );
        let _ = writeln!(
            s,
            "x_grid = lin:{:.17e}:{:.17e}:{}",
            self.x_grid.0, self.x_grid.1, self.x_grid.2
        );
        s
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_log_grid(v: &str, line: usize) -> Result<(f64, f64, usize), ConfigError> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 4 || parts[0] != "log" {
        return Err(ConfigError::Parse(format!(
            "line {line}: expected log:<min>:<max>:<count>, got {v}"
        )));
    }
    Ok((
        parts[1]
            .parse()
            .map_err(|_| ConfigError::Parse(format!("line {line}: bad number {}", parts[1])))?,
        parts[2]
            .parse()
            .map_err(|_| ConfigError::Parse(format!("line {line}: bad number {}", parts[2])))?,
        parts[3]
            .parse()
            .map_err(|_| ConfigError::Parse(format!("line {line}: bad count {}", parts[3])))?,
    ))
}

fn parse_lin_grid(v: &str, line: usize) -> Result<(f64, f64, usize), ConfigError> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 4 || parts[0] != "lin" {
        return Err(ConfigError::Parse(format!(
            "line {line}: expected lin:<lo>:<hi>:<count>, got {v}"
        )));
    }
    Ok((
        parts[1]
            .parse()
            .map_err(|_| ConfigError::Parse(format!("line {line}: bad number {}", parts[1])))?,
        parts[2]
            .parse()
            .map_err(|_| ConfigError::Parse(format!("line {line}: bad number {}", parts[2])))?,
        parts[3]
            .parse()
            .map_err(|_| ConfigError::Parse(format!("line {line}: bad count {}", parts[3])))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_parse() {
        let cfg = Config::default();
        let parsed = Config::parse(&cfg.canonical()).unwrap();
        assert_eq!(cfg, parsed);
        assert_eq!(cfg.hash(), parsed.hash());
    }

    #[test]
    fn rejects_out_of_range_lambda() {
        let mut cfg = Config::default();
        cfg.lambda = 0.7;
        assert!(cfg.validate().is_err());
        assert!(Config::parse("lambda = 0.7").is_err());
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let cfg = Config::parse("# comment\n\nlambda = 0.1\nseed = 7\n").unwrap();
        assert_eq!(cfg.lambda, 0.1);
        assert_eq!(cfg.seed, 7);
    }
}
