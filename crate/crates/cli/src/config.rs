//! `key = value` configuration for `check-all`.

use std::str::FromStr;

use grigorchuk::Cubic;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue { key: String, value: String, line: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub coset_cap: usize,
    pub bfs_budget: usize,
    /// Radii for the n-ball check; empty means skipped.
    pub nball: Vec<usize>,
    pub seed: u64,
    /// Random words for the contraction inequality.
    pub samples: usize,
    /// Exhaustive bound for the radius-index check.
    pub radius_max: u64,
    /// Replacement weight for `c` (a negative control for the metric checks).
    pub weight_c: Option<Cubic>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            coset_cap: grigorchuk::cosets::DEFAULT_COSET_CAP,
            bfs_budget: 1 << 22,
            nball: vec![2, 5, 10, 20],
            seed: 0x6772_6967,
            samples: 10_000,
            radius_max: 1_000_000,
            weight_c: None,
        }
    }
}

fn parse_nball(v: &str) -> Option<Vec<usize>> {
    let list: Vec<usize> = v.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
    Some(list.into_iter().filter(|&n| n > 0).collect())
}

impl Config {
    /// Replace the n-ball radii; zeros are dropped, so `0` alone skips the check.
    pub fn set_nball(&mut self, radii: &[usize]) {
        self.nball = radii.iter().copied().filter(|&n| n > 0).collect();
    }
}

fn parse_seed(value: &str) -> Option<u64> {
    match value.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16).ok(),
        None => value.parse().ok(),
    }
}

impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cfg = Config::default();
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (key, value) = text.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue { key: key.to_string(), value: value.to_string(), line };
            match key {
                "coset_cap" => cfg.coset_cap = value.parse().map_err(|_| bad())?,
                "bfs_budget" => cfg.bfs_budget = value.parse().map_err(|_| bad())?,
                "nball" => cfg.nball = parse_nball(value).ok_or_else(bad)?,
                "seed" => cfg.seed = parse_seed(value).ok_or_else(bad)?,
                "samples" => cfg.samples = value.parse().map_err(|_| bad())?,
                "radius_max" => cfg.radius_max = value.parse().map_err(|_| bad())?,
                "weight_c" => cfg.weight_c = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(ConfigError::UnknownKey { key: key.to_string(), line }),
            }
        }
        Ok(cfg)
    }
}
