//! Flat key=value experiment configuration.
//!
//! One `key = value` pair per line; `#` starts a comment. Unknown keys are
//! errors, so a typo can't silently fall back to a default. The same keys
//! can be supplied as CLI flags, which override the file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::CliError;
use crate::protocol::ProtocolSpec;

pub const KNOWN_KEYS: &[&str] = &[
    "protocol", "arms", "horizon", "reps", "seed", "stride", "out", "means", "generator", "m",
    "m1", "m2", "m1c", "m2c", "M", "N", "epsilon",
];

/// Where each replication's bandit comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum BanditSource {
    /// Fresh instance per replication: alpha ~ U[0,1), means ~ U[0,alpha).
    Generated,
    /// The same fixed means for every replication.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub protocol: ProtocolSpec,
    pub arms: usize,
    pub horizon: usize,
    pub reps: u64,
    pub seed: u64,
    /// Steps between curve samples.
    pub stride: usize,
    pub bandit: BanditSource,
    pub out: PathBuf,
}

/// Ordered key=value map; later inserts overwrite earlier ones.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    map: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut kv = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            kv.set(key.trim(), value.trim())?;
        }
        Ok(kv)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        }
        self.map.insert(key.to_owned(), value.to_owned());
        Ok(())
    }

    /// Overlays `other` on top of `self` (CLI flags over file contents).
    pub fn overlay(&mut self, other: &KeyValues) {
        for (k, v) in &other.map {
            self.map.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                CliError::Config(format!("key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }

    fn parsed_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.parsed(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let means = match self.get("means") {
            None => None,
            Some(raw) => Some(parse_means(raw)?),
        };
        let arms = match (&means, self.parsed::<usize>("arms")?) {
            (Some(m), Some(arms)) if m.len() != arms => {
                return Err(CliError::Config(format!(
                    "arms = {} but means lists {} values",
                    arms,
                    m.len()
                )));
            }
            (Some(m), _) => m.len(),
            (None, Some(arms)) => arms,
            (None, None) => return Err(CliError::Config("missing required key `arms`".into())),
        };
        let bandit = match (means, self.get("generator")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "`means` and `generator` are mutually exclusive".into(),
                ));
            }
            (Some(m), None) => BanditSource::Explicit(m),
            (None, Some("uniform-alpha")) | (None, None) => BanditSource::Generated,
            (None, Some(other)) => {
                return Err(CliError::Config(format!("unknown generator `{other}`")));
            }
        };
        let protocol_name: String = self.required("protocol")?;
        let protocol = ProtocolSpec::from_keys(&protocol_name, arms, &self)?;
        let horizon: usize = self.required("horizon")?;
        let reps: u64 = self.required("reps")?;
        let seed: u64 = self.parsed_or("seed", 0)?;
        let stride: usize = self.parsed_or("stride", (horizon / 500).max(1))?;
        if horizon < 1 {
            return Err(CliError::Config("horizon must be >= 1".into()));
        }
        if reps < 1 {
            return Err(CliError::Config("reps must be >= 1".into()));
        }
        if stride < 1 {
            return Err(CliError::Config("stride must be >= 1".into()));
        }
        let out: String = self.required("out")?;
        Ok(ExperimentConfig {
            protocol,
            arms,
            horizon,
            reps,
            seed,
            stride,
            bandit,
            out: PathBuf::from(out),
        })
    }
}

pub fn parse_means(raw: &str) -> Result<Vec<f64>, CliError> {
    let means: Result<Vec<f64>, _> = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let means = means.map_err(|_| CliError::Config(format!("cannot parse means `{raw}`")))?;
    if means.is_empty() {
        return Err(CliError::Config("means list is empty".into()));
    }
    Ok(means)
}

/// 1-based sample steps spaced `stride` apart, always including `horizon`.
pub fn steps_with_stride(horizon: usize, stride: usize) -> Vec<usize> {
    assert!(horizon >= 1 && stride >= 1);
    let mut steps: Vec<usize> = (1..=horizon / stride).map(|i| i * stride).collect();
    if steps.last() != Some(&horizon) {
        steps.push(horizon);
    }
    steps
}
