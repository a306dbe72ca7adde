use std::path::{Path, PathBuf};

use finsurf::Suite;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Eval,
    Classify,
    Verify,
    Example,
}

/// Everything a run needs. Flags fill it in, and it can be saved and
/// loaded as TOML.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<PathBuf>,
    /// Name of a bundled metric, used when `metric` is absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// TOML integers are signed, so seeds above `i64::MAX` are written as strings.
    #[serde(skip_serializing_if = "Option::is_none", with = "seed_repr")]
    pub seed: Option<u64>,
    /// `[lo, hi]` for `x1 x2 y1 y2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[[f64; 2]; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Check id prefixes.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[f64; 4]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scalars: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        RunConfig::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if other.$f.is_some() {
                    self.$f = other.$f;
                }
            )*};
        }
        match (&other.metric, &other.example) {
            (Some(_), _) => self.example = None,
            (None, Some(_)) => self.metric = None,
            _ => {}
        }
        take!(command, metric, example, suite, count, seed, bounds, degree, threshold, format, output);
        for (mine, theirs) in [
            (&mut self.checks, other.checks),
            (&mut self.scalars, other.scalars),
        ] {
            if !theirs.is_empty() {
                *mine = theirs;
            }
        }
        if !other.points.is_empty() {
            self.points = other.points;
        }
        self
    }
}

mod seed_repr {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match seed {
            Some(v) => match i64::try_from(*v) {
                Ok(i) => s.serialize_i64(i),
                Err(_) => s.serialize_str(&v.to_string()),
            },
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(Some(v)),
            Repr::Text(t) => t.parse().map(Some).map_err(de::Error::custom),
        }
    }
}
