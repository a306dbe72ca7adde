//! Metric files shipped with the library.

use crate::dsl::MetricDef;
use crate::error::{Error, Result};

pub const BUNDLED: &[(&str, &str)] = &[
    ("euclid", include_str!("../metrics/euclid.toml")),
    ("funk", include_str!("../metrics/funk.toml")),
    ("berwald-rund", include_str!("../metrics/berwald-rund.toml")),
    ("randers", include_str!("../metrics/randers.toml")),
    ("sphere", include_str!("../metrics/sphere.toml")),
    ("minkowski", include_str!("../metrics/minkowski.toml")),
    ("isotropic", include_str!("../metrics/isotropic.toml")),
];

pub fn source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<MetricDef> {
    let text = source(name).ok_or_else(|| {
        let known: Vec<_> = BUNDLED.iter().map(|(n, _)| *n).collect();
        Error::Config(format!("no bundled metric `{name}` (known: {})", known.join(", ")))
    })?;
    MetricDef::from_toml_str(text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}
