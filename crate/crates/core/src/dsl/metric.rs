//! Metric definition files.
//!
//! ```toml
//! name = "berwald-rund"
//! F = "(1/x2)*sqrt(2*y1*y2*x2^2 + c*y2^2)"
//! phi = "(3/2)*ln((2*x2^2*y1 + c*y2)/(x2^2*y2))"
//! let = ["c = 1 - 2*x1*x2 + sqrt(1 - 4*x1*x2)"]
//! domain = ["1 - 4*x1*x2 > 0", "x2 > 0"]
//!
//! [params]
//!
//! [sample]
//! x1 = [-0.3, 0.3]
//! count = 50
//! seed = 7
//!
//! [expect]
//! "class.berwald.barred" = true
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{is_reserved, parse_constraint, parse_scoped, CmpOp, Expr, FieldDef, ParseError};
use crate::error::{Error, Result};
use crate::jet::Point;

/// Raw file contents before any expression is parsed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(rename = "let", default, skip_serializing_if = "Vec::is_empty")]
    pub lets: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domain: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub sample: SampleBox,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, bool>,
}

/// Sampling box and default plan stored with a metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleBox {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub y1: [f64; 2],
    pub y2: [f64; 2],
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            x1: [-0.5, 0.5],
            x2: [-0.5, 0.5],
            y1: [-1.0, 1.0],
            y2: [-1.0, 1.0],
            count: 50,
            seed: 1,
        }
    }
}

impl SampleBox {
    pub fn intervals(&self) -> [[f64; 2]; 4] {
        [self.x1, self.x2, self.y1, self.y2]
    }
}

/// One inequality of the conic domain, e.g. `1 - 4*x1*x2 > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub source: String,
    pub lhs: FieldDef,
    pub op: CmpOp,
    pub rhs: FieldDef,
}

impl Constraint {
    /// Whether the inequality holds at `point`. A side that cannot be
    /// evaluated counts as a violation.
    pub fn holds(&self, point: &Point) -> bool {
        match (self.lhs.eval_real(point), self.rhs.eval_real(point)) {
            (Ok(l), Ok(r)) => l.is_finite() && r.is_finite() && self.op.holds(l, r),
            _ => false,
        }
    }
}

/// A fully parsed metric definition.
#[derive(Debug, Clone)]
pub struct MetricDef {
    pub name: String,
    pub description: Option<String>,
    pub f: FieldDef,
    pub phi: Option<FieldDef>,
    pub domain: Vec<Constraint>,
    pub sample: SampleBox,
    pub expect: BTreeMap<String, bool>,
    pub source: MetricFile,
}

/// A parse failure inside one field of a metric file.
fn located(field: &str, source: &str, err: ParseError) -> Error {
    Error::Config(format!("in `{field}`:\n{}", err.render(source)))
}

impl MetricDef {
    pub fn from_toml_str(text: &str) -> Result<MetricDef> {
        let file: MetricFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        MetricDef::from_file(file)
    }

    pub fn load(path: &Path) -> Result<MetricDef> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        MetricDef::from_toml_str(&text)
    }

    pub fn from_file(file: MetricFile) -> Result<MetricDef> {
        let params = Arc::new(file.params.clone());
        for name in params.keys() {
            if is_reserved(name) {
                return Err(Error::Config(format!("parameter name `{name}` is reserved")));
            }
        }

        let mut lets: Vec<(String, Expr)> = Vec::new();
        for entry in &file.lets {
            let (name, body) = entry.split_once('=').ok_or_else(|| {
                Error::Config(format!("binding `{entry}` must have the form `name = expression`"))
            })?;
            let name = name.trim();
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || is_reserved(name) {
                return Err(Error::Config(format!("invalid binding name `{name}`")));
            }
            if params.contains_key(name) || lets.iter().any(|(n, _)| n == name) {
                return Err(Error::Config(format!("`{name}` is bound twice")));
            }
            let known = |s: &str| params.contains_key(s) || lets.iter().any(|(n, _)| n == s);
            let expr = parse_scoped(body, &known).map_err(|e| located(name, body.trim(), e))?;
            lets.push((name.to_string(), expr));
        }
        let lets = Arc::new(lets);
        let known = |s: &str| params.contains_key(s) || lets.iter().any(|(n, _)| n == s);

        let field = |label: &str, src: &str| -> Result<FieldDef> {
            let expr = parse_scoped(src, &known).map_err(|e| located(label, src, e))?;
            FieldDef::new(label, expr, lets.clone(), params.clone())
        };
        let f = field("F", &file.f)?;
        let phi = file.phi.as_deref().map(|src| field("phi", src)).transpose()?;

        let mut domain = Vec::new();
        for src in &file.domain {
            let (l, op, r) =
                parse_constraint(src, &known).map_err(|e| located("domain", src, e))?;
            domain.push(Constraint {
                source: src.clone(),
                lhs: FieldDef::new("domain", l, lets.clone(), params.clone())?,
                op,
                rhs: FieldDef::new("domain", r, lets.clone(), params.clone())?,
            });
        }

        for (i, [lo, hi]) in file.sample.intervals().into_iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!(
                    "sample interval {i} is not a finite [lo, hi] pair"
                )));
            }
        }

        Ok(MetricDef {
            name: file.name.clone(),
            description: file.description.clone(),
            f,
            phi,
            domain,
            sample: file.sample.clone(),
            expect: file.expect.clone(),
            source: file,
        })
    }

    /// Every domain inequality holds and `y` is not zero.
    pub fn contains(&self, point: &Point) -> bool {
        let [y1, y2] = point.y();
        (y1 != 0.0 || y2 != 0.0) && self.domain.iter().all(|c| c.holds(point))
    }

    /// The first violated domain inequality, if any.
    pub fn violated(&self, point: &Point) -> Option<&str> {
        self.domain
            .iter()
            .find(|c| !c.holds(point))
            .map(|c| c.source.as_str())
    }
}
