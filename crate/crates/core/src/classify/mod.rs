//! Sampling, check execution and aggregation into a report.

mod checks;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::Conformal;
use crate::dsl::{MetricDef, SampleBox};
use crate::error::{Error, Result};
use crate::field::{self, Field};
use crate::geometry::Surface;
use crate::jet::{Point, DEFAULT_DEGREE};

pub use checks::{CheckDef, Group, Outcome, CHECKS};
pub use report::{CheckReport, ClassificationReport, Metadata, PointError, PointValue, Status};

pub const DEFAULT_THRESHOLD: f64 = 1e-7;
pub const ATTEMPTS_PER_POINT: usize = 1000;

const PROBE: &str = "(y1 + x1*y2)/sqrt(y1^2 + y2^2) + x2*y1*y2/(y1^2 + y2^2)";

pub fn find_check(id: &str) -> Option<&'static CheckDef> {
    checks::find(id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Oracle,
    Classes,
    #[default]
    Full,
}

impl Suite {
    pub fn includes(self, group: Group) -> bool {
        matches!(
            (self, group),
            (Suite::Full, _)
                | (Suite::Identities, Group::Identity)
                | (Suite::Oracle, Group::Oracle)
                | (Suite::Classes, Group::Class)
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Oracle => "oracle",
            Suite::Classes => "classes",
            Suite::Full => "full",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "identities" => Ok(Suite::Identities),
            "oracle" => Ok(Suite::Oracle),
            "classes" => Ok(Suite::Classes),
            "full" => Ok(Suite::Full),
            other => Err(Error::Config(format!(
                "unknown suite `{other}` (identities, oracle, classes, full)"
            ))),
        }
    }
}

/// Where and how many points to draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Intervals for `x1 x2 y1 y2`.
    pub bounds: [[f64; 2]; 4],
    pub count: usize,
    pub seed: u64,
}

impl SamplePlan {
    pub fn from_box(b: &SampleBox) -> SamplePlan {
        SamplePlan {
            bounds: b.intervals(),
            count: b.count,
            seed: b.seed,
        }
    }

    /// Uniform points in the box with `y` scaled to unit length, kept only
    /// when they lie in the surface's domain.
    pub fn sample(&self, surface: &Surface) -> Result<Vec<Point>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count);
        for k in 0..self.count {
            let mut found = None;
            for _ in 0..ATTEMPTS_PER_POINT {
                let v: [f64; 4] = std::array::from_fn(|i| {
                    let [lo, hi] = self.bounds[i];
                    if hi > lo {
                        rng.gen_range(lo..hi)
                    } else {
                        lo
                    }
                });
                let norm = v[2].hypot(v[3]);
                if norm < 1e-9 {
                    continue;
                }
                let p = Point::new(v[0], v[1], v[2] / norm, v[3] / norm);
                if surface.check_domain(&p).is_ok() {
                    found = Some(p);
                    break;
                }
            }
            match found {
                Some(p) => out.push(p),
                None => {
                    return Err(Error::Sampling(format!(
                        "no admissible point after {ATTEMPTS_PER_POINT} attempts (point {k} of {})",
                        self.count
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// A metric, optionally with a conformal factor, ready to be checked.
#[derive(Debug, Clone)]
pub struct Classifier {
    name: String,
    surface: Surface,
    conformal: Option<Conformal>,
    phi_source: Option<String>,
    expect: BTreeMap<String, bool>,
    degree: usize,
    threshold: f64,
    only: Vec<String>,
}

impl Classifier {
    pub fn new(name: impl Into<String>, surface: Surface) -> Classifier {
        Classifier {
            name: name.into(),
            surface,
            conformal: None,
            phi_source: None,
            expect: BTreeMap::new(),
            degree: DEFAULT_DEGREE,
            threshold: DEFAULT_THRESHOLD,
            only: Vec::new(),
        }
    }

    pub fn from_metric(metric: &MetricDef) -> Result<Classifier> {
        let surface = Surface::from_metric(metric);
        let mut c = Classifier::new(metric.name.clone(), surface).with_expect(metric.expect.clone())?;
        if metric.phi.is_some() {
            c.conformal = Some(Conformal::from_metric(metric)?);
            c.phi_source = metric.source.phi.clone();
        }
        Ok(c)
    }

    pub fn with_conformal(mut self, phi: Field, source: impl Into<String>) -> Classifier {
        self.conformal = Some(Conformal::new(self.surface.clone(), phi));
        self.phi_source = Some(source.into());
        self
    }

    /// Expected verdicts by check id.
    pub fn with_expect(mut self, expect: BTreeMap<String, bool>) -> Result<Classifier> {
        if let Some(bad) = expect.keys().find(|k| checks::find(k).is_none()) {
            return Err(Error::Config(format!("[expect] names unknown check `{bad}`")));
        }
        self.expect = expect;
        Ok(self)
    }

    pub fn with_degree(mut self, degree: usize) -> Result<Classifier> {
        if degree > crate::jet::MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        self.degree = degree;
        Ok(self)
    }

    pub fn with_threshold(mut self, threshold: f64) -> Classifier {
        self.threshold = threshold;
        self
    }

    /// Restrict to checks whose id starts with one of `prefixes`.
    pub fn with_only(mut self, prefixes: Vec<String>) -> Classifier {
        self.only = prefixes;
        self
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn conformal(&self) -> Option<&Conformal> {
        self.conformal.as_ref()
    }

    pub fn selected(&self, suite: Suite) -> Vec<&'static CheckDef> {
        CHECKS
            .iter()
            .filter(|c| suite.includes(c.group))
            .filter(|c| !c.conformal || self.conformal.is_some())
            .filter(|c| self.only.is_empty() || self.only.iter().any(|p| c.id.starts_with(p.as_str())))
            .collect()
    }

    pub fn run(&self, plan: &SamplePlan, suite: Suite) -> Result<ClassificationReport> {
        let points = plan.sample(&self.surface)?;
        let mut report = self.run_at(&points, suite)?;
        report.metadata.seed = Some(plan.seed);
        report.metadata.bounds = Some(plan.bounds);
        Ok(report)
    }

    /// Run the suite at explicit points.
    pub fn run_at(&self, points: &[Point], suite: Suite) -> Result<ClassificationReport> {
        let selected = self.selected(suite);
        if selected.is_empty() {
            return Err(Error::Config(format!("suite `{suite}` selects no checks")));
        }
        let probe = field::parse("probe", PROBE)?;
        let changed = self.conformal.as_ref().map(Conformal::barred_surface);

        let results: Vec<Result<Vec<Result<Outcome>>>> = points
            .par_iter()
            .map(|p| self.eval_point(p, &selected, &probe, changed.as_ref()))
            .collect();

        let mut errors = Vec::new();
        for (index, (p, r)) in points.iter().zip(&results).enumerate() {
            match r {
                Err(e) => errors.push(PointError {
                    index,
                    point: p.0,
                    check: None,
                    message: e.to_string(),
                }),
                Ok(per_check) => {
                    for (c, r) in selected.iter().zip(per_check) {
                        if let Err(e) = r {
                            errors.push(PointError {
                                index,
                                point: p.0,
                                check: Some(c.id.to_string()),
                                message: e.to_string(),
                            });
                        }
                    }
                }
            }
        }
        if !points.is_empty() && results.iter().all(|r| r.is_err()) {
            return Err(errors[0].message.clone()).map_err(|m| {
                Error::Sampling(format!("no sample point could be evaluated; first failure: {m}"))
            });
        }

        let checks = selected
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut residuals = Vec::with_capacity(points.len());
                let (mut skipped, mut errs) = (0, 0);
                let mut reasons = Vec::new();
                for r in &results {
                    match r.as_ref().map(|v| &v[k]) {
                        Ok(Ok(Outcome::Value(v))) => residuals.push(Some(PointValue::from(*v))),
                        Ok(Ok(Outcome::Skip(why))) => {
                            skipped += 1;
                            reasons.push(why.clone());
                            residuals.push(None);
                        }
                        Ok(Err(_)) | Err(_) => {
                            errs += 1;
                            residuals.push(None);
                        }
                    }
                }
                let expected = self
                    .expect
                    .get(c.id)
                    .copied()
                    .or((c.group != Group::Class).then_some(true));
                CheckReport::build(
                    c.id,
                    c.group,
                    c.about,
                    self.threshold,
                    expected,
                    residuals,
                    skipped,
                    errs,
                    reasons,
                )
            })
            .collect();

        Ok(ClassificationReport {
            metadata: Metadata {
                metric: self.name.clone(),
                phi: self.phi_source.clone(),
                suite: suite.to_string(),
                degree: self.degree,
                threshold: self.threshold,
                seed: None,
                count: points.len(),
                bounds: None,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            points: points.iter().map(|p| p.0).collect(),
            checks,
            errors,
        })
    }

    fn eval_point(
        &self,
        p: &Point,
        selected: &[&'static CheckDef],
        probe: &Field,
        changed: Option<&Surface>,
    ) -> Result<Vec<Result<Outcome>>> {
        let cp = match &self.conformal {
            Some(c) => Some(c.at(p, self.degree)?),
            None => None,
        };
        let own;
        let sp = match &cp {
            Some(cp) => &cp.base,
            None => {
                own = self.surface.at(p, self.degree)?;
                &own
            }
        };
        let probe = sp.eval(probe.as_ref())?;
        let ctx = checks::Ctx::new(sp, cp.as_ref(), changed, *p, self.degree, self.threshold, probe);
        Ok(selected.iter().map(|c| c.run(&ctx)).collect())
    }
}

#[cfg(test)]
mod tests;
