use std::fmt::Write as _;

use serde::Serialize;

use super::checks::Group;
use crate::residual::Residual;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointValue {
    pub raw: f64,
    pub normalized: f64,
}

impl From<Residual> for PointValue {
    fn from(r: Residual) -> Self {
        PointValue {
            raw: r.raw,
            normalized: r.normalized(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Verdict matches the expectation.
    Pass,
    Fail,
    /// No expectation; the verdict is reported only.
    Info,
    /// The check did not apply at any point.
    Skipped,
    /// Every applicable point failed to evaluate.
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub group: Group,
    pub about: String,
    pub threshold: f64,
    /// One entry per sample point; `null` where skipped or failed.
    pub residuals: Vec<Option<PointValue>>,
    pub evaluated: usize,
    pub skipped: usize,
    pub errors: usize,
    pub skip_reasons: Vec<String>,
    /// Largest normalized residual.
    pub max: Option<f64>,
    pub max_raw: Option<f64>,
    pub mean: Option<f64>,
    /// Smallest normalized residual, for checks expected to fail everywhere.
    pub min: Option<f64>,
    /// `max < threshold`.
    pub verdict: Option<bool>,
    pub expected: Option<bool>,
    pub status: Status,
}

impl CheckReport {
    pub(crate) fn build(
        id: &str,
        group: Group,
        about: &str,
        threshold: f64,
        expected: Option<bool>,
        residuals: Vec<Option<PointValue>>,
        skipped: usize,
        errors: usize,
        mut skip_reasons: Vec<String>,
    ) -> CheckReport {
        let vals: Vec<&PointValue> = residuals.iter().flatten().collect();
        let evaluated = vals.len();
        let max = vals.iter().map(|v| v.normalized).reduce(f64::max);
        let max_raw = vals.iter().map(|v| v.raw).reduce(f64::max);
        let min = vals.iter().map(|v| v.normalized).reduce(f64::min);
        let mean = (evaluated > 0)
            .then(|| vals.iter().map(|v| v.normalized).sum::<f64>() / evaluated as f64);
        let verdict = max.map(|m| m < threshold);
        skip_reasons.sort();
        skip_reasons.dedup();
        let status = match (verdict, expected) {
            (None, _) if errors > 0 => Status::Error,
            (None, _) => Status::Skipped,
            (Some(v), Some(e)) if v == e => Status::Pass,
            (Some(_), Some(_)) => Status::Fail,
            (Some(_), None) => Status::Info,
        };
        CheckReport {
            id: id.to_string(),
            group,
            about: about.to_string(),
            threshold,
            residuals,
            evaluated,
            skipped,
            errors,
            skip_reasons,
            max,
            max_raw,
            mean,
            min,
            verdict,
            expected,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointError {
    pub index: usize,
    pub point: [f64; 4],
    /// `None` when the whole point failed.
    pub check: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub metric: String,
    pub phi: Option<String>,
    pub suite: String,
    pub degree: usize,
    pub threshold: f64,
    pub seed: Option<u64>,
    pub count: usize,
    pub bounds: Option<[[f64; 2]; 4]>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub metadata: Metadata,
    pub points: Vec<[f64; 4]>,
    pub checks: Vec<CheckReport>,
    pub errors: Vec<PointError>,
}

impl ClassificationReport {
    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn any_failed(&self) -> bool {
        self.failed().next().is_some()
    }

    pub fn any_errored(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let m = &self.metadata;
        let mut out = String::new();
        let _ = writeln!(out, "metric   {}", m.metric);
        if let Some(phi) = &m.phi {
            let _ = writeln!(out, "phi      {phi}");
        }
        let _ = writeln!(
            out,
            "suite    {}  points {}  degree {}  threshold {:e}",
            m.suite, m.count, m.degree, m.threshold
        );
        if let Some(seed) = m.seed {
            let _ = writeln!(out, "seed     {seed}");
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "{:<8} {:<38} {:>10} {:>10} {:>7} {:>6}  {}",
            "status", "check", "max", "min", "points", "skip", "about"
        );
        for c in &self.checks {
            let num = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2e}"));
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
                Status::Skipped => "skip",
                Status::Error => "ERROR",
            };
            let verdict = match (c.verdict, c.expected) {
                (Some(v), Some(e)) => format!(" [{v}, expected {e}]"),
                (Some(v), None) => format!(" [{v}]"),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "{:<8} {:<38} {:>10} {:>10} {:>7} {:>6}  {}{}",
                status,
                c.id,
                num(c.max),
                num(c.min),
                c.evaluated,
                c.skipped,
                c.about,
                verdict
            );
            if c.evaluated == 0 {
                for r in &c.skip_reasons {
                    let _ = writeln!(out, "{:<8} {:<38} skipped: {r}", "", "");
                }
            }
        }
        if !self.errors.is_empty() {
            let _ = writeln!(out, "\n{} evaluation error(s):", self.errors.len());
            for e in self.errors.iter().take(20) {
                let at = e.point.map(|v| format!("{v:.4}")).join(", ");
                let what = e.check.as_deref().unwrap_or("point");
                let _ = writeln!(out, "  #{} ({at}) {what}: {}", e.index, e.message);
            }
            if self.errors.len() > 20 {
                let _ = writeln!(out, "  ... {} more", self.errors.len() - 20);
            }
        }
        out
    }
}
