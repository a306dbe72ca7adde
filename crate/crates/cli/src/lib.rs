//! Command-line front end: metric files in, reports out.
//!
//! Exit codes: 0 every judged check passed, 1 a verdict failed, 2 the
//! input was rejected, 3 a numeric or degree-budget failure.

pub mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use finsurf::classify::{SamplePlan, Suite};
use finsurf::conformal::BarredSample;
use finsurf::dsl::MetricDef;
use finsurf::geometry::GeometrySample;
use finsurf::{bundled, Classifier, Conformal, Error, Point, Surface};

pub use config::{CommandKind, Format, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "finsurf", version, about = "Evaluate and classify Finsler surfaces under F -> exp(phi) F")]
pub struct Cli {
    /// Load run settings from a TOML file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the resolved run settings to a TOML file.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for point evaluation.
    #[arg(long, global = true, env = "FINSURF_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Print every frame, spray and barred quantity at some points.
    Eval(EvalArgs),
    /// Run a check suite and judge the verdicts against `[expect]`.
    Classify(RunArgs),
    /// Run the identity suite.
    Verify(RunArgs),
    /// Run the full suite on a bundled metric.
    Example {
        name: String,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// List the bundled metrics.
    Metrics,
    /// Run whatever the configuration file describes.
    Run,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Metric definition file.
    #[arg(long, short)]
    pub metric: Option<PathBuf>,
    /// Bundled metric name instead of a file.
    #[arg(long, conflicts_with = "metric")]
    pub example: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `x1lo,x1hi,x2lo,x2hi,y1lo,y1hi,y2lo,y2hi`.
    #[arg(long = "box", value_parser = parse_box, allow_hyphen_values = true)]
    pub bounds: Option<[[f64; 2]; 4]>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Only checks whose id starts with this; repeatable.
    #[arg(long = "check")]
    pub checks: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub suite: Option<Suite>,
    #[command(flatten)]
    pub plan: PlanArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// `x1,x2,y1,y2`; repeatable. Without it the metric's sample plan is used.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true)]
    pub points: Vec<[f64; 4]>,
    /// Named scalar with derivative chain, e.g. `Q;2;2`; repeatable.
    #[arg(long = "scalar")]
    pub scalars: Vec<String>,
    #[command(flatten)]
    pub plan: PlanArgs,
}

fn numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let v = numbers(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

fn parse_box(s: &str) -> Result<[[f64; 2]; 4], String> {
    let v = numbers(s, 8)?;
    Ok(std::array::from_fn(|i| [v[2 * i], v[2 * i + 1]]))
}

impl PlanArgs {
    fn into_config(self, cfg: &mut RunConfig) {
        cfg.count = self.count;
        cfg.seed = self.seed;
        cfg.bounds = self.bounds;
        cfg.degree = self.degree;
        cfg.threshold = self.threshold;
        cfg.checks = self.checks;
    }
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_)
            | Error::Config(_)
            | Error::Sampling(_)
            | Error::OutsideCone(_)
            | Error::Domain(_)
            | Error::DegreeTooLarge(_) => EXIT_INPUT,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Flags merged over the configuration file.
pub fn resolve(cli: Cli) -> Result<RunConfig, Failure> {
    let base = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(Failure::input)?,
        None => RunConfig::default(),
    };
    let mut flags = RunConfig {
        format: cli.format,
        output: cli.output,
        ..RunConfig::default()
    };
    match cli.command {
        None | Some(Cmd::Run) => {}
        Some(Cmd::Metrics) => unreachable!("handled before resolving"),
        Some(Cmd::Eval(a)) => {
            flags.command = Some(CommandKind::Eval);
            flags.metric = a.source.metric;
            flags.example = a.source.example;
            a.plan.into_config(&mut flags);
            flags.points = a.points;
            flags.scalars = a.scalars;
        }
        Some(Cmd::Classify(a)) => run_flags(&mut flags, CommandKind::Classify, a),
        Some(Cmd::Verify(a)) => run_flags(&mut flags, CommandKind::Verify, a),
        Some(Cmd::Example { name, plan }) => {
            flags.command = Some(CommandKind::Example);
            flags.example = Some(name);
            plan.into_config(&mut flags);
        }
    }
    let cfg = base.overlay(flags);
    if cfg.command.is_none() {
        return Err(Failure::input("no command given and the configuration names none"));
    }
    if let Some(path) = &cli.save_config {
        std::fs::write(path, cfg.to_toml())
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(cfg)
}

fn run_flags(flags: &mut RunConfig, kind: CommandKind, a: RunArgs) {
    flags.command = Some(kind);
    flags.metric = a.source.metric;
    flags.example = a.source.example;
    flags.suite = a.suite;
    a.plan.into_config(flags);
}

fn load_metric(cfg: &RunConfig) -> Result<MetricDef, Failure> {
    match (&cfg.metric, &cfg.example) {
        (Some(path), _) => Ok(MetricDef::load(path)?),
        (None, Some(name)) => Ok(bundled::load(name)?),
        (None, None) => Err(Failure::input("no metric: pass --metric FILE or --example NAME")),
    }
}

fn plan_for(cfg: &RunConfig, metric: &MetricDef) -> SamplePlan {
    let mut plan = SamplePlan::from_box(&metric.sample);
    if let Some(n) = cfg.count {
        plan.count = n;
    }
    if let Some(s) = cfg.seed {
        plan.seed = s;
    }
    if let Some(b) = cfg.bounds {
        plan.bounds = b;
    }
    plan
}

/// The rendered output and the exit code it earns.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let format = cfg.format.unwrap_or_default();
    match cfg.command.expect("resolved config names a command") {
        CommandKind::Eval => eval(cfg, format),
        kind => classify(cfg, kind, format),
    }
}

fn classify(cfg: &RunConfig, kind: CommandKind, format: Format) -> Result<Outcome, Failure> {
    let metric = load_metric(cfg)?;
    let suite = match (kind, cfg.suite) {
        (_, Some(s)) => s,
        (CommandKind::Verify, None) => Suite::Identities,
        _ => Suite::Full,
    };
    let mut c = Classifier::from_metric(&metric)?.with_only(cfg.checks.clone());
    if let Some(d) = cfg.degree {
        c = c.with_degree(d)?;
    }
    if let Some(t) = cfg.threshold {
        c = c.with_threshold(t);
    }
    let report = c.run(&plan_for(cfg, &metric), suite)?;
    let code = if report.any_failed() {
        EXIT_VERDICT
    } else if report.any_errored() {
        EXIT_NUMERIC
    } else {
        EXIT_PASS
    };
    let text = match format {
        Format::Text => report.render_text(),
        Format::Json => report.to_json() + "\n",
    };
    Ok(Outcome { text, code })
}

#[derive(Serialize)]
struct EvalPoint {
    point: [f64; 4],
    geometry: GeometrySample,
    #[serde(skip_serializing_if = "Option::is_none")]
    barred: Option<BarredSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    barred_unavailable: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    scalars: BTreeMap<String, f64>,
}

fn eval(cfg: &RunConfig, format: Format) -> Result<Outcome, Failure> {
    let metric = load_metric(cfg)?;
    let degree = cfg.degree.unwrap_or(finsurf::jet::DEFAULT_DEGREE);
    if degree > finsurf::jet::MAX_DEGREE {
        return Err(Error::DegreeTooLarge(degree).into());
    }
    let surface = Surface::from_metric(&metric);
    let conformal = match metric.phi {
        Some(_) => Some(Conformal::from_metric(&metric)?),
        None => None,
    };
    let points: Vec<Point> = if cfg.points.is_empty() {
        plan_for(cfg, &metric).sample(&surface)?
    } else {
        cfg.points.iter().map(|p| Point(*p)).collect()
    };

    let mut out = Vec::with_capacity(points.len());
    for p in &points {
        let mut scalars = BTreeMap::new();
        let entry = match &conformal {
            Some(c) => {
                let cp = c.at(p, degree)?;
                for name in &cfg.scalars {
                    scalars.insert(name.clone(), cp.get(name)?.value());
                }
                let (barred, barred_unavailable) = match BarredSample::new(&cp) {
                    Ok(b) => (Some(b), None),
                    Err(e @ Error::NegativeRho(_)) => (None, Some(e.to_string())),
                    Err(e) => return Err(e.into()),
                };
                EvalPoint {
                    point: p.0,
                    geometry: GeometrySample::new(&cp.base)?,
                    barred,
                    barred_unavailable,
                    scalars,
                }
            }
            None => {
                let sp = surface.at(p, degree)?;
                for name in &cfg.scalars {
                    scalars.insert(name.clone(), sp.scalar(name)?.value());
                }
                EvalPoint {
                    point: p.0,
                    geometry: GeometrySample::new(&sp)?,
                    barred: None,
                    barred_unavailable: None,
                    scalars,
                }
            }
        };
        out.push(entry);
    }

    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out).expect("samples serialize") + "\n",
        Format::Text => {
            let mut s = format!("metric {}\n", metric.name);
            for e in &out {
                let v = serde_json::to_value(e).expect("samples serialize");
                s.push('\n');
                render_value(&mut s, "", &v);
            }
            s
        }
    };
    Ok(Outcome {
        text,
        code: EXIT_PASS,
    })
}

fn render_value(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_value(out, &key, v);
            }
        }
        other => out.push_str(&format!("{prefix:<24} {}\n", compact(other))),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.12e}"),
            _ => n.to_string(),
        },
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn list_metrics() -> String {
    let mut s = String::new();
    for name in bundled::names() {
        let about = bundled::load(name)
            .ok()
            .and_then(|m| m.description)
            .unwrap_or_default();
        s.push_str(&format!("{name:<14} {about}\n"));
    }
    s
}

/// Parse `args`, run, write output, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, as when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if matches!(cli.command, Some(Cmd::Metrics)) {
        print!("{}", list_metrics());
        return EXIT_PASS;
    }
    let result = resolve(cli).and_then(|cfg| {
        let outcome = execute(&cfg)?;
        match &cfg.output {
            Some(path) => {
                std::fs::write(path, &outcome.text).map_err(|e| {
                    Failure::input(format!("cannot write {}: {e}", path.display()))
                })?;
                eprintln!("report written to {}", path.display());
            }
            None => {
                let _ = std::io::stdout().write_all(outcome.text.as_bytes());
            }
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
