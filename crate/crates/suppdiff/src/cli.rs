//! Command-line front end.
//!
//! Every subcommand is turned into a [`Scenario`] and executed by [`run`];
//! `suppdiff run FILE` executes a scenario file directly. Reports are JSON
//! objects carrying `"schema": 1`; grid scans and gauge tables are CSV.
//!
//! Exit codes: 0 when every suite passes (or is skipped), 1 for malformed
//! input, 2 for a replayable alarm, 3 when numerical resolution ran out.

use crate::conditions::{self, check_condition, check_convexity, CheckConfig, Condition};
use crate::cone::Cone;
use crate::cost::{self, check_axiom, harness_prop3, harness_saijo, random_prices, shephard_suite};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, level_fixture, production_fixture, Fixture, Kind, CATALOG};
use crate::gauge::{harness_cor_cfa, harness_prop_fa};
use crate::report::{SuiteStatus, Tri};
use crate::sets::{shifted_cone, Axiom, HSet, ProductionFn};
use crate::support::{dual_grid, is_differentiable_at_with, scan, support_value_with, ScanRow, Status};
use crate::tol::{Tolerances, DEFAULT_SEED};
use crate::vector::Vector;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "suppdiff", version, about = "Support functions, argmax sets and gauges of cone-ordered sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Support values, argmax sets and gauges at given points.
    Analyze {
        #[command(flatten)]
        target: Target,
        /// Dual point `x*`, comma separated; repeatable.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        dual: Vec<Vec<f64>>,
        /// Primal point for the gauge (or `F`); repeatable.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Vec<Vec<f64>>,
        /// CSV file of primal points, one per row.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Strictly positive price for the cost function; repeatable.
        #[arg(long, value_parser = parse_point)]
        price: Vec<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Differentiability over a dual grid, as CSV.
    Scan {
        #[command(flatten)]
        target: Target,
        /// CSV file of dual points; the default is a grid of `--grid` points of `-int K#`.
        #[arg(long)]
        duals: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// One sampled condition on a set, or one axiom of a production function.
    Check {
        #[command(flatten)]
        target: Target,
        /// Condition id, e.g. `r-sas`, or `convexity`.
        #[arg(long)]
        condition: Option<String>,
        /// Axiom name, e.g. `F.3c`.
        #[arg(long)]
        axiom: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// A theorem suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        target: Target,
        /// Random prices for the shephard suite.
        #[arg(long, default_value_t = 50)]
        prices: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The named sets and production functions.
    ListFixtures {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Executes a scenario file.
    Run {
        scenario: PathBuf,
        /// Overrides the scenario's report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Target {
    /// Fixture name, `{"production": P, "gamma": g}`, `{"a": [...], "cone": {...}}`, or a JSON file.
    #[arg(long)]
    pub set: Option<String>,
    /// Production fixture name.
    #[arg(long)]
    pub production: Option<String>,
    /// Levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[arg(long)]
    pub tol_val: Option<f64>,
    #[arg(long)]
    pub tol_cluster: Option<f64>,
    #[arg(long)]
    pub tol_diam: Option<f64>,
    #[arg(long)]
    pub tol_bis: Option<f64>,
    #[arg(long)]
    pub tol_strict: Option<f64>,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            val: self.tol_val.unwrap_or(d.val),
            cluster: self.tol_cluster.unwrap_or(d.cluster),
            diam: self.tol_diam.unwrap_or(d.diam),
            bis: self.tol_bis.unwrap_or(d.bis),
            strict: self.tol_strict.unwrap_or(d.strict),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fact14,
    PropSuf,
    Cor11,
    Rem1,
    PropFa,
    CorCfa,
    Prop3,
    Saijo,
    Shephard,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Fact14 => "fact14",
            Suite::PropSuf => "prop-suf",
            Suite::Cor11 => "cor11",
            Suite::Rem1 => "rem1",
            Suite::PropFa => "prop-fa",
            Suite::CorCfa => "cor-cfa",
            Suite::Prop3 => "prop3",
            Suite::Saijo => "saijo",
            Suite::Shephard => "shephard",
        }
    }

    fn needs_production(self) -> bool {
        matches!(self, Suite::Prop3 | Suite::Saijo | Suite::Shephard)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
}

fn parse_point(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate `{t}`: {e}"))).collect()
}

fn spec_string<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<String>, D::Error> {
    Ok(match Option::<Value>::deserialize(d)? {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s),
        Some(v) => Some(v.to_string()),
    })
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_samples() -> usize {
    1000
}

fn default_grid() -> usize {
    100
}

fn default_prices() -> usize {
    50
}

/// A batch of operations on one set or production function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Fixture name, or an inline set object.
    #[serde(default, deserialize_with = "spec_string")]
    pub set: Option<String>,
    #[serde(default)]
    pub production: Option<String>,
    #[serde(default)]
    pub gamma: Vec<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub tol: Tolerances,
    pub operations: Vec<Operation>,
    /// Report path; standard output when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Directory for CSV artifacts.
    #[serde(default)]
    pub csv_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Operation {
    Analyze {
        #[serde(default)]
        dual: Vec<Vec<f64>>,
        #[serde(default)]
        points: Vec<Vec<f64>>,
        #[serde(default)]
        prices: Vec<Vec<f64>>,
    },
    Scan {
        #[serde(default)]
        duals: Vec<Vec<f64>>,
    },
    Check {
        #[serde(default)]
        condition: Option<String>,
        #[serde(default)]
        axiom: Option<String>,
    },
    Verify {
        suite: Suite,
        #[serde(default = "default_prices")]
        prices: usize,
    },
}

impl Operation {
    fn name(&self) -> &'static str {
        match self {
            Operation::Analyze { .. } => "analyze",
            Operation::Scan { .. } => "scan",
            Operation::Check { .. } => "check",
            Operation::Verify { .. } => "verify",
        }
    }
}

impl Scenario {
    fn new(target: Target, common: &Common, op: Operation) -> Self {
        Scenario {
            set: target.set,
            production: target.production,
            gamma: target.gamma,
            seed: common.seed,
            samples: common.samples,
            grid: common.grid,
            tol: common.tolerances(),
            operations: vec![op],
            out: common.out.clone(),
            csv_dir: None,
        }
    }

    /// Reads and validates a scenario file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.operations.is_empty() {
            return Err(Error::Schema("scenario has no operations".into()));
        }
        if self.set.is_none() && self.production.is_none() {
            return Err(Error::Schema("scenario needs a set or a production function".into()));
        }
        if let Some(s) = &self.set {
            resolve_set(s)?;
        }
        if let Some(p) = &self.production {
            production_fixture(p)?;
        }
        if self.gamma.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::Schema("levels must be positive".into()));
        }
        Ok(())
    }

    fn config(&self, source: Option<&str>) -> CheckConfig {
        let mut c = CheckConfig::default().with_samples(self.samples).with_seed(self.seed).with_grid(self.grid);
        c.tol = self.tol;
        c.source = source.map(str::to_string);
        c
    }

    /// The set to work on: `--set`, or the level set of `--production` at the first level.
    fn target_set(&self) -> Result<(HSet, String)> {
        if let Some(s) = &self.set {
            return Ok((resolve_set(s)?, s.clone()));
        }
        match (&self.production, self.gamma.first()) {
            (Some(p), Some(&g)) => Ok((level_fixture(p, g)?, cost::level_source(p, g))),
            (Some(_), None) => Err(Error::Schema("a production function needs --gamma to give a set".into())),
            _ => Err(Error::Schema("missing --set".into())),
        }
    }

    fn target_production(&self) -> Result<(ProductionFn, String)> {
        let p = self.production.as_ref().ok_or_else(|| Error::Schema("missing --production".into()))?;
        Ok((production_fixture(p)?, p.clone()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SetJson {
    Level {
        production: String,
        gamma: f64,
    },
    Shifted {
        a: Vec<f64>,
        cone: Cone,
    },
    Fixture {
        fixture: String,
    },
}

/// Resolves a `--set` argument.
pub fn resolve_set(spec: &str) -> Result<HSet> {
    let t = spec.trim();
    if t.starts_with('{') {
        let j: SetJson = serde_json::from_str(t).map_err(|e| Error::Schema(format!("set: {e}")))?;
        return match j {
            SetJson::Level { production, gamma } => level_fixture(&production, gamma),
            SetJson::Shifted { a, cone } => shifted_cone(&Vector::from_slice(&a)?, &cone),
            SetJson::Fixture { fixture } => resolve_set(&fixture),
        };
    }
    if t.ends_with(".json") && Path::new(t).is_file() {
        let text = std::fs::read_to_string(t).map_err(|e| Error::Schema(format!("{t}: {e}")))?;
        return resolve_set(&text);
    }
    match fixture(t)? {
        Fixture::Set(s) => Ok(s),
        Fixture::Production(_) => Err(Error::Schema(format!("`{t}` is a production function: use --production, or {{\"production\": \"{t}\", \"gamma\": g}}"))),
    }
}

/// Reads points from CSV, one per row; a header row is skipped.
pub fn read_points_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        let row: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match row {
            Ok(r) => out.push(r),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::Schema(format!("{} row {}: {e}", path.display(), i + 1))),
        }
    }
    Ok(out)
}

fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v > 0.0 {
        "+inf".into()
    } else {
        "-inf".into()
    }
}

fn tri_name(t: Tri) -> &'static str {
    match t {
        Tri::True => "differentiable",
        Tri::False => "non_differentiable",
        Tri::Indeterminate => "indeterminate",
    }
}

fn csv_string(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Schema(e.to_string());
    w.write_record(&header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn coord_header(p: usize, prefix: &str) -> Vec<String> {
    (1..=p).map(|i| format!("{prefix}{i}")).collect()
}

/// Scan rows as CSV: `x*` coordinates, value, diameter, verdict.
pub fn scan_csv(rows: &[ScanRow], p: usize) -> Result<String> {
    let mut h = coord_header(p, "xstar");
    h.extend(["value", "diameter", "verdict"].map(String::from));
    let body = rows
        .iter()
        .map(|r| {
            let mut v: Vec<String> = r.xstar.iter().map(|&c| fmt_real(c)).collect();
            v.extend([fmt_real(r.value), fmt_real(r.diameter), tri_name(r.verdict).to_string()]);
            v
        })
        .collect();
    csv_string(h, body)
}

/// Gauge values as CSV: point coordinates, value, bracket width.
pub fn gauge_csv(set: &HSet, points: &[Vec<f64>]) -> Result<String> {
    let mut h = coord_header(set.dim(), "x");
    h.extend(["value", "bracket_width"].map(String::from));
    let mut body = Vec::new();
    for x in points {
        let g = crate::gauge::gauge(set, &Vector::from_slice(x)?)?;
        let mut v: Vec<String> = x.iter().map(|&c| fmt_real(c)).collect();
        v.extend([fmt_real(g.value), fmt_real(g.bracket_width)]);
        body.push(v);
    }
    csv_string(h, body)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// Result of one operation.
struct OpResult {
    body: Value,
    status: SuiteStatus,
    csv: Option<String>,
}

impl OpResult {
    fn json(body: Value, status: SuiteStatus) -> Self {
        Self { body, status, csv: None }
    }
}

fn describe(set: &HSet) -> Value {
    json!({
        "label": set.label,
        "description": set.description,
        "dim": set.dim(),
        "cone": set.cone,
        "bound_hint": set.bound_hint,
        "convex": set.convex,
        "satisfies_h": set.satisfies_h,
    })
}

fn analyze(sc: &Scenario, dual: &[Vec<f64>], points: &[Vec<f64>], prices: &[Vec<f64>]) -> Result<OpResult> {
    let mut body = Map::new();
    let mut status = SuiteStatus::Pass;
    let cfg = sc.config(None).support();
    let set = if sc.set.is_some() || !sc.gamma.is_empty() { Some(sc.target_set()?.0) } else { None };
    if let Some(set) = &set {
        body.insert("set".into(), describe(set));
        let mut rows = Vec::new();
        for d in dual {
            let x = Vector::from_slice(d)?;
            x.check_dim(set.dim())?;
            let s = support_value_with(set, &x, &cfg)?;
            let mut row = json!({ "xstar": d, "support": s });
            if s.status == Status::Finite {
                let diff = is_differentiable_at_with(set, &x, &cfg)?;
                if diff.verdict == Tri::Indeterminate {
                    status = status.worst(SuiteStatus::Indeterminate);
                }
                row["differentiable"] = to_value(&diff.verdict);
                row["gradient"] = to_value(&diff.gradient);
                row["argmax"] = to_value(&diff.argmax);
            } else if s.status == Status::BoundarySuspect {
                status = status.worst(SuiteStatus::Indeterminate);
            }
            rows.push(row);
        }
        body.insert("duals".into(), Value::Array(rows));
        let mut gs = Vec::new();
        for x in points {
            let g = crate::gauge::gauge(set, &Vector::from_slice(x)?)?;
            gs.push(json!({ "point": x, "gauge": g }));
        }
        body.insert("gauges".into(), Value::Array(gs));
    } else if !dual.is_empty() {
        return Err(Error::Schema("--dual needs --set, or --production with --gamma".into()));
    }
    if let Some(p) = &sc.production {
        let f = production_fixture(p)?;
        let mut vals = Vec::new();
        for x in points {
            vals.push(json!({ "point": x, "value": f.eval_vec(&Vector::from_slice(x)?)? }));
        }
        body.insert("production".into(), json!({ "label": f.label, "description": f.description, "values": vals }));
        if !prices.is_empty() {
            let g = *sc.gamma.first().ok_or_else(|| Error::Schema("--price needs --gamma".into()))?;
            let mut costs = Vec::new();
            for x in prices {
                costs.push(to_value(&cost::shephard_check(&f, &Vector::from_slice(x)?, g, None)?));
            }
            body.insert("costs".into(), Value::Array(costs));
        }
    } else if !prices.is_empty() {
        return Err(Error::Schema("--price needs --production".into()));
    }
    let csv = match &set {
        Some(s) if !points.is_empty() => Some(gauge_csv(s, points)?),
        _ => None,
    };
    Ok(OpResult { body: Value::Object(body), status, csv })
}

fn scan_op(sc: &Scenario, duals: &[Vec<f64>]) -> Result<OpResult> {
    let (set, _) = sc.target_set()?;
    let pts = if duals.is_empty() { dual_grid(&set.cone, sc.grid) } else { duals.to_vec() };
    let rows = scan(&set, &pts, &sc.config(None).support())?;
    let g = crate::report::GridSummary::from_rows(&rows);
    let status = if g.indeterminate > 0 { SuiteStatus::Indeterminate } else { SuiteStatus::Pass };
    let csv = scan_csv(&rows, set.dim())?;
    Ok(OpResult { body: json!({ "set": set.label, "grid": g }), status, csv: Some(csv) })
}

fn check_op(sc: &Scenario, condition: Option<&str>, axiom: Option<&str>) -> Result<OpResult> {
    match (condition, axiom) {
        (Some(c), None) => {
            let (set, src) = sc.target_set()?;
            let cfg = sc.config(Some(&src));
            let r = if c == "convexity" {
                check_convexity(&set, &cfg)?
            } else {
                let cond = Condition::parse(c).ok_or_else(|| Error::Schema(format!("unknown condition `{c}`")))?;
                check_condition(&set, cond, &cfg)?
            };
            let replay = cfg.check_command(&set, c);
            Ok(OpResult::json(json!({ "set": set.label, "report": r, "replay": replay }), SuiteStatus::Pass))
        }
        (None, Some(a)) => {
            let (f, src) = sc.target_production()?;
            let ax = Axiom::parse(a).ok_or_else(|| Error::Schema(format!("unknown axiom `{a}`")))?;
            let cfg = sc.config(Some(&src));
            let r = check_axiom(&f, ax, &cfg)?;
            Ok(OpResult::json(json!({ "production": f.label, "report": r, "replay": cost::axiom_command(&f, ax, &cfg) }), SuiteStatus::Pass))
        }
        _ => Err(Error::Schema("check needs exactly one of --condition and --axiom".into())),
    }
}

fn verify_op(sc: &Scenario, suite: Suite, prices: usize) -> Result<OpResult> {
    if suite.needs_production() {
        let (f, src) = sc.target_production()?;
        let cfg = sc.config(Some(&src));
        let gammas = if sc.gamma.is_empty() { vec![1.0] } else { sc.gamma.clone() };
        return Ok(match suite {
            Suite::Prop3 => {
                let r = harness_prop3(&f, &cfg)?;
                OpResult::json(to_value(&r), r.status)
            }
            Suite::Saijo => {
                let grid = dual_grid(&Cone::orthant(f.p)?, sc.grid);
                let r = harness_saijo(&f, &gammas, &grid, &cfg)?;
                OpResult::json(to_value(&r), r.status)
            }
            _ => {
                if gammas.len() != 1 {
                    return Err(Error::Schema("the shephard suite takes one level".into()));
                }
                let mut ps = vec![vec![1.0; f.p]];
                ps.extend(random_prices(f.p, prices, sc.seed));
                let r = shephard_suite(&f, gammas[0], &ps, &cfg)?;
                OpResult::json(to_value(&r), r.status)
            }
        });
    }
    let (set, src) = sc.target_set()?;
    let cfg = sc.config(Some(&src));
    let grid = || dual_grid(&set.cone, sc.grid);
    let theorem = |r: crate::report::TheoremReport| OpResult::json(to_value(&r), r.status);
    Ok(match suite {
        Suite::Fact14 => theorem(conditions::harness_fact14(&set, &grid(), &cfg)?),
        Suite::PropSuf => theorem(conditions::harness_prop_suf(&set, &grid(), &cfg)?),
        Suite::Cor11 => theorem(conditions::harness_cor11(&set, &grid(), &cfg)?),
        Suite::PropFa => theorem(harness_prop_fa(&set, &cfg)),
        Suite::CorCfa => {
            let r = harness_cor_cfa(&set, &cfg);
            OpResult::json(to_value(&r), r.status)
        }
        Suite::Rem1 => {
            let r = conditions::rem1_chain(&set, &cfg)?;
            let status = if r.consistent() { SuiteStatus::Pass } else { SuiteStatus::Alarm };
            let mut v = to_value(&r);
            v["status"] = to_value(&status);
            v["replay"] = Value::String(cfg.verify_command("rem1", &set));
            OpResult::json(v, status)
        }
        Suite::Prop3 | Suite::Saijo | Suite::Shephard => unreachable!("production suites handled above"),
    })
}

/// Artifacts of a scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    /// The JSON report.
    pub json: String,
    /// CSV tables, one per operation that produced one.
    pub csv: Vec<(usize, &'static str, String)>,
}

/// Executes every operation in order and assembles the report. A single
/// operation yields `{"schema": 1, "op": ..., ...}`; several yield
/// `{"schema": 1, "results": [...]}`.
pub fn run(sc: &Scenario) -> Result<Outcome> {
    sc.validate()?;
    let mut status = SuiteStatus::Pass;
    let mut results = Vec::new();
    let mut csv = Vec::new();
    for (i, op) in sc.operations.iter().enumerate() {
        let r = match op {
            Operation::Analyze { dual, points, prices } => analyze(sc, dual, points, prices)?,
            Operation::Scan { duals } => scan_op(sc, duals)?,
            Operation::Check { condition, axiom } => check_op(sc, condition.as_deref(), axiom.as_deref())?,
            Operation::Verify { suite, prices } => verify_op(sc, *suite, *prices)?,
        };
        status = status.worst(r.status);
        let mut m = Map::new();
        m.insert("op".into(), Value::String(op.name().into()));
        if let Operation::Verify { suite, .. } = op {
            m.insert("suite".into(), Value::String(suite.name().into()));
        }
        m.insert("seed".into(), json!(sc.seed));
        match r.body {
            Value::Object(b) => m.extend(b),
            other => {
                m.insert("report".into(), other);
            }
        }
        results.push(Value::Object(m));
        if let Some(c) = r.csv {
            csv.push((i, op.name(), c));
        }
    }
    let mut top = Map::new();
    top.insert("schema".into(), json!(SCHEMA));
    if results.len() == 1 {
        if let Some(Value::Object(m)) = results.pop() {
            top.extend(m);
        }
    } else {
        top.insert("results".into(), Value::Array(results));
    }
    top.insert("exit_code".into(), json!(status.exit_code()));
    let json = serde_json::to_string_pretty(&Value::Object(top)).expect("json") + "\n";
    Ok(Outcome { code: status.exit_code(), json, csv })
}

/// Exit code for an error: 3 when resolution ran out, 1 otherwise.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Indeterminate(_) => SuiteStatus::Indeterminate.exit_code(),
        _ => 1,
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Schema(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Schema(e.to_string())),
    }
}

fn list_fixtures(format: ListFormat) -> String {
    let kind = |k: Kind| if k == Kind::Set { "set" } else { "production" };
    match format {
        ListFormat::Text => CATALOG.iter().map(|e| format!("{:<14} {:<11} {}\n", e.name, kind(e.kind), e.summary)).collect(),
        ListFormat::Json => {
            let v: Vec<Value> = CATALOG.iter().map(|e| json!({ "name": e.name, "kind": kind(e.kind), "summary": e.summary })).collect();
            serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "fixtures": v })).expect("json") + "\n"
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<i32> {
    let (sc, primary_csv) = match cmd {
        Command::ListFixtures { format } => {
            emit(None, &list_fixtures(format), stdout)?;
            return Ok(0);
        }
        Command::Run { scenario, out } => {
            let mut sc = Scenario::from_file(&scenario)?;
            if out.is_some() {
                sc.out = out;
            }
            (sc, false)
        }
        Command::Analyze { target, dual, mut point, points, price, format, common } => {
            if let Some(p) = points {
                point.extend(read_points_csv(&p)?);
            }
            let csv = format == Format::Csv;
            if csv && point.is_empty() {
                return Err(Error::Schema("--format csv needs --point or --points".into()));
            }
            (Scenario::new(target, &common, Operation::Analyze { dual, points: point, prices: price }), csv)
        }
        Command::Scan { target, duals, common } => {
            let duals = match duals {
                Some(p) => read_points_csv(&p)?,
                None => Vec::new(),
            };
            (Scenario::new(target, &common, Operation::Scan { duals }), true)
        }
        Command::Check { target, condition, axiom, common } => (Scenario::new(target, &common, Operation::Check { condition, axiom }), false),
        Command::Verify { suite, target, prices, common } => (Scenario::new(target, &common, Operation::Verify { suite, prices }), false),
    };
    let outcome = run(&sc)?;
    if primary_csv {
        let text = outcome.csv.first().map(|c| c.2.as_str()).unwrap_or_default();
        emit(sc.out.as_deref(), text, stdout)?;
    } else {
        emit(sc.out.as_deref(), &outcome.json, stdout)?;
        if let Some(dir) = &sc.csv_dir {
            std::fs::create_dir_all(dir).map_err(|e| Error::Schema(format!("{}: {e}", dir.display())))?;
            for (i, name, text) in &outcome.csv {
                emit(Some(&dir.join(format!("{i}-{name}.csv"))), text, stdout)?;
            }
        }
    }
    Ok(outcome.code)
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `stdout`, diagnostics to `stderr`.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let code = if matches!(e.kind(), DisplayHelp | DisplayVersion) { 0 } else { 1 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            error_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    main_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("suppdiff").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("-1, -2.5").unwrap(), vec![-1.0, -2.5]);
        assert!(parse_point("1,x").is_err());
    }

    #[test]
    fn set_specs() {
        assert_eq!(resolve_set("d4").unwrap().dim(), 3);
        let s = resolve_set(r#"{"production":"cobb-douglas","gamma":2}"#).unwrap();
        assert!(s.contains(&[1.0, 2.0]) && !s.contains(&[1.0, 1.0]));
        let c = resolve_set(r#"{"a":[1,0,1],"cone":{"variant":"lorentz","dim":3}}"#).unwrap();
        assert!(c.contains(&[1.0, 0.0, 1.0]));
        assert!(matches!(resolve_set("ex-adsz"), Err(Error::Schema(_))));
        assert!(matches!(resolve_set("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn bad_input_exits_one() {
        assert_eq!(call(&["analyze", "--set", "nope", "--dual", "-1,-1"]).0, 1);
        assert_eq!(call(&["verify", "--suite", "bogus", "--set", "d4"]).0, 1);
        assert_eq!(call(&["check", "--set", "d4"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn analyze_reports_the_value() {
        let (code, out, _) = call(&["analyze", "--set", "ex2-A3", "--dual", "-1,-1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert!((v["duals"][0]["support"]["value"].as_f64().unwrap() + 2.0).abs() < 1e-6);
    }

    #[test]
    fn scenario_schema_errors() {
        assert!(Scenario::from_json(r#"{"set":"d4"}"#).is_err());
        assert!(Scenario::from_json(r#"{"set":"d4","operations":[{"op":"fly"}]}"#).is_err());
        assert!(Scenario::from_json(r#"{"set":"d4","operations":[],"bogus":1}"#).is_err());
        let s = Scenario::from_json(r#"{"set":{"production":"leontief","gamma":1},"operations":[{"op":"check","condition":"fp-ssc"}],"samples":50}"#).unwrap();
        assert_eq!(s.samples, 50);
        assert!(run(&s).is_ok());
    }
}
