//! Cost functions of production functions, Shephard's lemma, sampled
//! checkers for the production axioms and the harnesses relating them to
//! the conditions on level sets.
//!
//! `c(x*, γ) = inf{<x, x*> : F(x) >= γ} = -σ_{L(γ)}(-x*)`.

use crate::conditions::{check_condition, CheckConfig, Condition};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::report::{shell_quote, Alarm, ConditionReport, GridSummary, SuiteStatus, Tri, Verdict, Witness, MAX_WITNESSES};
use crate::sampling::{self, ball_point, log_uniform, SampleRng};
use crate::sets::{level_set, Axiom, HSet, ProductionFn};
use crate::support::{is_differentiable_at_with, scan, support_raw, Status, SupportConfig};
use crate::tol::FD_REL;
use crate::vector::{dist, lerp, norm, Vector};
use rand::Rng;
use serde::{Deserialize, Serialize};

fn check_prices(f: &ProductionFn, xstar: &Vector) -> Result<()> {
    xstar.check_dim(f.p)?;
    if xstar.as_slice().iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("prices must be strictly positive".into()));
    }
    Ok(())
}

fn cost_raw(set: &HSet, xstar: &[f64], cfg: &SupportConfig) -> Result<f64> {
    let neg: Vec<f64> = xstar.iter().map(|v| -v).collect();
    let s = support_raw(set, &neg, cfg);
    if s.status != Status::Finite || !s.value.is_finite() {
        return Err(Error::Infeasible("cost is not finite at x*".into()));
    }
    Ok(-s.value)
}

/// Minimal expenditure `c(x*, γ)` at strictly positive prices.
pub fn cost_value(f: &ProductionFn, xstar: &Vector, gamma: f64) -> Result<f64> {
    cost_value_with(f, xstar, gamma, &SupportConfig::default())
}

pub fn cost_value_with(f: &ProductionFn, xstar: &Vector, gamma: f64, cfg: &SupportConfig) -> Result<f64> {
    check_prices(f, xstar)?;
    cost_raw(&level_set(f, gamma, None)?, xstar.as_slice(), cfg)
}

/// Outcome of comparing `∇c(·, γ)` with the cost-minimising bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShephardReport {
    pub production: String,
    pub gamma: f64,
    pub xstar: Vec<f64>,
    pub cost: f64,
    /// Whether `c(·, γ)` is differentiable at `x*`.
    pub differentiable: Tri,
    /// Central differences of `c(·, γ)`.
    pub gradient_fd: Vec<f64>,
    /// The unique minimiser, when there is one.
    pub demand: Option<Vec<f64>>,
    #[serde(with = "crate::support::ext_real")]
    pub diameter: f64,
    /// `|∇c - demand| / |demand|` when differentiable.
    pub rel_error: Option<f64>,
}

impl ShephardReport {
    /// Differentiable with the gradient matching the demand to `1e-4`.
    pub fn lemma_holds(&self) -> bool {
        self.differentiable == Tri::True && self.rel_error.is_some_and(|e| e <= 1e-4)
    }
}

/// Compares central differences of `c(·, γ)` (step `h`, default
/// `1e-5 ‖x*‖`) with the argmax of `σ_{L(γ)}` at `-x*`.
pub fn shephard_check(f: &ProductionFn, xstar: &Vector, gamma: f64, h: Option<f64>) -> Result<ShephardReport> {
    check_prices(f, xstar)?;
    shephard_on(&level_set(f, gamma, None)?, &f.label, xstar.as_slice(), gamma, h, &SupportConfig::default())
}

fn shephard_on(set: &HSet, label: &str, xstar: &[f64], gamma: f64, h: Option<f64>, cfg: &SupportConfig) -> Result<ShephardReport> {
    let h = h.unwrap_or(FD_REL * norm(xstar));
    let neg = Vector::raw(xstar.iter().map(|v| -v).collect());
    let d = is_differentiable_at_with(set, &neg, cfg)?;
    if d.verdict == Tri::Indeterminate {
        return Err(Error::Indeterminate(format!("argmax of {} at -x* not resolved", set.label)));
    }
    let mut grad = Vec::with_capacity(xstar.len());
    for i in 0..xstar.len() {
        let mut a = xstar.to_vec();
        let mut b = xstar.to_vec();
        a[i] += h;
        b[i] -= h;
        grad.push((cost_raw(set, &a, cfg)? - cost_raw(set, &b, cfg)?) / (2.0 * h));
    }
    let rel_error = d.gradient.as_ref().map(|g| dist(&grad, g) / norm(g).max(f64::MIN_POSITIVE));
    Ok(ShephardReport {
        production: label.to_string(),
        gamma,
        xstar: xstar.to_vec(),
        cost: -d.argmax.value,
        differentiable: d.verdict,
        gradient_fd: grad,
        demand: d.gradient,
        diameter: d.argmax.diameter,
        rel_error,
    })
}

/// Sampled verdict on one production axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub sample_count: usize,
    pub seed: u64,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    fn from_condition(axiom: Axiom, r: ConditionReport) -> Self {
        Self { axiom, verdict: r.verdict, witnesses: r.witnesses, sample_count: r.sample_count, seed: r.seed }
    }

    /// A vacuous pass, used when the sampler found nothing to test.
    fn vacuous(axiom: Axiom, seed: u64) -> Self {
        Self { axiom, verdict: Verdict::HoldsOnSample, witnesses: Vec::new(), sample_count: 0, seed }
    }
}

/// Radii of the continuity probes, relative to the production scale.
const PROBE_RADII: [f64; 8] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9];
const PROBES_PER_RADIUS: usize = 12;

/// Non-strict comparisons allow the bisection noise of gauge-based `F`.
fn band(v: f64) -> f64 {
    1e-9 * (1.0 + v.abs())
}

/// A jump that survives every probe radius is a discontinuity.
fn jump(v: f64) -> f64 {
    1e-3 * (1.0 + v.abs())
}

fn positive(x: &[f64]) -> bool {
    x.iter().all(|&v| v > 0.0)
}

fn nonneg(x: &[f64]) -> bool {
    x.iter().all(|&v| v >= 0.0)
}

fn strictly_above(a: f64, b: f64) -> bool {
    a > b + 1e-12 * a.abs().max(b.abs())
}

/// `(x, x')` with `x ≧ x'` and `x ≠ x'`.
fn pair_ok(x: &[f64], y: &[f64]) -> bool {
    x.len() == y.len() && nonneg(y) && x.iter().zip(y).all(|(a, b)| a >= b) && x != y
}

/// Judges a witness: `None` outside the axiom's quantifier domain,
/// `Some(true)` for a violation.
fn judge(f: &ProductionFn, ax: Axiom, w: &Witness) -> Option<bool> {
    use Axiom::*;
    let pts = &w.points;
    if pts.iter().any(|p| p.len() != f.p || !nonneg(p)) {
        return None;
    }
    let r_min = PROBE_RADII[PROBE_RADII.len() - 1] * f.scale * (1.0 + 1e-9);
    match ax {
        F1 => Some(f.eval(&vec![0.0; f.p]) != 0.0),
        F2 | F2b | F2c | F2d => {
            let (x, y) = (pts.first()?, pts.get(1)?);
            if !pair_ok(x, y) {
                return None;
            }
            let (fx, fy) = (f.eval(x), f.eval(y));
            match ax {
                F2 => Some(fx < fy - band(fy)),
                F2c if !(fy > 0.0) => None,
                F2d if !positive(y) => None,
                _ => Some(!strictly_above(fx, fy)),
            }
        }
        F3 | F3b | F3c | F3d => {
            let (x, y, lam) = (pts.first()?, pts.get(1)?, w.lambda?);
            if !(lam > 0.0 && lam < 1.0) || x == y {
                return None;
            }
            let (fx, fy) = (f.eval(x), f.eval(y));
            let low = fx.min(fy);
            let fm = f.eval(&lerp(x, y, lam));
            match ax {
                F3 => Some(fm < low - band(low)),
                F3c if !(fx > 0.0 && fy > 0.0) => None,
                F3d if !(positive(x) && positive(y)) => None,
                _ => Some(!strictly_above(fm, low)),
            }
        }
        F4 | F4b | F4c | F4d => {
            let (c, y) = (pts.first()?, pts.get(1)?);
            if dist(c, y) > r_min {
                return None;
            }
            let (fc, fy) = (f.eval(c), f.eval(y));
            match ax {
                F4 => Some(fy - fc > jump(fc)),
                F4c if !(fc > 0.0 && fy > 0.0) => None,
                F4d if !(positive(c) && positive(y)) => None,
                _ => Some((fy - fc).abs() > jump(fc)),
            }
        }
        F5 => {
            let x = pts.first()?;
            positive(x).then(|| !(f.eval(x) > 0.0))
        }
    }
}

/// Re-evaluates an axiom witness; `true` when it still violates the axiom.
pub fn replay_axiom(f: &ProductionFn, ax: Axiom, w: &Witness) -> bool {
    judge(f, ax, w) == Some(true)
}

/// Point of `R^p_+` at the production scale: coordinates log-uniform on
/// `[1e-3 s, 2 s]`, each zero with probability `zero_prob`.
fn orthant_point(r: &mut SampleRng, p: usize, s: f64, zero_prob: f64) -> Vec<f64> {
    (0..p).map(|_| if r.gen::<f64>() < zero_prob { 0.0 } else { log_uniform(r, 1e-3 * s, 2.0 * s) }).collect()
}

fn axiom_stream(ax: Axiom) -> u64 {
    200 + Axiom::ALL.iter().position(|&a| a == ax).unwrap_or(0) as u64
}

fn candidates(f: &ProductionFn, ax: Axiom, cfg: &CheckConfig) -> Vec<Witness> {
    use Axiom::*;
    let mut r = sampling::rng(cfg.seed, axiom_stream(ax));
    let (p, s, n) = (f.p, f.scale, cfg.samples);
    match ax {
        F1 => vec![Witness::new(vec![vec![0.0; p]], None)],
        F5 => (0..n).map(|_| Witness::new(vec![orthant_point(&mut r, p, s, 0.0)], None)).collect(),
        F2 | F2b | F2c | F2d => {
            let mut out: Vec<Witness> = f.targets.pairs.iter().map(|(a, b)| Witness::new(vec![a.clone(), b.clone()], None)).collect();
            for _ in 0..n {
                let y = orthant_point(&mut r, p, s, 0.1);
                let mut k = orthant_point(&mut r, p, 0.5 * s, 0.3);
                if k.iter().all(|&v| v == 0.0) {
                    k[r.gen_range(0..p)] = log_uniform(&mut r, 1e-3 * s, s);
                }
                let x = y.iter().zip(&k).map(|(a, b)| a + b).collect();
                out.push(Witness::new(vec![x, y], None));
            }
            out
        }
        F3 | F3b | F3c | F3d => {
            let mut out: Vec<Witness> = f.targets.triples.iter().map(|(a, b, l)| Witness::new(vec![a.clone(), b.clone()], Some(*l))).collect();
            for i in 0..n {
                let x = orthant_point(&mut r, p, s, 0.1);
                let y = orthant_point(&mut r, p, s, 0.1);
                let lam = if i % 2 == 0 { 0.5 } else { r.gen_range(0.01..0.99) };
                out.push(Witness::new(vec![x, y], Some(lam)));
            }
            out
        }
        F4 | F4b | F4c | F4d => {
            let mut centres = f.targets.points.clone();
            centres.extend((0..n.div_ceil(8)).map(|_| orthant_point(&mut r, p, s, 0.1)));
            centres.into_iter().filter_map(|c| continuity_witness(f, ax, &c, &mut r)).collect()
        }
    }
}

/// Largest admissible deviation at each probe radius; a witness at the
/// smallest radius when the deviation never drops below the jump size.
fn continuity_witness(f: &ProductionFn, ax: Axiom, c: &[f64], r: &mut SampleRng) -> Option<Witness> {
    let fc = f.eval(c);
    if ax == Axiom::F4c && !(fc > 0.0) || ax == Axiom::F4d && !positive(c) {
        return None;
    }
    let mut worst = None;
    for &rel in &PROBE_RADII {
        let rad = rel * f.scale;
        let mut best: Option<(f64, Vec<f64>)> = None;
        for i in 0..PROBES_PER_RADIUS + 2 * f.p {
            let u = if i < 2 * f.p {
                let mut e = vec![0.0; f.p];
                e[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
                e
            } else {
                ball_point(r, f.p)
            };
            let y: Vec<f64> = c.iter().zip(&u).map(|(a, b)| (a + rad * b).max(0.0)).collect();
            let w = Witness::new(vec![c.to_vec(), y.clone()], None);
            // only deviations the judge would accept count
            let dev = f.eval(&y) - fc;
            let dev = if ax == Axiom::F4 { dev } else { dev.abs() };
            if judge_domain_only(f, ax, &w) && best.as_ref().is_none_or(|b| dev > b.0) {
                best = Some((dev, y));
            }
        }
        match best {
            Some((dev, y)) if dev > jump(fc) => worst = Some(y),
            _ => return None,
        }
    }
    worst.map(|y| Witness::new(vec![c.to_vec(), y], None))
}

fn judge_domain_only(f: &ProductionFn, ax: Axiom, w: &Witness) -> bool {
    let (c, y) = (&w.points[0], &w.points[1]);
    match ax {
        Axiom::F4c => f.eval(c) > 0.0 && f.eval(y) > 0.0,
        Axiom::F4d => positive(c) && positive(y),
        _ => true,
    }
}

/// Samples the axiom's quantifier domain, plus the production's targets.
///
/// Continuity axioms are probed over balls of shrinking radius around the
/// target points and random centres; a deviation of `1e-3 (1 + |F|)` that
/// persists down to radius `1e-9` times the scale counts as a jump.
pub fn check_axiom(f: &ProductionFn, ax: Axiom, cfg: &CheckConfig) -> Result<AxiomReport> {
    let cands = candidates(f, ax, cfg);
    let is_cont = matches!(ax, Axiom::F4 | Axiom::F4b | Axiom::F4c | Axiom::F4d);
    let mut used = 0;
    let mut ws = Vec::new();
    for w in cands {
        match judge(f, ax, &w) {
            Some(true) => {
                used += 1;
                ws.push(w);
            }
            Some(false) => used += 1,
            None => {}
        }
    }
    if is_cont {
        // witnesses only exist where a jump was found; count the centres
        used = f.targets.points.len() + cfg.samples.div_ceil(8);
    }
    if used == 0 {
        return Err(Error::EmptyDomain(ax.name().into()));
    }
    Ok(AxiomReport::from_condition(ax, ConditionReport::from_witnesses(ax.name(), ws, used, cfg.seed)))
}

fn production_source<'a>(f: &'a ProductionFn, cfg: &'a CheckConfig) -> &'a str {
    cfg.source.as_deref().unwrap_or(&f.label)
}

/// Command line that reruns one axiom check.
pub fn axiom_command(f: &ProductionFn, ax: Axiom, cfg: &CheckConfig) -> String {
    format!("suppdiff check --production {} --axiom {} --seed {} --samples {}", shell_quote(production_source(f, cfg)), ax.name(), cfg.seed, cfg.samples)
}

/// `--set` argument naming the level set `L(γ)` of a production function.
pub fn level_source(production: &str, gamma: f64) -> String {
    serde_json::json!({ "production": production, "gamma": gamma }).to_string()
}

fn axiom_or_vacuous(f: &ProductionFn, ax: Axiom, cfg: &CheckConfig) -> Result<AxiomReport> {
    match check_axiom(f, ax, cfg) {
        Err(Error::EmptyDomain(_)) => Ok(AxiomReport::vacuous(ax, cfg.seed)),
        r => r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicationStatus {
    /// Premises and conclusion hold on the sample.
    Confirmed,
    /// Some premise is violated, so nothing is claimed.
    NotApplicable,
    /// The conclusion's witness also violates a premise: the premise sampler
    /// simply missed it.
    SamplingGap,
    /// Premises hold and the conclusion's witness does not touch them.
    Contradicted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationRow {
    pub part: String,
    pub premises: Vec<Axiom>,
    pub conclusion: Axiom,
    pub status: ImplicationStatus,
}

/// The implications among the production axioms, grouped by part.
pub fn axiom_implications() -> Vec<(&'static str, Vec<Axiom>, Axiom)> {
    use Axiom::*;
    vec![
        ("i", vec![F2b], F2c),
        ("i", vec![F2c], F2),
        ("i", vec![F2b], F2d),
        ("i", vec![F2c, F5], F2d),
        ("i", vec![F2d, F4b], F2),
        ("ii", vec![F3b], F3c),
        ("ii", vec![F3c], F3),
        ("ii", vec![F3b], F3d),
        ("ii", vec![F3c, F5], F3d),
        ("ii", vec![F3d, F4b], F3),
        ("iii", vec![F2, F3b], F2b),
        ("iii", vec![F2, F3c], F2c),
        ("iii", vec![F2, F3d], F2d),
        ("iv", vec![F4b], F4c),
        ("iv", vec![F4b], F4d),
        ("iv", vec![F4b], F4),
        ("iv", vec![F4c, F4], F4b),
        ("iv", vec![F4c, F5], F4d),
    ]
}

/// Implication matrix over the axioms for one production function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop3Report {
    pub production: String,
    pub status: SuiteStatus,
    pub axioms: Vec<AxiomReport>,
    pub implications: Vec<ImplicationRow>,
    pub notes: Vec<String>,
    pub alarms: Vec<Alarm>,
}

/// Evaluates every axiom on shared samples, then checks that no
/// implication has holding premises and a violated conclusion whose
/// witness leaves the premises intact.
pub fn harness_prop3(f: &ProductionFn, cfg: &CheckConfig) -> Result<Prop3Report> {
    let axioms: Vec<AxiomReport> = Axiom::ALL.iter().map(|&a| axiom_or_vacuous(f, a, cfg)).collect::<Result<_>>()?;
    let get = |a: Axiom| axioms.iter().find(|r| r.axiom == a).expect("all axioms checked");
    let mut rows = Vec::new();
    let mut alarms = Vec::new();
    let mut notes = Vec::new();
    for r in axioms.iter().filter(|r| r.sample_count == 0) {
        notes.push(format!("{} holds vacuously: no sample in its domain", r.axiom.name()));
    }
    for (part, premises, conclusion) in axiom_implications() {
        let status = if premises.iter().any(|&a| !get(a).holds()) {
            ImplicationStatus::NotApplicable
        } else if get(conclusion).holds() {
            ImplicationStatus::Confirmed
        } else {
            let w = &get(conclusion).witnesses;
            let transfers = |wi: &Witness| premises.iter().any(|&a| replay_axiom(f, a, wi) || transferred(f, a, conclusion, wi));
            if w.iter().all(transfers) {
                ImplicationStatus::SamplingGap
            } else {
                let names: Vec<&str> = premises.iter().map(|a| a.name()).collect();
                alarms.push(Alarm {
                    id: format!("prop3/{}", conclusion.name()),
                    message: format!("{} hold on the sample but {} is violated", names.join(" and "), conclusion.name()),
                    witness: w.iter().find(|wi| !transfers(wi)).cloned(),
                    replay: axiom_command(f, conclusion, cfg),
                });
                ImplicationStatus::Contradicted
            }
        };
        rows.push(ImplicationRow { part: part.into(), premises, conclusion, status });
    }
    let status = if alarms.is_empty() { SuiteStatus::Pass } else { SuiteStatus::Alarm };
    Ok(Prop3Report { production: f.label.clone(), status, axioms, implications: rows, notes, alarms })
}

/// Whether a conclusion witness maps onto a premise witness of another
/// shape: a monotonicity pair `x ≥ x'` yields the quasiconcavity triple
/// `(x'', x', λ)` with `x'' = x' + (x - x')/λ`, and a continuity pair is
/// shared by all continuity axioms.
fn transferred(f: &ProductionFn, premise: Axiom, conclusion: Axiom, w: &Witness) -> bool {
    use Axiom::*;
    let mono = matches!(conclusion, F2 | F2b | F2c | F2d);
    let qc = matches!(premise, F3 | F3b | F3c | F3d);
    if mono && qc && w.points.len() == 2 {
        let (x, y) = (&w.points[0], &w.points[1]);
        return [0.5, 0.25, 0.1].iter().any(|&lam| {
            let far: Vec<f64> = x.iter().zip(y).map(|(a, b)| b + (a - b) / lam).collect();
            replay_axiom(f, premise, &Witness::new(vec![far, y.clone()], Some(lam)))
        });
    }
    false
}

/// One level of the cost-differentiability harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaSection {
    pub gamma: f64,
    pub axioms: Vec<AxiomReport>,
    pub conditions: Vec<ConditionReport>,
    pub differentiability_grid: Option<GridSummary>,
    pub alarms: Vec<Alarm>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaijoReport {
    pub production: String,
    pub status: SuiteStatus,
    pub sections: Vec<GammaSection>,
    pub notes: Vec<String>,
    pub alarms: Vec<Alarm>,
}

const SAIJO_AXIOMS: [Axiom; 4] = [Axiom::F2c, Axiom::F3, Axiom::F3c, Axiom::F4b];

/// Cost differentiability against the axioms, per level `γ`.
///
/// With `F` continuous (F.4b on the sample): F.2c must give (fp-ssc) and
/// F.3c must give (r-sas) on `L(γ)`; F.3c must give differentiability on
/// the grid; F.2c with differentiability at every level must give F.3.
/// Failures with F.4b violated are recorded as findings, not alarms.
pub fn harness_saijo(f: &ProductionFn, gammas: &[f64], grid: &[Vec<f64>], cfg: &CheckConfig) -> Result<SaijoReport> {
    let axioms: Vec<AxiomReport> = SAIJO_AXIOMS.iter().map(|&a| axiom_or_vacuous(f, a, cfg)).collect::<Result<_>>()?;
    let holds = |a: Axiom| axioms.iter().any(|r| r.axiom == a && r.holds());
    let continuous = holds(Axiom::F4b);
    let src = production_source(f, cfg).to_string();
    let mut report = SaijoReport { production: f.label.clone(), status: SuiteStatus::Pass, sections: Vec::new(), notes: Vec::new(), alarms: Vec::new() };
    if !continuous {
        report.notes.push("F.4b violated on the sample: continuity hypotheses fail, findings below raise no alarm".into());
    }
    let mut all_differentiable = true;
    for &gamma in gammas {
        let mut sec = GammaSection { gamma, axioms: axioms.clone(), conditions: Vec::new(), differentiability_grid: None, alarms: Vec::new(), notes: Vec::new() };
        let set = match level_set(f, gamma, None) {
            Ok(s) => s,
            Err(e) => {
                sec.notes.push(format!("level skipped: {e}"));
                report.sections.push(sec);
                continue;
            }
        };
        let lcfg = CheckConfig { source: Some(level_source(&src, gamma)), ..cfg.clone() };
        let fp = check_condition(&set, Condition::TranslatesIntK, &lcfg)?;
        let rsas = check_condition(&set, Condition::ChordsIntK, &lcfg)?;
        let rows = scan(&set, grid, &lcfg.support())?;
        let g = GridSummary::from_rows(&rows);
        if g.indeterminate > 0 {
            report.status = report.status.worst(SuiteStatus::Indeterminate);
            sec.notes.push(format!("{} grid points could not be classified", g.indeterminate));
        }
        all_differentiable &= g.all_differentiable();
        let conclude = |ok: bool, premises: &[Axiom], id: &str, msg: &str, witness: Option<Witness>, replay: String, sec: &mut GammaSection| {
            if ok || !premises.iter().all(|&a| holds(a)) {
                return;
            }
            if continuous {
                sec.alarms.push(Alarm { id: id.into(), message: msg.into(), witness, replay });
            } else {
                sec.notes.push(format!("{msg}; hypothesis F.4b violated, no alarm"));
            }
        };
        conclude(fp.holds(), &[Axiom::F2c], "saijo/F.2c-fp-ssc", "F.2c holds but L(γ) violates fp-ssc", fp.witnesses.first().cloned(), lcfg.check_command(&set, "fp-ssc"), &mut sec);
        conclude(rsas.holds(), &[Axiom::F3c], "saijo/F.3c-r-sas", "F.3c holds but L(γ) violates r-sas", rsas.witnesses.first().cloned(), lcfg.check_command(&set, "r-sas"), &mut sec);
        let kink = g.kinks.first().map(|k| Witness::new(vec![k.clone()], None));
        conclude(g.non_differentiable == 0, &[Axiom::F3c], "saijo/a", "F.3c holds but the cost function is not differentiable", kink, lcfg.scan_command(&set), &mut sec);
        if fp.holds() && !holds(Axiom::F2c) {
            sec.notes.push("fp-ssc holds on L(γ) while F.2c is violated: the converse of F.2c => fp-ssc fails".into());
        }
        if rsas.holds() && !holds(Axiom::F3c) {
            sec.notes.push("r-sas holds on L(γ) while F.3c is violated: the converse of F.3c => r-sas fails".into());
        }
        if g.all_differentiable() && !holds(Axiom::F3c) {
            sec.notes.push("cost differentiable on the grid while F.3c is violated".into());
        }
        if g.non_differentiable > 0 {
            sec.notes.push(format!("cost not differentiable at {} grid points (max argmax diameter {:.6})", g.non_differentiable, g.max_diameter));
        }
        sec.conditions = vec![fp, rsas];
        sec.differentiability_grid = Some(g);
        report.sections.push(sec);
    }
    let f3 = axioms.iter().find(|r| r.axiom == Axiom::F3).expect("checked");
    if holds(Axiom::F2c) && all_differentiable && !f3.holds() && !report.sections.is_empty() {
        let msg = "F.2c holds and the cost is differentiable at every level tested, but F.3 fails";
        if continuous {
            report.alarms.push(Alarm { id: "saijo/b".into(), message: msg.into(), witness: f3.witnesses.first().cloned(), replay: axiom_command(f, Axiom::F3, cfg) });
        } else {
            report.notes.push(format!("{msg}; hypothesis F.4b violated, no alarm"));
        }
    }
    if !report.alarms.is_empty() || report.sections.iter().any(|s| !s.alarms.is_empty()) {
        report.status = report.status.worst(SuiteStatus::Alarm);
    }
    Ok(report)
}

/// Shephard's lemma at the price `(1, ..., 1)` and at random prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShephardSuite {
    pub production: String,
    pub gamma: f64,
    pub status: SuiteStatus,
    pub checks: Vec<ShephardReport>,
    pub differentiable: usize,
    pub non_differentiable: usize,
    #[serde(with = "crate::support::ext_real")]
    pub max_rel_error: f64,
    pub axioms: Vec<AxiomReport>,
    pub notes: Vec<String>,
    pub alarms: Vec<Alarm>,
}

/// Random prices with coordinates log-uniform on `[0.1, 10]`.
pub fn random_prices(p: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = sampling::rng(seed, 300);
    (0..n).map(|_| (0..p).map(|_| log_uniform(&mut r, 0.1, 10.0)).collect()).collect()
}

/// Checks the gradient of the cost against the demand at `prices`. A
/// mismatch where the minimiser is unique is an alarm; a kink is an alarm
/// only when F.3c and F.4b both hold, since together they force differentiability.
pub fn shephard_suite(f: &ProductionFn, gamma: f64, prices: &[Vec<f64>], cfg: &CheckConfig) -> Result<ShephardSuite> {
    let set = level_set(f, gamma, None)?;
    let scfg = cfg.support();
    let checks: Vec<Result<ShephardReport>> = par_map(prices, |x| {
        if x.len() != f.p || !positive(x) {
            return Err(Error::Domain("prices must be strictly positive".into()));
        }
        shephard_on(&set, &f.label, x, gamma, None, &scfg)
    });
    let axioms: Vec<AxiomReport> = [Axiom::F3c, Axiom::F4b].iter().map(|&a| axiom_or_vacuous(f, a, cfg)).collect::<Result<_>>()?;
    let hyp = axioms.iter().all(|a| a.holds());
    let mut s = ShephardSuite {
        production: f.label.clone(),
        gamma,
        status: SuiteStatus::Pass,
        checks: Vec::new(),
        differentiable: 0,
        non_differentiable: 0,
        max_rel_error: 0.0,
        axioms,
        notes: Vec::new(),
        alarms: Vec::new(),
    };
    let replay = format!("suppdiff verify --suite shephard --production {} --gamma {} --seed {} --samples {}", shell_quote(production_source(f, cfg)), gamma, cfg.seed, cfg.samples);
    for c in checks {
        let c = match c {
            Ok(c) => c,
            Err(Error::Indeterminate(m)) => {
                s.status = s.status.worst(SuiteStatus::Indeterminate);
                s.notes.push(m);
                continue;
            }
            Err(e) => return Err(e),
        };
        match c.differentiable {
            Tri::True => {
                s.differentiable += 1;
                let e = c.rel_error.unwrap_or(f64::INFINITY);
                s.max_rel_error = s.max_rel_error.max(e);
                if e > 1e-4 {
                    s.alarms.push(Alarm {
                        id: "shephard/gradient".into(),
                        message: format!("finite-difference gradient differs from the demand by {e:.3e} relative"),
                        witness: Some(Witness::new(vec![c.xstar.clone(), c.gradient_fd.clone()], None)),
                        replay: replay.clone(),
                    });
                }
            }
            _ => {
                s.non_differentiable += 1;
                if hyp {
                    s.alarms.push(Alarm {
                        id: "shephard/differentiability".into(),
                        message: "F.3c and F.4b hold but the cost function has a kink".into(),
                        witness: Some(Witness::new(vec![c.xstar.clone()], None)),
                        replay: replay.clone(),
                    });
                }
            }
        }
        s.checks.push(c);
    }
    s.alarms.truncate(MAX_WITNESSES);
    if s.non_differentiable > 0 {
        let d = s.checks.iter().filter(|c| c.differentiable == Tri::False).map(|c| c.diameter).fold(0.0, f64::max);
        s.notes.push(format!("cost not differentiable at {} prices (max argmax diameter {d:.6})", s.non_differentiable));
        if !hyp {
            let failed: Vec<&str> = s.axioms.iter().filter(|a| !a.holds()).map(|a| a.axiom.name()).collect();
            s.notes.push(format!("hypothesis {} violated, no alarm", failed.join(" and ")));
        }
    }
    if !s.alarms.is_empty() {
        s.status = s.status.worst(SuiteStatus::Alarm);
    }
    Ok(s)
}
