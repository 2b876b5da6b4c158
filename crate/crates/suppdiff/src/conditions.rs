//! Sampled checkers for the geometric conditions on sets, and harnesses that
//! hunt for counterexamples to the implications linking them with the
//! differentiability of the support function.
//!
//! Every checker produces candidate witnesses and passes them through the
//! same judgement used by [`replay`], so a `violated` verdict always fails
//! again on replay. `holds_on_sample` is never a proof.
//!
//! Interior tests probe `x + r u` for a fixed direction set `u` and radii
//! `r` in [`INTERIOR_RADII`] times `bound_hint`; a point is interior when
//! some radius has every probe inside. `E_C` is tested at a fixed step
//! `δ = E_STEP_REL * bound_hint` along a direction grid of `K`, so it is
//! resolution-limited.

use crate::cone::Chart;
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::report::{shell_quote, Alarm, ConditionReport, GridSummary, SuiteStatus, TheoremReport, Witness};
use crate::sampling::{self, ball_point, box_point, boundary_sample, cone_directions, cone_point, member_sample, SampleRng};
use crate::sets::{HSet, ProbePair};
use crate::support::{argmax_set_with, dual_grid, scan, support_raw, SupportConfig};
use crate::tol::{Tolerances, CHORD_SEP_REL, DEFAULT_SEED, E_DIRECTIONS, E_STEP_REL, INTERIOR_RADII};
use crate::vector::{add, dist, dot, lerp, norm, normalize, sub, Vector};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The sampled conditions. Serialized names are the condition ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `rs1a`: points strictly inside a chord of `C` lie in `int C`.
    #[serde(rename = "rs1a")]
    StrictChords,
    /// `r-s1a`: chords between boundary points of `C` leave the boundary.
    #[serde(rename = "r-s1a")]
    BoundaryChords,
    /// `rs2`: chord points lie in `C + (K \ {0})`, that is outside `E_C`.
    #[serde(rename = "rs2")]
    TranslatedChords,
    /// `rs2c`: chords between points of `E_C` leave `E_C`.
    #[serde(rename = "rs2c")]
    EChords,
    /// `fps-z`: chords between points of `S_C` leave `S_C`.
    #[serde(rename = "fps-z")]
    SChords,
    /// `fps`: chords between points of `SE(A;K)` leave `SE(A;K)`.
    #[serde(rename = "fps")]
    SeChords,
    /// `fp-ssc`: `A + (K \ {0}) ⊂ int_K A`.
    #[serde(rename = "fp-ssc")]
    TranslatesIntK,
    /// `r-s`: `A + (K \ {0}) ⊂ int A`.
    #[serde(rename = "r-s")]
    TranslatesInt,
    /// `r-sa`: chords between points of `A ∩ int K` lie in `int A`.
    #[serde(rename = "r-sa")]
    InteriorChords,
    /// `r-sas`: chords of `A` lie in `int_K A`.
    #[serde(rename = "r-sas")]
    ChordsIntK,
    /// `r-sb`: chords between points of `bd A` leave `bd A`.
    #[serde(rename = "r-sb")]
    BoundaryChordsA,
    /// Condition (H): `A = A + K ⊂ K \ {0}`.
    #[serde(rename = "H")]
    H,
}

impl Condition {
    pub const ALL: [Condition; 12] = [
        Condition::StrictChords,
        Condition::BoundaryChords,
        Condition::TranslatedChords,
        Condition::EChords,
        Condition::SChords,
        Condition::SeChords,
        Condition::TranslatesIntK,
        Condition::TranslatesInt,
        Condition::InteriorChords,
        Condition::ChordsIntK,
        Condition::BoundaryChordsA,
        Condition::H,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Condition::StrictChords => "rs1a",
            Condition::BoundaryChords => "r-s1a",
            Condition::TranslatedChords => "rs2",
            Condition::EChords => "rs2c",
            Condition::SChords => "fps-z",
            Condition::SeChords => "fps",
            Condition::TranslatesIntK => "fp-ssc",
            Condition::TranslatesInt => "r-s",
            Condition::InteriorChords => "r-sa",
            Condition::ChordsIntK => "r-sas",
            Condition::BoundaryChordsA => "r-sb",
            Condition::H => "H",
        }
    }

    pub fn parse(s: &str) -> Option<Condition> {
        Condition::ALL.into_iter().find(|c| c.id() == s)
    }

    /// Conditions stated for closed convex sets with recession cone `K`.
    pub fn needs_convexity(self) -> bool {
        matches!(
            self,
            Condition::StrictChords | Condition::BoundaryChords | Condition::TranslatedChords | Condition::EChords | Condition::SChords | Condition::SeChords
        )
    }

    /// Conditions quantifying over pairs and a chord parameter.
    fn is_chord(self) -> bool {
        !matches!(self, Condition::TranslatesIntK | Condition::TranslatesInt | Condition::H)
    }
}

/// Sampling parameters shared by the checkers and harnesses.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Random pairs (or points) drawn per condition.
    pub samples: usize,
    pub seed: u64,
    /// Size of the dual grid used for `S_C`, `SE(A;K)` and differentiability.
    pub grid: usize,
    pub tol: Tolerances,
    /// Extra `(x, x', λ)` tried before the random draws.
    pub targets: Vec<(Vec<f64>, Vec<f64>, f64)>,
    /// How the set was named on the command line, for replay commands.
    pub source: Option<String>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { samples: 1000, seed: DEFAULT_SEED, grid: 100, tol: Tolerances::default(), targets: Vec::new(), source: None }
    }
}

impl CheckConfig {
    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid = n;
        self
    }

    pub fn with_source(mut self, s: impl Into<String>) -> Self {
        self.source = Some(s.into());
        self
    }

    pub fn with_targets(mut self, t: Vec<(Vec<f64>, Vec<f64>, f64)>) -> Self {
        self.targets = t;
        self
    }

    pub fn support(&self) -> SupportConfig {
        SupportConfig { tol: self.tol, seed: self.seed }
    }

    fn source_for<'a>(&'a self, set: &'a HSet) -> &'a str {
        self.source.as_deref().unwrap_or(&set.label)
    }

    /// Command line that reruns `check` for one condition.
    pub fn check_command(&self, set: &HSet, id: &str) -> String {
        format!(
            "suppdiff check --set {} --condition {} --seed {} --samples {} --grid {}",
            shell_quote(self.source_for(set)),
            id,
            self.seed,
            self.samples,
            self.grid
        )
    }

    /// Command line that rescans the dual grid.
    /// Command line that reruns a theorem suite on this set.
    pub fn verify_command(&self, suite: &str, set: &HSet) -> String {
        format!("suppdiff verify --suite {suite} --set {} --seed {} --samples {} --grid {}", shell_quote(self.source_for(set)), self.seed, self.samples, self.grid)
    }

    pub fn scan_command(&self, set: &HSet) -> String {
        format!("suppdiff scan --set {} --grid {} --seed {}", shell_quote(self.source_for(set)), self.grid, self.seed)
    }
}

/// Unit probe directions: `±e_i`, `±(e_i ± e_j)/√2` and 16 fixed random ones.
fn probe_directions(p: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let e = |i: usize| -> Vec<f64> { (0..p).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };
    for i in 0..p {
        out.push(e(i));
        out.push(e(i).iter().map(|v| -v).collect());
        for j in i + 1..p {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; p];
                v[i] = si;
                v[j] = sj;
                out.push(normalize(&v));
            }
        }
    }
    let mut r = sampling::rng(0x5eed_d1e5, 0);
    out.extend((0..16).map(|_| normalize(&ball_point(&mut r, p))));
    out
}

/// Probe geometry for one set.
struct Probe<'a> {
    set: &'a HSet,
    dirs: Vec<Vec<f64>>,
    e_dirs: Vec<Vec<f64>>,
    delta: f64,
}

impl<'a> Probe<'a> {
    fn new(set: &'a HSet) -> Self {
        Self { set, dirs: probe_directions(set.dim()), e_dirs: cone_directions(&set.cone, E_DIRECTIONS), delta: E_STEP_REL * set.bound_hint }
    }

    fn inside_at(&self, x: &[f64], r: f64, rel_k: bool, extra: &[Vec<f64>]) -> bool {
        // below this radius a second order gap between bd K and bd A rounds away
        let floor = 1e-7 * norm(x).max(self.set.bound_hint);
        self.dirs.iter().chain(extra).all(|u| {
            let y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + r * b).collect();
            if rel_k && !self.set.cone.contains_raw(&y) {
                // straight probes miss the sliver between two tangent curved
                // boundaries, so slide the probe back onto bd K instead
                return r >= floor && self.onto_cone(&y, r).is_none_or(|z| self.set.contains(&z));
            }
            self.set.contains(&y)
        })
    }

    /// First point of `y + t e` in `K`, `e` the interior point, if `t <= 4r`.
    fn onto_cone(&self, y: &[f64], r: f64) -> Option<Vec<f64>> {
        let k = &self.set.cone;
        let e = normalize(k.interior_point());
        let at = |t: f64| -> Vec<f64> { y.iter().zip(&e).map(|(a, b)| a + t * b).collect() };
        let mut hi = r;
        while !k.contains_raw(&at(hi)) {
            hi *= 2.0;
            if hi > 4.0 * r {
                return None;
            }
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if k.contains_raw(&at(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(at(hi))
    }

    fn interior(&self, x: &[f64], rel_k: bool) -> bool {
        self.set.contains(x) && INTERIOR_RADII.iter().any(|&f| self.inside_at(x, f * self.set.bound_hint, rel_k, &[]))
    }

    fn boundary(&self, x: &[f64]) -> bool {
        self.set.contains(x) && !self.interior(x, false)
    }

    /// `x ∈ E_C` at step `step`: a member that cannot be written as a member
    /// plus `step` times a grid direction of `K`. On a strictly convex cone
    /// the grid never hits the ray through `x`, so `x - w ∈ K \ {0}` for the
    /// witness `w` also excludes `x`; for convex `C` that is exact.
    fn in_e(&self, x: &[f64], step: f64) -> bool {
        if !self.set.contains(x) {
            return false;
        }
        let from_w = sub(x, &self.set.witness);
        let len = norm(&from_w);
        if len > step && self.set.cone.margin(&from_w) >= -1e-12 * len {
            return false;
        }
        self.e_dirs.iter().all(|d| {
            let y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a - step * b).collect();
            !self.set.contains(&y)
        })
    }

    /// Slides `x` along `x*` onto `bd C`. Argmax representatives are optimal
    /// only to the value tolerance, so they can sit above the exposed face.
    fn snap(&self, x: &[f64], xstar: &[f64]) -> Vec<f64> {
        let u = normalize(xstar);
        let at = |t: f64| -> Vec<f64> { x.iter().zip(&u).map(|(a, b)| a + t * b).collect() };
        if !self.set.contains(x) {
            return x.to_vec();
        }
        let mut hi = 1e-12 * self.set.bound_hint;
        while self.set.contains(&at(hi)) {
            hi *= 2.0;
            if hi > self.set.bound_hint {
                return x.to_vec();
            }
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.set.contains(&at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(lo)
    }

    /// Not interior at radius `r` or above, with `-E` directions added to the
    /// probes so that `in_e(x, r)` implies `boundary_at(x, r)`.
    fn boundary_at(&self, x: &[f64], r: f64) -> bool {
        let neg: Vec<Vec<f64>> = self.e_dirs.iter().map(|d| d.iter().map(|v| -v).collect()).collect();
        self.set.contains(x) && !INTERIOR_RADII.iter().map(|f| f * self.set.bound_hint).filter(|&s| s >= r).any(|s| self.inside_at(x, s, false, &neg))
    }
}

/// `x ∈ int A` (or `int_K A` when `rel_k`), by directional probes.
pub fn is_interior(set: &HSet, x: &[f64], rel_k: bool) -> bool {
    Probe::new(set).interior(x, rel_k)
}

/// `x ∈ int_K A`, the interior relative to `K` with its induced topology.
#[allow(non_snake_case)]
pub fn check_interior_rel_K(set: &HSet, x: &Vector) -> Result<bool> {
    x.check_dim(set.dim())?;
    if set.cone.margin(x.as_slice()) < -1e-12 * x.norm().max(1.0) {
        return Err(Error::OutsideCone);
    }
    Ok(is_interior(set, x.as_slice(), true))
}

/// `x ∈ int A`.
pub fn check_interior(set: &HSet, x: &Vector) -> Result<bool> {
    x.check_dim(set.dim())?;
    Ok(is_interior(set, x.as_slice(), false))
}

/// `x ∈ E_C` at the default resolution.
pub fn in_e_set(set: &HSet, x: &[f64]) -> bool {
    let p = Probe::new(set);
    p.in_e(x, p.delta)
}

struct Draw<'a> {
    set: &'a HSet,
    chart: Chart,
    rng: SampleRng,
}

impl<'a> Draw<'a> {
    fn new(set: &'a HSet, seed: u64, stream: u64) -> Self {
        Self { set, chart: set.cone.chart(), rng: sampling::rng(seed, stream) }
    }

    fn member(&mut self) -> Option<Vec<f64>> {
        if self.set.satisfies_h {
            return member_sample(self.set, &self.chart, &mut self.rng);
        }
        let b = self.set.bound_hint;
        (0..256).map(|_| box_point(&mut self.rng, self.set.dim(), -b, b)).find(|x| self.set.contains(x))
    }

    fn boundary(&mut self) -> Option<Vec<f64>> {
        if self.set.satisfies_h {
            return boundary_sample(self.set, &self.chart, &mut self.rng, 0.25);
        }
        // bisect between a member and a random point outside
        let inner = self.member()?;
        let b = self.set.bound_hint;
        let outer = (0..256).map(|_| box_point(&mut self.rng, self.set.dim(), -2.0 * b, 2.0 * b)).find(|x| !self.set.contains(x))?;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.set.contains(&lerp(&outer, &inner, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lerp(&outer, &inner, lo))
    }

    fn translate(&mut self) -> Vec<f64> {
        let b = self.set.bound_hint;
        let k = cone_point(&self.chart, &mut self.rng, 1e-2 * b, b, 0.3);
        // chart boundary points can round to just outside K
        let e = self.set.cone.interior_point().to_vec();
        let mut eps = 1e-16 * norm(&k) / norm(&e);
        let mut out = k.clone();
        while !self.set.cone.contains_raw(&out) {
            out = k.iter().zip(&e).map(|(a, b)| a + eps * b).collect();
            eps *= 4.0;
        }
        out
    }

    /// `1/2` on even draws, uniform on `[0.01, 0.99]` otherwise.
    fn lambda(&mut self, i: usize) -> f64 {
        if i.is_multiple_of(2) {
            0.5
        } else {
            self.rng.gen_range(0.01..0.99)
        }
    }
}

/// Judges a witness: `None` when it is outside the quantifier domain of the
/// condition, `Some(true)` when it violates the condition.
fn judge(probe: &Probe, cond: Condition, w: &Witness, cfg: &CheckConfig) -> Option<bool> {
    let set = probe.set;
    let bh = set.bound_hint;
    let pts = &w.points;
    if cond.is_chord() {
        if pts.len() < 2 || pts[0].len() != set.dim() || pts[1].len() != set.dim() {
            return None;
        }
        let lam = w.lambda?;
        if !(lam > 0.0 && lam < 1.0) {
            return None;
        }
        let (a, b) = (&pts[0], &pts[1]);
        let m = lerp(a, b, lam);
        return match cond {
            Condition::SChords | Condition::SeChords => judge_s_chord(probe, w, cfg),
            _ if dist(a, b) < CHORD_SEP_REL * bh => None,
            Condition::StrictChords => (set.contains(a) && set.contains(b)).then(|| !probe.interior(&m, false)),
            Condition::BoundaryChords | Condition::BoundaryChordsA => {
                (probe.boundary(a) && probe.boundary(b)).then(|| set.contains(&m) && !probe.interior(&m, false))
            }
            Condition::TranslatedChords => (set.contains(a) && set.contains(b)).then(|| probe.in_e(&m, probe.delta)),
            Condition::EChords => (probe.in_e(a, probe.delta) && probe.in_e(b, probe.delta)).then(|| probe.in_e(&m, probe.delta)),
            Condition::InteriorChords => {
                let dom = set.contains(a) && set.contains(b) && set.cone.interior_contains_raw(a) && set.cone.interior_contains_raw(b);
                dom.then(|| !probe.interior(&m, false))
            }
            Condition::ChordsIntK => (set.contains(a) && set.contains(b)).then(|| !probe.interior(&m, true)),
            _ => unreachable!(),
        };
    }
    match cond {
        Condition::TranslatesIntK | Condition::TranslatesInt => {
            if pts.len() < 2 {
                return None;
            }
            let (a, k) = (&pts[0], &pts[1]);
            let dom = set.contains(a) && set.cone.contains_raw(k) && norm(k) >= cfg.tol.strict * bh;
            dom.then(|| !probe.interior(&add(a, k), cond == Condition::TranslatesIntK))
        }
        Condition::H => {
            let a = pts.first()?;
            if !set.contains(a) {
                return None;
            }
            if set.cone.margin(a) < -1e-12 * norm(a).max(1.0) || norm(a) == 0.0 {
                return Some(true);
            }
            let k = pts.get(1)?;
            // a + k rounds outside A when both lie on boundary rays
            let e = normalize(set.cone.interior_point());
            let slack = 1e-9 * (norm(a) + norm(k)).max(1.0);
            let pushed: Vec<f64> = add(a, k).iter().zip(&e).map(|(v, w)| v + slack * w).collect();
            set.cone.contains_raw(k).then(|| !set.contains(&add(a, k)) && !set.contains(&pushed))
        }
        _ => unreachable!(),
    }
}

/// `[x, x', x*]` violates the chord condition on `S_C` (or `SE(A;K)`) when
/// `x`, `x'` and the chord point all nearly maximise `<·, x*>` over the set,
/// with `x` and `x'` farther apart than the singleton threshold.
fn judge_s_chord(probe: &Probe, w: &Witness, cfg: &CheckConfig) -> Option<bool> {
    let set = probe.set;
    let pts = &w.points;
    if pts.len() != 3 || pts.iter().any(|p| p.len() != set.dim()) {
        return None;
    }
    let (a, b, y) = (&pts[0], &pts[1], &pts[2]);
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    if !set.cone.strict_dual_raw(&neg) || !set.contains(a) || !set.contains(b) || dist(a, b) <= cfg.tol.diam * set.bound_hint {
        return None;
    }
    let sigma = support_raw(set, y, &cfg.support()).value;
    if !sigma.is_finite() {
        return None;
    }
    let t = cfg.tol.val_abs(sigma);
    if dot(a, y) < sigma - 2.0 * t || dot(b, y) < sigma - 2.0 * t {
        return None;
    }
    let m = lerp(a, b, w.lambda?);
    Some(set.contains(&m) && dot(&m, y) >= sigma - t)
}

/// Re-evaluates a reported witness; `true` when it still violates `cond`.
pub fn replay(set: &HSet, cond: Condition, w: &Witness, cfg: &CheckConfig) -> bool {
    judge(&Probe::new(set), cond, w, cfg) == Some(true)
}

fn require_domain(set: &HSet, cond: Condition) -> Result<()> {
    if cond.needs_convexity() && !set.convex {
        return Err(Error::Set(format!("{}: condition {} is stated for convex sets", set.label, cond.id())));
    }
    if !cond.needs_convexity() && cond != Condition::H && !set.satisfies_h {
        return Err(Error::Set(format!("{}: condition {} needs a set satisfying (H)", set.label, cond.id())));
    }
    Ok(())
}

/// Stream id per condition so each sampler is independent of the others.
fn stream(cond: Condition) -> u64 {
    100 + Condition::ALL.iter().position(|&c| c == cond).unwrap_or(0) as u64
}

fn targeted(set: &HSet, cfg: &CheckConfig) -> Vec<Witness> {
    let probes = set.probes.iter().map(|(a, b): &ProbePair| (a.clone(), b.clone(), 0.5));
    cfg.targets.iter().cloned().chain(probes).map(|(a, b, l)| Witness::new(vec![a, b], Some(l))).collect()
}

/// Samples the condition's quantifier domain and reports violations.
///
/// Errors when the set is outside the condition's scope, or when the sampler
/// found nothing in the quantifier domain.
pub fn check_condition(set: &HSet, cond: Condition, cfg: &CheckConfig) -> Result<ConditionReport> {
    require_domain(set, cond)?;
    let probe = Probe::new(set);
    match cond {
        Condition::SChords | Condition::SeChords => {
            let s = s_samples(set, &dual_grid(&set.cone, cfg.grid), cfg);
            return Ok(s_chord_report(&probe, cond, &s, cfg));
        }
        Condition::EChords => {
            let e = e_samples(&probe, &[], cfg);
            return chord_report(&probe, cond, cfg, |d, _| d.pick(&e));
        }
        _ => {}
    }
    let mut draw = Draw::new(set, cfg.seed, stream(cond));
    let mut ws = Vec::new();
    let mut used = 0;
    match cond {
        Condition::TranslatesIntK | Condition::TranslatesInt | Condition::H => {
            let mut cands: Vec<Witness> = set.probes.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).map(|a| Witness::new(vec![a, set.cone.interior_point().to_vec()], None)).collect();
            for i in 0..cfg.samples {
                // translates along the ray from the witness catch the
                // measure-zero failures of strictly convex sets
                let a = if i % 4 == 0 { Some(set.witness.clone()) } else { draw.member() };
                let Some(a) = a else { continue };
                let ray = sub(&a, &set.witness);
                let k = if i % 4 == 1 && norm(&ray) > 0.0 && set.cone.contains_raw(&ray) {
                    let len = sampling::log_uniform(&mut draw.rng, 1e-2, 1.0) * set.bound_hint / norm(&ray);
                    ray.iter().map(|v| v * len).collect()
                } else {
                    draw.translate()
                };
                cands.push(Witness::new(vec![a, k], None));
            }
            for w in cands {
                match judge(&probe, cond, &w, cfg) {
                    Some(true) => {
                        used += 1;
                        ws.push(w);
                    }
                    Some(false) => used += 1,
                    None => {}
                }
            }
        }
        _ => {
            let boundary = matches!(cond, Condition::BoundaryChords | Condition::BoundaryChordsA);
            let int_k = cond == Condition::InteriorChords;
            return chord_report(&probe, cond, cfg, move |d, _| {
                for _ in 0..8 {
                    let x = if boundary { d.boundary() } else { d.member() };
                    match x {
                        Some(x) if !int_k || d.set.cone.interior_contains_raw(&x) => return Some(x),
                        _ => {}
                    }
                }
                None
            });
        }
    }
    if used == 0 {
        return Err(Error::EmptyDomain(cond.id().into()));
    }
    Ok(ConditionReport::from_witnesses(cond.id(), ws, used, cfg.seed))
}

impl Draw<'_> {
    fn pick(&mut self, pool: &[Vec<f64>]) -> Option<Vec<f64>> {
        (!pool.is_empty()).then(|| pool[self.rng.gen_range(0..pool.len())].clone())
    }
}

/// Pairs drawn by `point`, plus the targeted pairs, judged as chords.
fn chord_report<F>(probe: &Probe, cond: Condition, cfg: &CheckConfig, mut point: F) -> Result<ConditionReport>
where
    F: FnMut(&mut Draw, usize) -> Option<Vec<f64>>,
{
    let set = probe.set;
    let mut draw = Draw::new(set, cfg.seed, stream(cond));
    let mut cands = targeted(set, cfg);
    for i in 0..cfg.samples {
        let lam = draw.lambda(i);
        if let (Some(a), Some(b)) = (point(&mut draw, i), point(&mut draw, i)) {
            cands.push(Witness::new(vec![a, b], Some(lam)));
        }
    }
    let mut ws = Vec::new();
    let mut used = 0;
    for w in cands {
        match judge(probe, cond, &w, cfg) {
            Some(true) => {
                used += 1;
                ws.push(w);
            }
            Some(false) => used += 1,
            None => {}
        }
    }
    if used == 0 && cond != Condition::EChords {
        return Err(Error::EmptyDomain(cond.id().into()));
    }
    Ok(ConditionReport::from_witnesses(cond.id(), ws, used, cfg.seed))
}

/// Midpoint convexity `λa + (1-λ)a' ∈ A` on sampled members.
pub fn check_convexity(set: &HSet, cfg: &CheckConfig) -> Result<ConditionReport> {
    let mut draw = Draw::new(set, cfg.seed, 99);
    let mut cands = targeted(set, cfg);
    for i in 0..cfg.samples {
        let lam = draw.lambda(i);
        if let (Some(a), Some(b)) = (draw.member(), draw.member()) {
            cands.push(Witness::new(vec![a, b], Some(lam)));
        }
    }
    let mut ws = Vec::new();
    let mut used = 0;
    for w in cands {
        let (a, b) = (&w.points[0], &w.points[1]);
        if !(set.contains(a) && set.contains(b)) {
            continue;
        }
        used += 1;
        if !set.contains(&lerp(a, b, w.lambda.unwrap_or(0.5))) {
            ws.push(w);
        }
    }
    if used == 0 {
        return Err(Error::EmptyDomain("convexity".into()));
    }
    Ok(ConditionReport::from_witnesses("convexity", ws, used, cfg.seed))
}

/// Argmax representatives at one dual grid point.
#[derive(Debug, Clone)]
struct SPoint {
    xstar: Vec<f64>,
    value: f64,
    reps: Vec<Vec<f64>>,
}

fn s_samples(set: &HSet, grid: &[Vec<f64>], cfg: &CheckConfig) -> Vec<SPoint> {
    let scfg = cfg.support();
    par_map(grid, |y| {
        let v = Vector::from_slice(y).ok()?;
        let a = argmax_set_with(set, &v, &scfg).ok()?;
        (a.value.is_finite() && !a.representatives.is_empty()).then(|| SPoint { xstar: y.clone(), value: a.value, reps: a.representatives })
    })
    .into_iter()
    .flatten()
    .collect()
}

fn farthest(pts: &[Vec<f64>]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = dist(&pts[i], &pts[j]);
            if best.is_none_or(|b| d > b.2) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// Chord condition on sampled `S_C`: flat argmax sets, and random pairs whose
/// chord point nearly maximises some grid functional.
fn s_chord_report(probe: &Probe, cond: Condition, s: &[SPoint], cfg: &CheckConfig) -> ConditionReport {
    let set = probe.set;
    let mut cands = Vec::new();
    for sp in s {
        if let Some((i, j, _)) = farthest(&sp.reps) {
            cands.push(Witness::new(vec![sp.reps[i].clone(), sp.reps[j].clone(), sp.xstar.clone()], Some(0.5)));
        }
    }
    let flat: Vec<(usize, &Vec<f64>)> = s.iter().enumerate().flat_map(|(k, sp)| sp.reps.iter().map(move |r| (k, r))).collect();
    let mut r = sampling::rng(cfg.seed, stream(cond));
    let mut pairs = 0;
    if flat.len() >= 2 {
        for i in 0..cfg.samples {
            let (ka, a) = flat[r.gen_range(0..flat.len())];
            let (kb, b) = flat[r.gen_range(0..flat.len())];
            let lam = if i % 2 == 0 { 0.5 } else { r.gen_range(0.01..0.99) };
            if ka == kb || dist(a, b) <= cfg.tol.diam * set.bound_hint {
                continue;
            }
            pairs += 1;
            let m = lerp(a, b, lam);
            // the chord point lies in S_C only if it maximises some functional
            for sp in s {
                let t = cfg.tol.val_abs(sp.value);
                if dot(&m, &sp.xstar) >= sp.value - t && dot(a, &sp.xstar) >= sp.value - 2.0 * t && dot(b, &sp.xstar) >= sp.value - 2.0 * t {
                    cands.push(Witness::new(vec![a.clone(), b.clone(), sp.xstar.clone()], Some(lam)));
                    break;
                }
            }
        }
    }
    let ws: Vec<Witness> = cands.into_iter().filter(|w| judge(probe, cond, w, cfg) == Some(true)).collect();
    ConditionReport::from_witnesses(cond.id(), ws, s.len() + pairs, cfg.seed)
}

/// Boundary samples (plus `extra` points, the witness and the probe points)
/// that pass the `E_C` test.
fn e_samples(probe: &Probe, extra: &[Vec<f64>], cfg: &CheckConfig) -> Vec<Vec<f64>> {
    let set = probe.set;
    let mut draw = Draw::new(set, cfg.seed, 90);
    let mut cands: Vec<Vec<f64>> = extra.to_vec();
    cands.push(set.witness.clone());
    cands.extend(set.probes.iter().flat_map(|(a, b)| [a.clone(), b.clone()]));
    cands.extend((0..cfg.samples).filter_map(|_| draw.boundary()));
    cands.into_iter().filter(|x| probe.in_e(x, probe.delta)).collect()
}

/// Sampled `S_C` and `E_C` of a convex set, and the points that break the
/// inclusions `S_C ⊂ E_C ⊂ bd C`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeSamples {
    /// Argmax representatives over the dual grid.
    pub s: Vec<Vec<f64>>,
    pub e: Vec<Vec<f64>>,
    /// Points of `s` that fail the `E_C` test.
    pub s_outside_e: Vec<Vec<f64>>,
    /// Points of `e` found interior.
    pub e_interior: Vec<Vec<f64>>,
    /// Resolution of the `E_C` test.
    pub step: f64,
}

impl SeSamples {
    pub fn inclusions_hold(&self) -> bool {
        self.s_outside_e.is_empty() && self.e_interior.is_empty()
    }
}

pub fn sample_s_and_e_sets(set: &HSet, grid: &[Vec<f64>], cfg: &CheckConfig) -> Result<SeSamples> {
    require_domain(set, Condition::EChords)?;
    let probe = Probe::new(set);
    let s = snapped(&probe, &s_samples(set, grid, cfg));
    Ok(se_from(&probe, s, cfg))
}

fn snapped(probe: &Probe, sp: &[SPoint]) -> Vec<Vec<f64>> {
    sp.iter().flat_map(|p| p.reps.iter().map(|r| probe.snap(r, &p.xstar))).collect()
}

fn se_from(probe: &Probe, s: Vec<Vec<f64>>, cfg: &CheckConfig) -> SeSamples {
    let e = e_samples(probe, &s, cfg);
    let s_outside_e = s.iter().filter(|x| !probe.in_e(x, probe.delta)).cloned().collect();
    let e_interior = e.iter().filter(|x| !probe.boundary_at(x, probe.delta)).cloned().collect();
    SeSamples { s, e, s_outside_e, e_interior, step: probe.delta }
}

/// A sampled witness that does not transfer along an implication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contradiction {
    pub rule: String,
    pub witness: Witness,
}

/// The chain `(r-s1a) ⇒ (rs2c) ⇔ (rs2) ⇒ (fps-z)` checked on samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainReport {
    pub set: String,
    pub conditions: Vec<ConditionReport>,
    pub s_count: usize,
    pub e_count: usize,
    pub contradictions: Vec<Contradiction>,
}

impl ChainReport {
    pub fn consistent(&self) -> bool {
        self.contradictions.is_empty()
    }
}

/// Runs the four conditions and moves each witness along the chain: an
/// `(fps-z)` witness must be an `(rs2)` witness, an `(rs2)` witness must have
/// its endpoints in `E_C` (an `(rs2c)` witness) and its chord point on the
/// boundary (an `(r-s1a)` witness). Sampled inclusions `S ⊂ E ⊂ bd` are
/// checked as well.
///
/// Endpoint tests use the step `δ/λ`: if `x - (δ/λ)k` were in a convex `C`,
/// then so would `m - δk` be, so exact arithmetic never contradicts itself.
pub fn rem1_chain(set: &HSet, cfg: &CheckConfig) -> Result<ChainReport> {
    require_domain(set, Condition::EChords)?;
    let probe = Probe::new(set);
    let grid = dual_grid(&set.cone, cfg.grid);
    let sp = s_samples(set, &grid, cfg);
    let se = se_from(&probe, snapped(&probe, &sp), cfg);
    let mut contradictions = Vec::new();
    for x in &se.s_outside_e {
        contradictions.push(Contradiction { rule: "S_C ⊂ E_C".into(), witness: Witness::new(vec![x.clone()], None) });
    }
    for x in &se.e_interior {
        contradictions.push(Contradiction { rule: "E_C ⊂ bd C".into(), witness: Witness::new(vec![x.clone()], None) });
    }
    let fpsz = s_chord_report(&probe, Condition::SChords, &sp, cfg);
    let rs2 = check_condition(set, Condition::TranslatedChords, cfg)?;
    let e = se.e.clone();
    let rs2c = chord_report(&probe, Condition::EChords, cfg, |d, _| d.pick(&e))?;
    let rs1a = check_condition(set, Condition::BoundaryChords, cfg)?;
    for w in &fpsz.witnesses {
        let m = probe.snap(&lerp(&w.points[0], &w.points[1], w.lambda.unwrap_or(0.5)), &w.points[2]);
        if !probe.in_e(&m, probe.delta) {
            contradictions.push(Contradiction { rule: "fps-z witness is an rs2 witness".into(), witness: w.clone() });
        }
    }
    for w in &rs2.witnesses {
        let lam = w.lambda.unwrap_or(0.5);
        let (a, b) = (&w.points[0], &w.points[1]);
        if !probe.in_e(a, probe.delta / lam) || !probe.in_e(b, probe.delta / (1.0 - lam)) {
            contradictions.push(Contradiction { rule: "rs2 witness is an rs2c witness".into(), witness: w.clone() });
        }
        if !probe.boundary_at(&lerp(a, b, lam), probe.delta) {
            contradictions.push(Contradiction { rule: "rs2 witness is an r-s1a witness".into(), witness: w.clone() });
        }
    }
    contradictions.truncate(crate::report::MAX_WITNESSES);
    Ok(ChainReport {
        set: set.label.clone(),
        s_count: se.s.len(),
        e_count: se.e.len(),
        conditions: vec![rs1a, rs2c, rs2, fpsz],
        contradictions,
    })
}

fn first_alarm(rep: &mut TheoremReport, id: &str, message: &str, c: &ConditionReport, replay: String) {
    rep.alarm(Alarm { id: id.into(), message: message.into(), witness: c.witnesses.first().cloned(), replay });
}

fn grid_summary(set: &HSet, grid: &[Vec<f64>], cfg: &CheckConfig, rep: &mut TheoremReport) -> Result<GridSummary> {
    let rows = scan(set, grid, &cfg.support())?;
    let g = GridSummary::from_rows(&rows);
    if g.indeterminate > 0 {
        rep.mark(SuiteStatus::Indeterminate);
        rep.note(format!("{} grid points could not be classified", g.indeterminate));
    }
    rep.grid = Some(g.clone());
    Ok(g)
}

/// Under `(fp-ssc)`, differentiability of `σ_A` on `int K⁻` forces `A` to be
/// convex and `(r-sa)`; in the plane `(r-sa)` gives back differentiability.
pub fn harness_fact14(set: &HSet, grid: &[Vec<f64>], cfg: &CheckConfig) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("fact14", &set.label);
    let fp = check_condition(set, Condition::TranslatesIntK, cfg)?;
    let fp_holds = fp.holds();
    rep.conditions.push(fp);
    if !fp_holds {
        rep.mark(SuiteStatus::Skipped);
        rep.note("precondition fp-ssc violated on the sample; implication not tested");
        return Ok(rep);
    }
    let g = grid_summary(set, grid, cfg, &mut rep)?;
    let mut conv: Option<ConditionReport> = None;
    let mut rsa: Option<ConditionReport> = None;
    if g.all_differentiable() {
        let c = check_convexity(set, cfg)?;
        let r = check_condition(set, Condition::InteriorChords, cfg)?;
        if !c.holds() {
            first_alarm(&mut rep, "fact14/convexity", "support differentiable on the grid but the set is not convex", &c, cfg.check_command(set, "convexity"));
        }
        if !r.holds() {
            first_alarm(&mut rep, "fact14/r-sa", "support differentiable on the grid but r-sa fails", &r, cfg.check_command(set, "r-sa"));
        }
        rep.note("support differentiable at every grid point");
        conv = Some(c);
        rsa = Some(r);
    } else if g.non_differentiable > 0 {
        rep.note(format!("hypothesis path: differentiability fails at {} grid points", g.non_differentiable));
    }
    if set.dim() == 2 {
        let r = match rsa.take() {
            Some(r) => r,
            None => check_condition(set, Condition::InteriorChords, cfg)?,
        };
        if r.holds() {
            let c = match conv.take() {
                Some(c) => c,
                None => check_convexity(set, cfg)?,
            };
            if !c.holds() {
                first_alarm(&mut rep, "fact14-converse/convexity", "r-sa holds in the plane but the set is not convex", &c, cfg.check_command(set, "convexity"));
            }
            if g.non_differentiable > 0 {
                rep.alarm(Alarm {
                    id: "fact14-converse/differentiability".into(),
                    message: "r-sa holds in the plane but the argmax is not a singleton".into(),
                    witness: g.kinks.first().map(|k| Witness::new(vec![k.clone()], None)),
                    replay: cfg.scan_command(set),
                });
            } else if g.indeterminate == 0 {
                rep.note("converse: r-sa holds on the sample and the grid confirms differentiability");
            }
            conv = Some(c);
        } else {
            rep.note("converse not applicable: r-sa violated on the sample");
        }
        rsa = Some(r);
    }
    rep.conditions.extend(conv);
    rep.conditions.extend(rsa);
    Ok(rep)
}

/// `(r-sas)` gives convexity, differentiability on `int K⁻` and `(fp-ssc)`.
pub fn harness_prop_suf(set: &HSet, grid: &[Vec<f64>], cfg: &CheckConfig) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("prop-suf", &set.label);
    let rsas = check_condition(set, Condition::ChordsIntK, cfg)?;
    let holds = rsas.holds();
    rep.conditions.push(rsas);
    if !holds {
        rep.mark(SuiteStatus::Skipped);
        rep.note("precondition r-sas violated on the sample; implication not tested");
        return Ok(rep);
    }
    let c = check_convexity(set, cfg)?;
    if !c.holds() {
        first_alarm(&mut rep, "prop-suf/convexity", "r-sas holds but the set is not convex", &c, cfg.check_command(set, "convexity"));
    }
    let g = grid_summary(set, grid, cfg, &mut rep)?;
    if g.non_differentiable > 0 {
        rep.alarm(Alarm {
            id: "prop-suf/differentiability".into(),
            message: "r-sas holds but the argmax is not a singleton".into(),
            witness: g.kinks.first().map(|k| Witness::new(vec![k.clone()], None)),
            replay: cfg.scan_command(set),
        });
    }
    let fp = check_condition(set, Condition::TranslatesIntK, cfg)?;
    if !fp.holds() {
        first_alarm(&mut rep, "prop-suf/fp-ssc", "r-sas holds but fp-ssc fails", &fp, cfg.check_command(set, "fp-ssc"));
    }
    rep.conditions.push(c);
    rep.conditions.push(fp);
    Ok(rep)
}

/// For `A ⊂ int K` with `(r-s)`: differentiability on `int K⁻` iff `A` is
/// convex and `(r-sb)`.
pub fn harness_cor11(set: &HSet, grid: &[Vec<f64>], cfg: &CheckConfig) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("cor11", &set.label);
    let mut draw = Draw::new(set, cfg.seed, 98);
    let outside: Vec<Vec<f64>> = (0..cfg.samples).filter_map(|_| draw.member()).filter(|a| !set.cone.interior_contains_raw(a)).take(1).collect();
    let rs = check_condition(set, Condition::TranslatesInt, cfg)?;
    let rs_holds = rs.holds();
    rep.conditions.push(rs);
    if !outside.is_empty() || !rs_holds {
        rep.mark(SuiteStatus::Skipped);
        rep.note(if outside.is_empty() { "precondition r-s violated on the sample" } else { "precondition A ⊂ int K violated on the sample" });
        return Ok(rep);
    }
    let g = grid_summary(set, grid, cfg, &mut rep)?;
    let c = check_convexity(set, cfg)?;
    let rsb = check_condition(set, Condition::BoundaryChordsA, cfg)?;
    let right = c.holds() && rsb.holds();
    if g.indeterminate == 0 {
        if g.all_differentiable() && !right {
            let bad = if c.holds() { &rsb } else { &c };
            first_alarm(&mut rep, "cor11/only-if", "support differentiable on the grid but convexity or r-sb fails", bad, cfg.check_command(set, &bad.condition_id));
        } else if !g.all_differentiable() && right {
            rep.alarm(Alarm {
                id: "cor11/if".into(),
                message: "convex with r-sb on the sample but the argmax is not a singleton".into(),
                witness: g.kinks.first().map(|k| Witness::new(vec![k.clone()], None)),
                replay: cfg.scan_command(set),
            });
        } else {
            rep.note(if right { "differentiable, convex and r-sb: both sides agree" } else { "not differentiable and r-sb or convexity fails: both sides agree" });
        }
    }
    rep.conditions.push(c);
    rep.conditions.push(rsb);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;
    use crate::fixtures::set_fixture;
    use crate::report::Verdict;
    use crate::sets::shifted_cone;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    fn small() -> CheckConfig {
        CheckConfig::default().with_samples(300).with_seed(1).with_grid(24)
    }

    #[test]
    fn ids_round_trip() {
        for c in Condition::ALL {
            assert_eq!(Condition::parse(c.id()), Some(c));
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.id()));
        }
    }

    #[test]
    fn interior_examples() {
        let b = set_fixture("ex3b").unwrap();
        assert!(check_interior_rel_K(&b, &v(&[1.0, 1.0])).unwrap());
        assert!(!check_interior_rel_K(&b, &v(&[1.0, 0.0])).unwrap());
        // on bd K but interior relative to K
        assert!(check_interior_rel_K(&b, &v(&[2.0, 0.0])).unwrap());
        assert!(!check_interior(&b, &v(&[2.0, 0.0])).unwrap());
        let d4 = set_fixture("d4").unwrap();
        assert!(!check_interior_rel_K(&d4, &v(&[0.5, 0.5, 0.0])).unwrap());
        assert!(check_interior_rel_K(&d4, &v(&[1.0, 1.0, 0.0])).unwrap());
        assert_eq!(check_interior_rel_K(&d4, &v(&[-1.0, 1.0, 0.0])), Err(Error::OutsideCone));
    }

    #[test]
    fn d4_conditions() {
        let d4 = set_fixture("d4").unwrap();
        let cfg = small();
        assert!(check_condition(&d4, Condition::TranslatesIntK, &cfg).unwrap().holds());
        let r = check_condition(&d4, Condition::ChordsIntK, &cfg.clone().with_samples(0)).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.witnesses[0].points, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert!(replay(&d4, Condition::ChordsIntK, &r.witnesses[0], &cfg));
        assert!(!check_condition(&d4, Condition::TranslatedChords, &cfg).unwrap().holds());
        assert!(check_condition(&d4, Condition::H, &cfg).unwrap().holds());
    }

    #[test]
    fn shifted_cones_fail_fp_ssc() {
        for (a, k) in [(vec![1.0, 2.0], Cone::orthant(2).unwrap()), (vec![1.0, 0.0, 1.0], Cone::lorentz(3).unwrap())] {
            let s = shifted_cone(&v(&a), &k).unwrap();
            let r = check_condition(&s, Condition::TranslatesIntK, &small()).unwrap();
            assert!(!r.holds(), "{a:?}");
            assert!(r.witnesses.iter().all(|w| replay(&s, Condition::TranslatesIntK, w, &small())));
        }
    }

    #[test]
    fn flat_edge_set_fails_r_sb() {
        let l = set_fixture("ex-adsz-L").unwrap();
        let cfg = CheckConfig::default().with_samples(0);
        let r = check_condition(&l, Condition::BoundaryChordsA, &cfg).unwrap();
        assert!(!r.holds());
        assert!(!check_condition(&l, Condition::ChordsIntK, &cfg).unwrap().holds());
    }

    #[test]
    fn hyperbola_is_strictly_convex_on_samples() {
        let h = set_fixture("hyperbola").unwrap();
        let cfg = small();
        for c in [Condition::ChordsIntK, Condition::InteriorChords, Condition::BoundaryChordsA, Condition::StrictChords, Condition::TranslatesIntK] {
            let r = check_condition(&h, c, &cfg).unwrap();
            assert!(r.holds(), "{}: {:?}", c.id(), r.witnesses);
            assert!(r.sample_count > 100, "{}", c.id());
        }
    }

    #[test]
    fn h_fails_for_a_set_through_the_origin() {
        let ex1 = set_fixture("ex1").unwrap();
        let cfg = small().with_targets(vec![]);
        let mut ws = vec![Witness::new(vec![vec![0.0, 0.0]], None)];
        assert!(replay(&ex1, Condition::H, &ws.remove(0), &cfg));
        assert!(check_condition(&ex1, Condition::TranslatesIntK, &cfg).is_err());
    }

    #[test]
    fn s_and_e_of_a_shifted_cone() {
        let s = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        let se = sample_s_and_e_sets(&s, &dual_grid(&s.cone, 16), &small()).unwrap();
        assert!(se.s.iter().all(|x| dist(x, &[1.0, 2.0]) < 1e-12));
        assert!(se.e.iter().all(|x| dist(x, &[1.0, 2.0]) <= 2.0 * se.step));
        assert!(se.inclusions_hold());
    }

    #[test]
    fn chain_on_d4_and_hyperbola() {
        for name in ["d4", "hyperbola", "ex3b"] {
            let s = set_fixture(name).unwrap();
            let c = rem1_chain(&s, &small()).unwrap();
            assert!(c.consistent(), "{name}: {:?}", c.contradictions);
        }
    }

    #[test]
    fn fact14_paths() {
        let cfg = small();
        let b = set_fixture("ex3b").unwrap();
        let r = harness_fact14(&b, &dual_grid(&b.cone, 25), &cfg).unwrap();
        assert_eq!(r.status, SuiteStatus::Pass);
        assert!(r.notes.iter().any(|n| n.starts_with("hypothesis path")));
        let h = set_fixture("hyperbola").unwrap();
        let r = harness_fact14(&h, &dual_grid(&h.cone, 25), &cfg).unwrap();
        assert_eq!(r.status, SuiteStatus::Pass, "{r:?}");
        assert!(r.notes.iter().any(|n| n.starts_with("converse")));
    }

    #[test]
    fn prop_suf_skips_without_r_sas() {
        let s = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        let r = harness_prop_suf(&s, &dual_grid(&s.cone, 9), &small()).unwrap();
        assert_eq!(r.status, SuiteStatus::Skipped);
        let h = set_fixture("hyperbola").unwrap();
        let r = harness_prop_suf(&h, &dual_grid(&h.cone, 25), &small()).unwrap();
        assert_eq!(r.status, SuiteStatus::Pass, "{r:?}");
    }

    #[test]
    fn cor11_on_the_flat_edge_set() {
        let l = set_fixture("ex-adsz-L").unwrap();
        let r = harness_cor11(&l, &dual_grid(&l.cone, 25), &small()).unwrap();
        assert_eq!(r.status, SuiteStatus::Pass, "{r:?}");
        assert!(!r.condition("r-sb").unwrap().holds());
    }
}
