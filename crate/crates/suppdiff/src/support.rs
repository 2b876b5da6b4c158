//! Support functions `σ_A(x*) = sup{<x*, u> : u in A}`, argmax sets and the
//! differentiability decision.
//!
//! For (H)-sets every maximiser sits on `bd A` and is reached along a ray of
//! `K`, so `σ_A(x*)` is the maximum over directions `d` of `<d, x*> / F_A(d)`.
//! That search runs on the cone chart: a dense grid, then coordinate ascent
//! from the best local maxima, then collection of every point whose value is
//! within `tol_val` of the best. Sets without (H) use multistart pattern
//! search in an expanding box instead.

use crate::cone::{Chart, Cone, ParamRange};
use crate::error::{Error, Result};
use crate::gauge::gauge_raw;
use crate::parallel::par_map;
use crate::report::Tri;
use crate::sampling::{self, box_point};
use crate::sets::HSet;
use crate::tol::{Tolerances, DEFAULT_SEED, FD_REL, MAX_EXPANSIONS, MULTISTART};
use crate::vector::{dist, dot, norm, normalize, Vector};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Finite,
    PlusInfinity,
    BoundarySuspect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEval {
    #[serde(with = "ext_real")]
    pub value: f64,
    pub status: Status,
    pub maximizer_hint: Option<Vec<f64>>,
    /// The search box was exhausted; `value` is then a lower bound.
    pub truncated: bool,
}

/// Near-maximisers of `<·, x*>` over `A`, merged into clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgmaxSet {
    pub representatives: Vec<Vec<f64>>,
    #[serde(with = "ext_real")]
    pub diameter: f64,
    pub is_singleton: bool,
    pub truncated: bool,
    #[serde(with = "ext_real")]
    pub value: f64,
    /// Sentinel for `x* = 0`, where the subdifferential is the closed convex hull of `A`.
    pub whole_hull: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Differentiability {
    pub verdict: Tri,
    /// The unique maximiser, which is the gradient, when `verdict` is true.
    pub gradient: Option<Vec<f64>>,
    pub argmax: ArgmaxSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Compact,
    Unbounded,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportConfig {
    pub tol: Tolerances,
    pub seed: u64,
}

impl Default for SupportConfig {
    fn default() -> Self {
        Self { tol: Tolerances::default(), seed: DEFAULT_SEED }
    }
}

/// Extended reals in JSON: finite values as numbers, infinities as `"+inf"` / `"-inf"`.
pub mod ext_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("+inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "+inf" => Ok(f64::INFINITY),
            Repr::Str(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad extended real `{s}`"))),
        }
    }
}

/// Where `σ_A(x*)` is finite: `-x* in K#` (or `A` bounded).
pub fn classify(set: &HSet, y: &[f64]) -> Status {
    let scale = norm(y);
    if set.bounded || scale == 0.0 {
        return Status::Finite;
    }
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let m = set.cone.dual_margin(&neg);
    if m > 1e-12 * scale {
        Status::Finite
    } else if m < -1e-12 * scale {
        Status::PlusInfinity
    } else {
        Status::BoundarySuspect
    }
}

/// Raw search output: best value and every in-band candidate.
#[derive(Debug, Clone)]
pub(crate) struct Search {
    pub best: f64,
    pub best_u: Option<Vec<f64>>,
    pub cands: Vec<Vec<f64>>,
    pub truncated: bool,
}

pub(crate) fn search(set: &HSet, y: &[f64], cfg: &SupportConfig) -> Search {
    if set.satisfies_h {
        ray_search(set, y, cfg)
    } else {
        box_search(set, y, cfg)
    }
}

// ---------------------------------------------------------------- ray engine

fn ray_value(set: &HSet, chart: &Chart, y: &[f64], params: &[f64]) -> (f64, Option<Vec<f64>>) {
    let d = chart.point(params);
    let g = gauge_raw(set, &d).value;
    if !(g > 0.0) || !g.is_finite() {
        return (f64::NEG_INFINITY, None);
    }
    let mut u: Vec<f64> = d.iter().map(|v| v / g).collect();
    // closed-form gauges may round u a hair outside A; tA ⊂ A for t >= 1
    let mut k = 0;
    while !set.contains(&u) {
        if k == 8 {
            return (f64::NEG_INFINITY, None);
        }
        let f = 1.0 + 1e-15 * 4f64.powi(k);
        u.iter_mut().for_each(|v| *v *= f);
        k += 1;
    }
    (dot(&u, y), Some(u))
}

/// Grid over chart parameters with per-coordinate spacing.
fn chart_grid(ranges: &[ParamRange]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = ranges.len();
    if m == 1 {
        let n = 2000;
        let pts = (0..=n).map(|i| vec![-1.0 + 2.0 * i as f64 / n as f64]).collect();
        return (pts, vec![2.0 / n as f64]);
    }
    let (nr, npsi, nth) = if m == 2 { (40, 96, 1) } else { (12, 24, 12) };
    let mut spacing = vec![1.0 / nr as f64, ranges[1].hi / npsi as f64];
    spacing.extend(std::iter::repeat_n(std::f64::consts::PI / nth as f64, m - 2));
    let mut pts = vec![vec![0.0; m]];
    let mut rest: Vec<Vec<f64>> = vec![vec![]];
    for _ in 2..m {
        rest = rest
            .into_iter()
            .flat_map(|r| {
                (0..nth).map(move |k| {
                    let mut r = r.clone();
                    r.push(std::f64::consts::PI * (k as f64 + 0.5) / nth as f64);
                    r
                })
            })
            .collect();
    }
    for i in 1..=nr {
        for j in 0..npsi {
            for tail in &rest {
                let mut v = vec![i as f64 / nr as f64, spacing[1] * j as f64];
                v.extend_from_slice(tail);
                pts.push(v);
            }
        }
    }
    (pts, spacing)
}

fn clamp_params(x: &mut [f64], ranges: &[ParamRange]) {
    for (v, r) in x.iter_mut().zip(ranges) {
        if r.periodic {
            *v = r.lo + (*v - r.lo).rem_euclid(r.hi - r.lo);
        } else {
            *v = v.clamp(r.lo, r.hi);
        }
    }
}

/// Compass search with coordinate and diagonal moves and halving steps.
/// Compass search over chart parameters: coordinate and diagonal moves,
/// then random moves, then halving. A successful move is repeated with
/// doubling length, which lets the search run along ridges of kinked maxima
/// (the pyramids of polyhedral gauges). Stops once every step is below
/// `floor_rel` of its range.
fn ascend<F>(f: &F, ranges: &[ParamRange], start: &[f64], spacing: &[f64], floor_rel: f64, rng: &mut sampling::SampleRng) -> (f64, Vec<f64>, Option<Vec<f64>>)
where
    F: Fn(&[f64]) -> (f64, Option<Vec<f64>>),
{
    let m = ranges.len();
    let mut x = start.to_vec();
    let (mut fx, mut ux) = f(&x);
    let mut steps = spacing.to_vec();
    let floor: Vec<f64> = ranges.iter().map(|r| floor_rel * (r.hi - r.lo)).collect();
    let mut moves: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; m];
            d[i] = s;
            moves.push(d);
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = vec![0.0; m];
                d[i] = a;
                d[j] = b;
                moves.push(d);
            }
        }
    }
    let shift = |x: &[f64], d: &[f64], steps: &[f64], t: f64| {
        let mut z: Vec<f64> = x.iter().zip(d).zip(steps).map(|((v, s), h)| v + t * s * h).collect();
        clamp_params(&mut z, ranges);
        z
    };
    // recent successful directions and the net move since the last halving
    let mut recent: Vec<Vec<f64>> = Vec::new();
    let mut anchor = x.clone();
    for _ in 0..4000 {
        let n_random = if m >= 2 { 8 * m } else { 0 };
        let net: Vec<f64> = x.iter().zip(&anchor).zip(&steps).map(|((a, b), h)| (a - b) / h).collect();
        let mut trial: Vec<Vec<f64>> = recent.clone();
        if norm(&net) > 0.0 {
            trial.push(normalize(&net));
        }
        trial.extend(moves.iter().cloned());
        let fixed = trial.len();
        let mut found: Option<Vec<f64>> = None;
        for k in 0..fixed + n_random {
            let d = if k < fixed { trial[k].clone() } else { normalize(&sampling::ball_point(rng, m)) };
            let z = shift(&x, &d, &steps, 1.0);
            if z == x {
                continue;
            }
            let (fz, uz) = f(&z);
            if fz > fx {
                x = z;
                fx = fz;
                ux = uz;
                found = Some(d);
                break;
            }
        }
        match found {
            Some(d) => {
                let mut t = 2.0;
                for _ in 0..40 {
                    let z = shift(&x, &d, &steps, t);
                    let (fz, uz) = f(&z);
                    if fz > fx && z != x {
                        x = z;
                        fx = fz;
                        ux = uz;
                        t *= 2.0;
                    } else {
                        break;
                    }
                }
                if m >= 2 {
                    recent.retain(|r| r != &d);
                    recent.insert(0, d);
                    recent.truncate(4);
                }
            }
            None => {
                if steps.iter().zip(&floor).all(|(s, fl)| s < fl) {
                    break;
                }
                steps.iter_mut().for_each(|s| *s *= 0.5);
                anchor = x.clone();
            }
        }
    }
    (fx, x, ux)
}

fn param_dist(a: &[f64], b: &[f64], ranges: &[ParamRange], spacing: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(ranges.iter().zip(spacing))
        .map(|((x, y), (r, h))| {
            let mut d = (x - y).abs();
            if r.periodic {
                d = d.min(r.hi - r.lo - d);
            }
            d / h
        })
        .fold(0.0, f64::max)
}

const FINE_RUNS: usize = 6;

fn ray_search(set: &HSet, y: &[f64], cfg: &SupportConfig) -> Search {
    let chart = set.cone.chart();
    let ranges = chart.ranges();
    let f = |p: &[f64]| ray_value(set, &chart, y, p);
    let (grid, spacing) = chart_grid(&ranges);
    let vals: Vec<(f64, Option<Vec<f64>>)> = grid.iter().map(|p| f(p)).collect();

    // starts: best grid points, at least 2.5 cells apart
    let mut order: Vec<usize> = (0..grid.len()).filter(|&i| vals[i].0.is_finite()).collect();
    order.sort_by(|&a, &b| vals[b].0.total_cmp(&vals[a].0).then(a.cmp(&b)));
    let mut starts: Vec<usize> = Vec::new();
    for &i in &order {
        if starts.len() >= MULTISTART {
            break;
        }
        if starts.iter().all(|&j| param_dist(&grid[i], &grid[j], &ranges, &spacing) > 2.5) {
            starts.push(i);
        }
    }
    if starts.is_empty() {
        return Search { best: f64::NEG_INFINITY, best_u: None, cands: Vec::new(), truncated: true };
    }
    // coarse ascent from every start, fine ascent from the competitive ones
    let mut rng = sampling::rng(cfg.seed, 31);
    let coarse: Vec<(f64, Vec<f64>, Option<Vec<f64>>)> = starts.iter().map(|&i| ascend(&f, &ranges, &grid[i], &spacing, 1e-5, &mut rng)).collect();
    let top = coarse.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let fine_spacing: Vec<f64> = spacing.iter().map(|h| h * 1e-2).collect();
    // only the best few coarse results get the fine pass
    let mut rank: Vec<usize> = (0..coarse.len()).collect();
    rank.sort_by(|&a, &b| coarse[b].0.total_cmp(&coarse[a].0).then(a.cmp(&b)));
    let chosen: Vec<usize> = rank.into_iter().take(FINE_RUNS).filter(|&i| coarse[i].0 >= top - 1e-5 * (1.0 + top.abs())).collect();
    let refined: Vec<(f64, Vec<f64>, Option<Vec<f64>>)> = coarse
        .into_iter()
        .enumerate()
        .map(|(i, c)| if chosen.contains(&i) { ascend(&f, &ranges, &c.1, &fine_spacing, 1e-13, &mut rng) } else { c })
        .collect();
    let (mut best, mut best_u) = (f64::NEG_INFINITY, None);
    for (v, _, u) in &refined {
        if *v > best {
            best = *v;
            best_u = u.clone();
        }
    }
    for (v, u) in &vals {
        if *v > best {
            best = *v;
            best_u = u.clone();
        }
    }
    let band = cfg.tol.val_abs(best);
    let in_band = |v: f64| v >= best - band;
    // coarse-only runs are not converged enough to measure the argmax diameter
    let mut cands: Vec<Vec<f64>> =
        refined.iter().enumerate().filter(|(i, r)| chosen.contains(i) && in_band(r.0)).filter_map(|(_, r)| r.2.clone()).collect();

    // flat pieces: several grid points share the maximal value
    let flat: Vec<usize> = (0..grid.len()).filter(|&i| in_band(vals[i].0)).collect();
    if flat.len() >= 3 {
        cands.extend(subsample(&flat, 64).into_iter().filter_map(|i| vals[i].1.clone()));
        cands.extend(flat_extremes(&flat, &vals));
        if ranges.len() == 1 {
            cands.extend(run_edges(&flat, &grid, &vals, &f, &in_band));
        }
    }
    if let Some(u) = &best_u {
        cands.push(u.clone());
    }
    let truncated = best_u.as_ref().is_none_or(|u| norm(u) > set.bound_hint * 2f64.powi(MAX_EXPANSIONS as i32));
    Search { best, best_u, cands, truncated }
}

fn subsample(idx: &[usize], k: usize) -> Vec<usize> {
    if idx.len() <= k {
        return idx.to_vec();
    }
    (0..k).map(|j| idx[j * (idx.len() - 1) / (k - 1)]).collect()
}

/// In-band grid points extreme in some coordinate of `u`.
fn flat_extremes(flat: &[usize], vals: &[(f64, Option<Vec<f64>>)]) -> Vec<Vec<f64>> {
    let pts: Vec<&Vec<f64>> = flat.iter().filter_map(|&i| vals[i].1.as_ref()).collect();
    let Some(first) = pts.first() else { return Vec::new() };
    let mut out = Vec::new();
    for c in 0..first.len() {
        let lo = pts.iter().min_by(|a, b| a[c].total_cmp(&b[c])).unwrap();
        let hi = pts.iter().max_by(|a, b| a[c].total_cmp(&b[c])).unwrap();
        out.push((*lo).clone());
        out.push((*hi).clone());
    }
    out
}

/// Ends of runs of in-band grid points on a one-parameter chart, pushed to
/// the band edge by bisection.
fn run_edges<F, B>(flat: &[usize], grid: &[Vec<f64>], vals: &[(f64, Option<Vec<f64>>)], f: &F, in_band: &B) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> (f64, Option<Vec<f64>>),
    B: Fn(f64) -> bool,
{
    let mut out = Vec::new();
    let n = grid.len();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &i in flat {
        if i > 0 && !in_band(vals[i - 1].0) {
            edges.push((i, i - 1));
        }
        if i + 1 < n && !in_band(vals[i + 1].0) {
            edges.push((i, i + 1));
        }
    }
    for (inside, outside) in edges {
        let (mut a, mut b) = (grid[inside][0], grid[outside][0]);
        let mut last = vals[inside].1.clone();
        for _ in 0..50 {
            let mid = 0.5 * (a + b);
            let (v, u) = f(&[mid]);
            if in_band(v) && u.is_some() {
                a = mid;
                last = u;
            } else {
                b = mid;
            }
        }
        out.extend(last);
    }
    out
}

// ---------------------------------------------------------------- box engine

const BOX_SAMPLES: usize = 4096;

fn pattern_search(set: &HSet, y: &[f64], start: &[f64], r: f64, dirs: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let inside = |u: &[f64]| u.iter().all(|v| v.abs() <= r) && set.contains(u);
    let mut x = start.to_vec();
    let mut fx = dot(&x, y);
    let mut step = r / 8.0;
    let mut it = 0;
    while step > 1e-12 * r && it < 20_000 {
        it += 1;
        let mut moved = false;
        for d in dirs {
            let z: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + step * b).collect();
            let fz = dot(&z, y);
            if fz > fx && inside(&z) {
                x = z;
                fx = fz;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (fx, x)
}

/// Local refinement on the boundary: tangent offsets `c` (orthogonal to
/// `x*`) are scored by the furthest member along `x*` through `x0 + c`,
/// found by bracketing and bisection. Unlike pattern search in the ambient
/// space this does not stall where the boundary is curved.
fn polish(set: &HSet, y: &[f64], x0: &[f64], r: f64, rng: &mut sampling::SampleRng) -> (f64, Vec<f64>) {
    let p = y.len();
    let yn = norm(y);
    if yn == 0.0 {
        return (0.0, x0.to_vec());
    }
    let yh: Vec<f64> = y.iter().map(|v| v / yn).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..p {
        let mut v = vec![0.0; p];
        v[i] = 1.0;
        for b in std::iter::once(&yh).chain(basis.iter()) {
            let s = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= s * c);
        }
        if norm(&v) > 1e-8 && basis.len() < p - 1 {
            basis.push(normalize(&v));
        }
    }
    let inside = |u: &[f64]| u.iter().all(|v| v.abs() <= r) && set.contains(u);
    let base_val = dot(x0, y);
    let along = |c: &[f64]| -> (f64, Option<Vec<f64>>) {
        let mut b = x0.to_vec();
        for (ci, t) in c.iter().zip(&basis) {
            b.iter_mut().zip(t).for_each(|(a, v)| *a += ci * v);
        }
        let at = |s: f64| -> Vec<f64> { b.iter().zip(&yh).map(|(a, v)| a + s * v).collect() };
        let mut h = norm(c).max(1e-12 * r);
        let (mut lo, mut hi);
        if inside(&at(0.0)) {
            lo = 0.0;
            hi = h;
            let mut k = 0;
            while inside(&at(hi)) {
                lo = hi;
                h *= 2.0;
                hi = lo + h;
                k += 1;
                if k > 60 {
                    return (f64::NEG_INFINITY, None);
                }
            }
        } else {
            hi = 0.0;
            lo = -h;
            let mut k = 0;
            while !inside(&at(lo)) {
                hi = lo;
                h *= 2.0;
                lo = hi - h;
                k += 1;
                if k > 40 {
                    return (f64::NEG_INFINITY, None);
                }
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if inside(&at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (base_val + lo * yn, Some(at(lo)))
    };
    let m = p - 1;
    let ranges: Vec<ParamRange> = (0..m).map(|_| ParamRange { lo: -2.0 * r, hi: 2.0 * r, periodic: false }).collect();
    let (v, _, u) = ascend(&along, &ranges, &vec![0.0; m], &vec![1e-3 * r; m], 1e-14, rng);
    match u {
        Some(u) if v >= dot(x0, y) => (v, u),
        _ => (dot(x0, y), x0.to_vec()),
    }
}

fn box_directions(p: usize, y: &[f64], rng: &mut sampling::SampleRng) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    if norm(y) > 0.0 {
        dirs.push(normalize(y));
    }
    for i in 0..p {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; p];
            d[i] = s;
            dirs.push(d);
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..p {
        for j in i + 1..p {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = vec![0.0; p];
                d[i] = a * h;
                d[j] = b * h;
                dirs.push(d);
            }
        }
    }
    for _ in 0..8 {
        dirs.push(normalize(&sampling::ball_point(rng, p)));
    }
    dirs
}

/// One box radius: best value, in-band candidates, and whether any of them
/// touches the box.
fn box_round(set: &HSet, y: &[f64], r: f64, cfg: &SupportConfig) -> (f64, Option<Vec<f64>>, Vec<Vec<f64>>, bool) {
    let p = set.dim();
    let mut rng = sampling::rng(cfg.seed, 21);
    let dirs = box_directions(p, y, &mut rng);
    let mut pool: Vec<Vec<f64>> = Vec::new();
    if set.witness.iter().all(|v| v.abs() <= r) {
        pool.push(set.witness.clone());
    }
    for _ in 0..BOX_SAMPLES {
        let x = box_point(&mut rng, p, -r, r);
        if set.contains(&x) {
            pool.push(x);
        }
    }
    // points between the origin and the witness
    for _ in 0..MULTISTART {
        let t: f64 = rng.gen::<f64>();
        let x: Vec<f64> = set.witness.iter().map(|w| w * t).collect();
        if set.contains(&x) {
            pool.push(x);
        }
    }
    pool.sort_by(|a, b| dot(b, y).total_cmp(&dot(a, y)));
    pool.dedup();
    let starts: Vec<Vec<f64>> = pool.iter().take(MULTISTART).cloned().collect();
    let coarse: Vec<(f64, Vec<f64>)> = starts.iter().map(|s| pattern_search(set, y, s, r, &dirs)).collect();
    let mut rank: Vec<usize> = (0..coarse.len()).collect();
    rank.sort_by(|&a, &b| coarse[b].0.total_cmp(&coarse[a].0).then(a.cmp(&b)));
    let refined: Vec<(f64, Vec<f64>)> = rank.iter().take(FINE_RUNS).map(|&i| polish(set, y, &coarse[i].1, r, &mut rng)).collect();
    let Some((best, best_u)) = refined.iter().max_by(|a, b| a.0.total_cmp(&b.0)).cloned() else {
        return (f64::NEG_INFINITY, None, Vec::new(), true);
    };
    let band = cfg.tol.val_abs(best);
    let mut cands: Vec<Vec<f64>> = refined.into_iter().filter(|(v, _)| *v >= best - band).map(|(_, u)| u).collect();
    cands.extend(coarse.into_iter().filter(|(v, _)| *v >= best - band).map(|(_, u)| u));
    cands.extend(pool.into_iter().filter(|u| dot(u, y) >= best - band));
    let touches = cands.iter().any(|u| u.iter().any(|v| v.abs() >= r * (1.0 - 1e-6)));
    (best, Some(best_u), cands, touches)
}

fn box_search(set: &HSet, y: &[f64], cfg: &SupportConfig) -> Search {
    let mut r = set.bound_hint;
    let mut last = None;
    for _ in 0..=MAX_EXPANSIONS {
        let (best, best_u, cands, touches) = box_round(set, y, r, cfg);
        if !touches && best_u.is_some() {
            return Search { best, best_u, cands, truncated: false };
        }
        last = Some(Search { best, best_u, cands, truncated: true });
        r *= 2.0;
    }
    last.expect("at least one round")
}

// ---------------------------------------------------------------- public API

/// `σ_A(x*)` with default tolerances and seed.
pub fn support_value(set: &HSet, xstar: &Vector) -> Result<SupportEval> {
    support_value_with(set, xstar, &SupportConfig::default())
}

pub fn support_value_with(set: &HSet, xstar: &Vector, cfg: &SupportConfig) -> Result<SupportEval> {
    xstar.check_dim(set.dim())?;
    Ok(support_raw(set, xstar.as_slice(), cfg))
}

pub(crate) fn support_raw(set: &HSet, y: &[f64], cfg: &SupportConfig) -> SupportEval {
    let status = classify(set, y);
    let infinite = SupportEval { value: f64::INFINITY, status: Status::PlusInfinity, maximizer_hint: None, truncated: false };
    if status == Status::PlusInfinity {
        return infinite;
    }
    if norm(y) == 0.0 {
        return SupportEval { value: 0.0, status, maximizer_hint: Some(set.witness.clone()), truncated: false };
    }
    if let Some(oracle) = set.support_oracle() {
        let value = oracle(y);
        if value == f64::INFINITY {
            return infinite;
        }
        let hint = match set.argmax_oracle().map(|a| a(y)).and_then(|v| v.into_iter().next()) {
            Some(u) => Some(u),
            None if status == Status::Finite => search(set, y, cfg).best_u,
            None => None,
        };
        return SupportEval { value, status, maximizer_hint: hint, truncated: false };
    }
    let s = search(set, y, cfg);
    SupportEval { value: s.best, status, maximizer_hint: s.best_u, truncated: s.truncated }
}

fn max_pairwise(pts: &[Vec<f64>]) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = dist(&pts[i], &pts[j]);
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}

const MAX_REPRESENTATIVES: usize = 64;

fn build_argmax(set: &HSet, value: f64, mut cands: Vec<Vec<f64>>, truncated: bool, tol: &Tolerances) -> ArgmaxSet {
    cands.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    cands.dedup();
    let (diameter, i, j) = max_pairwise(&cands);
    let radius = tol.cluster * set.bound_hint;
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for u in &cands {
        if centers.iter().all(|c| dist(c, u) > radius) {
            centers.push(u.clone());
        }
    }
    if centers.len() > MAX_REPRESENTATIVES {
        let idx: Vec<usize> = (0..centers.len()).collect();
        let mut kept: Vec<Vec<f64>> = subsample(&idx, MAX_REPRESENTATIVES - 2).into_iter().map(|k| centers[k].clone()).collect();
        for e in [&cands[i], &cands[j]] {
            if !kept.contains(e) {
                kept.push(e.clone());
            }
        }
        centers = kept;
    }
    let is_singleton = !cands.is_empty() && diameter <= tol.diam * set.bound_hint && !truncated;
    ArgmaxSet { representatives: centers, diameter, is_singleton, truncated, value, whole_hull: false }
}

fn whole_hull() -> ArgmaxSet {
    ArgmaxSet {
        representatives: Vec::new(),
        diameter: f64::INFINITY,
        is_singleton: false,
        truncated: false,
        value: 0.0,
        whole_hull: true,
    }
}

/// Candidates (all in-band points) and the value, preferring closed forms.
fn argmax_candidates(set: &HSet, y: &[f64], cfg: &SupportConfig) -> Result<(f64, Vec<Vec<f64>>, bool)> {
    if classify(set, y) == Status::PlusInfinity {
        return Err(Error::Domain("support function is +inf at this point".into()));
    }
    if let Some(oracle) = set.argmax_oracle() {
        let pts = oracle(y);
        if !pts.is_empty() {
            let value = set.support_oracle().map(|s| s(y)).unwrap_or_else(|| dot(&pts[0], y));
            return Ok((value, pts, false));
        }
    }
    let s = search(set, y, cfg);
    if s.best_u.is_none() {
        return Err(Error::EmptyDomain(format!("{}: no member found", set.label)));
    }
    Ok((s.best, s.cands, s.truncated))
}

/// `W_A(x*)`: clustered near-maximisers.
pub fn argmax_set(set: &HSet, xstar: &Vector) -> Result<ArgmaxSet> {
    argmax_set_with(set, xstar, &SupportConfig::default())
}

pub fn argmax_set_with(set: &HSet, xstar: &Vector, cfg: &SupportConfig) -> Result<ArgmaxSet> {
    xstar.check_dim(set.dim())?;
    if xstar.norm() == 0.0 {
        return Ok(whole_hull());
    }
    let (value, cands, truncated) = argmax_candidates(set, xstar.as_slice(), cfg)?;
    Ok(build_argmax(set, value, cands, truncated, &cfg.tol))
}

/// `∂σ_A(x*) = conv W_A(x*)`, given by the vertices of that hull (exact in
/// the plane, cluster representatives otherwise). At `x* = 0` the whole-hull
/// sentinel is returned.
pub fn subdifferential(set: &HSet, xstar: &Vector) -> Result<ArgmaxSet> {
    subdifferential_with(set, xstar, &SupportConfig::default())
}

pub fn subdifferential_with(set: &HSet, xstar: &Vector, cfg: &SupportConfig) -> Result<ArgmaxSet> {
    xstar.check_dim(set.dim())?;
    if xstar.norm() == 0.0 {
        return Ok(whole_hull());
    }
    let (value, cands, truncated) = argmax_candidates(set, xstar.as_slice(), cfg)?;
    let mut a = build_argmax(set, value, cands.clone(), truncated, &cfg.tol);
    if set.dim() == 2 && !a.is_singleton {
        a.representatives = hull_2d(&cands, cfg.tol.cluster * set.bound_hint);
    }
    Ok(a)
}

/// Vertices of the planar convex hull (monotone chain), with near-duplicate
/// and near-collinear points dropped at scale `eps`.
pub fn hull_2d(pts: &[Vec<f64>], eps: f64) -> Vec<Vec<f64>> {
    let mut p: Vec<&Vec<f64>> = pts.iter().collect();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup_by(|a, b| dist(a, b) <= eps);
    if p.len() <= 2 {
        return p.into_iter().cloned().collect();
    }
    let lower = chain(p.iter().copied(), eps);
    let upper = chain(p.iter().rev().copied(), eps);
    let mut out: Vec<Vec<f64>> = lower[..lower.len() - 1].iter().chain(&upper[..upper.len() - 1]).map(|v| (*v).clone()).collect();
    out.dedup();
    out
}

fn chain<'a>(pts: impl Iterator<Item = &'a Vec<f64>>, eps: f64) -> Vec<&'a Vec<f64>> {
    let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut h: Vec<&Vec<f64>> = Vec::new();
    for q in pts {
        while h.len() >= 2 {
            let (o, a) = (h[h.len() - 2], h[h.len() - 1]);
            // drop a unless it is a genuine left turn at scale eps
            if cross(o, a, q) <= eps * dist(o, q) {
                h.pop();
            } else {
                break;
            }
        }
        h.push(q);
    }
    h
}

/// Differentiability of `σ_A` at `x*`: true iff the argmax set is a singleton.
pub fn is_differentiable_at(set: &HSet, xstar: &Vector) -> Result<Differentiability> {
    is_differentiable_at_with(set, xstar, &SupportConfig::default())
}

pub fn is_differentiable_at_with(set: &HSet, xstar: &Vector, cfg: &SupportConfig) -> Result<Differentiability> {
    xstar.check_dim(set.dim())?;
    let status = classify(set, xstar.as_slice());
    let argmax = argmax_set_with(set, xstar, cfg)?;
    let verdict = if status != Status::Finite || argmax.truncated || argmax.whole_hull {
        Tri::Indeterminate
    } else if argmax.is_singleton {
        Tri::True
    } else {
        Tri::False
    };
    let gradient = (verdict == Tri::True).then(|| argmax.representatives[0].clone());
    Ok(Differentiability { verdict, gradient, argmax })
}

/// Central differences of `σ_A` with step `h` (default `1e-5 ‖x*‖`).
pub fn gradient_fd(set: &HSet, xstar: &Vector, h: Option<f64>) -> Result<Vector> {
    gradient_fd_with(set, xstar, h, &SupportConfig::default())
}

pub fn gradient_fd_with(set: &HSet, xstar: &Vector, h: Option<f64>, cfg: &SupportConfig) -> Result<Vector> {
    xstar.check_dim(set.dim())?;
    let y = xstar.as_slice();
    let h = h.unwrap_or(FD_REL * xstar.norm());
    if !(h > 0.0) {
        return Err(Error::Domain("finite-difference step must be positive".into()));
    }
    let p = y.len();
    if !set.bounded {
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        if set.cone.dual_margin(&neg) <= h * (p as f64).sqrt() {
            return Err(Error::Domain("finite-difference probes would leave the interior of the domain".into()));
        }
    }
    let eval = |z: &[f64]| -> Result<f64> {
        let s = support_raw(set, z, cfg);
        if s.status == Status::Finite && s.value.is_finite() {
            Ok(s.value)
        } else {
            Err(Error::Domain("probe left the finite domain".into()))
        }
    };
    let mut g = Vec::with_capacity(p);
    for i in 0..p {
        let mut a = y.to_vec();
        let mut b = y.to_vec();
        a[i] += h;
        b[i] -= h;
        g.push((eval(&a)? - eval(&b)?) / (2.0 * h));
    }
    Ok(Vector::raw(g))
}

/// Whether `∂σ(x*)` is compact, by collecting near-maximisers of the closed
/// convex hull in boxes of radius `R, 2R, 4R, ...`.
pub fn subdifferential_compactness_probe(set: &HSet, xstar: &Vector) -> Result<Compactness> {
    subdifferential_compactness_probe_with(set, xstar, &SupportConfig::default())
}

pub fn subdifferential_compactness_probe_with(set: &HSet, xstar: &Vector, cfg: &SupportConfig) -> Result<Compactness> {
    xstar.check_dim(set.dim())?;
    let y = xstar.as_slice();
    if classify(set, y) == Status::PlusInfinity {
        return Err(Error::Domain("support function is +inf at this point".into()));
    }
    let target = set.hull().unwrap_or(set);
    if let Some(oracle) = target.argmax_oracle() {
        if !oracle(y).is_empty() {
            return Ok(Compactness::Compact);
        }
    }
    let mut diams = Vec::new();
    let mut touches = Vec::new();
    let mut r = target.bound_hint;
    for _ in 0..5 {
        let (_, best_u, cands, t) = box_round(target, y, r, cfg);
        if best_u.is_none() {
            return Ok(Compactness::Indeterminate);
        }
        diams.push(max_pairwise(&cands).0);
        touches.push(t);
        r *= 2.0;
    }
    let eps = cfg.tol.diam * target.bound_hint;
    let growing = diams.windows(2).all(|w| w[1] >= 1.5 * w[0]) && diams[diams.len() - 1] > eps;
    if touches.iter().all(|&t| t) || growing {
        Ok(Compactness::Unbounded)
    } else if touches.iter().all(|&t| !t) && diams.iter().all(|d| (d - diams[0]).abs() <= eps) {
        Ok(Compactness::Compact)
    } else {
        Ok(Compactness::Indeterminate)
    }
}

/// `n` unit functionals `x*` with `-x* in K#`: the centre of the dual chart
/// followed by a regular pattern with chart radius at most `0.95`.
pub fn dual_grid(cone: &Cone, n: usize) -> Vec<Vec<f64>> {
    let chart = cone.dual().chart();
    let m = chart.n_params();
    let params: Vec<Vec<f64>> = if m == 1 {
        let k = if n % 2 == 1 { n } else { n.saturating_sub(1) };
        let mut v: Vec<Vec<f64>> = (0..k).map(|i| vec![if k == 1 { 0.0 } else { -0.95 + 1.9 * i as f64 / (k - 1) as f64 }]).collect();
        if k < n {
            v.push(vec![0.975]);
        }
        v
    } else {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..n)
            .map(|i| {
                let r = if n <= 1 { 0.0 } else { 0.95 * (i as f64 / (n - 1) as f64).sqrt() };
                let mut v = vec![r, (i as f64 * golden).rem_euclid(2.0 * std::f64::consts::PI)];
                for k in 2..m {
                    v.push(std::f64::consts::PI * (0.5 + 0.35 * ((i * (k + 1)) as f64 * golden).sin()));
                }
                v
            })
            .collect()
    };
    params.iter().map(|q| normalize(&chart.point(q)).into_iter().map(|v| -v).collect()).collect()
}

/// One row of a grid scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub xstar: Vec<f64>,
    #[serde(with = "ext_real")]
    pub value: f64,
    #[serde(with = "ext_real")]
    pub diameter: f64,
    pub verdict: Tri,
}

/// Value, argmax diameter and differentiability verdict at each point,
/// evaluated in parallel; rows follow the input order.
pub fn scan(set: &HSet, points: &[Vec<f64>], cfg: &SupportConfig) -> Result<Vec<ScanRow>> {
    for x in points {
        if x.len() != set.dim() {
            return Err(Error::Dimension { expected: set.dim(), got: x.len() });
        }
    }
    Ok(par_map(points, |x| {
        let v = Vector::raw(x.clone());
        match is_differentiable_at_with(set, &v, cfg) {
            Ok(d) => ScanRow { xstar: x.clone(), value: d.argmax.value, diameter: d.argmax.diameter, verdict: d.verdict },
            Err(_) => ScanRow {
                xstar: x.clone(),
                value: support_raw(set, x, cfg).value,
                diameter: f64::INFINITY,
                verdict: Tri::Indeterminate,
            },
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{level_fixture, set_fixture};
    use crate::sets::shifted_cone;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let a3 = set_fixture("ex2-A3").unwrap();
        assert!((support_value(&a3, &v(&[-1.0, -1.0])).unwrap().value + 2.0).abs() < 1e-12);
        let sc = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        assert_eq!(support_value(&sc, &v(&[-1.0, -1.0])).unwrap().value, -3.0);
        let b = set_fixture("ex3b").unwrap();
        assert_eq!(support_value(&b, &v(&[-2.0, -1.0])).unwrap().value, -1.0);
        let e = support_value(&b, &v(&[1.0, 1.0])).unwrap();
        assert_eq!(e.status, Status::PlusInfinity);
        assert_eq!(serde_json::to_value(&e).unwrap()["value"], "+inf");
    }

    #[test]
    fn numeric_values_match_closed_forms() {
        for name in ["ex3b", "hyperbola", "ex3d", "ex3c"] {
            let s = set_fixture(name).unwrap();
            let n = s.numeric_only();
            for y in dual_grid(&s.cone, 7) {
                let exact = support_raw(&s, &y, &SupportConfig::default()).value;
                let num = support_raw(&n, &y, &SupportConfig::default());
                assert!((exact - num.value).abs() <= 1e-8 * (1.0 + exact.abs()), "{name} {y:?}: {exact} vs {}", num.value);
                let u = num.maximizer_hint.unwrap();
                assert!(s.contains(&u));
            }
        }
    }

    #[test]
    fn ex1_argmax_is_origin() {
        let s = set_fixture("ex1").unwrap();
        let a = argmax_set(&s, &v(&[-1.0, -1.0])).unwrap();
        assert!(a.is_singleton, "{a:?}");
        assert!(norm(&a.representatives[0]) < 1e-6);
    }

    #[test]
    fn adsz_level_set_has_a_flat_edge() {
        let s = set_fixture("ex-adsz-L").unwrap();
        let a = subdifferential(&s, &v(&[-1.0, -1.0])).unwrap();
        assert!(!a.is_singleton);
        assert!((a.diameter - 1.5 * 2f64.sqrt()).abs() < 1e-6, "{}", a.diameter);
        assert_eq!(a.representatives.len(), 2);
        assert!((a.value + 2.5).abs() < 1e-9);
    }

    #[test]
    fn d4_is_differentiable_on_the_diagonal() {
        let s = set_fixture("d4").unwrap();
        let d = is_differentiable_at(&s, &v(&[-1.0, -1.0, -1.0])).unwrap();
        assert_eq!(d.verdict, Tri::True);
        let g = d.gradient.unwrap();
        assert!(dist(&g, &[0.0, 0.0, 0.25]) < 1e-6, "{g:?}");
        let fd = gradient_fd(&s, &v(&[-1.0, -1.0, -1.0]), None).unwrap();
        assert!(dist(fd.as_slice(), &g) < 1e-4, "{fd:?}");
    }

    #[test]
    fn ex3b_kink_on_the_diagonal() {
        let s = set_fixture("ex3b").unwrap();
        let d = is_differentiable_at(&s.numeric_only(), &v(&[-1.0, -1.0])).unwrap();
        assert_eq!(d.verdict, Tri::False);
        assert!((d.argmax.diameter - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn fd_gradients() {
        let sc = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        let g = gradient_fd(&sc, &v(&[-1.0, -1.0]), Some(1e-5)).unwrap();
        assert!(dist(g.as_slice(), &[1.0, 2.0]) < 1e-8);
        let a3 = set_fixture("ex2-A3").unwrap();
        let g = gradient_fd(&a3, &v(&[-1.0, -1.0]), Some(1e-5)).unwrap();
        assert!(dist(g.as_slice(), &[1.0, 1.0]) < 1e-6);
        assert!(gradient_fd(&a3, &v(&[0.0, -1.0]), Some(1e-5)).is_err());
    }

    #[test]
    fn zero_gives_the_whole_hull() {
        let s = set_fixture("hyperbola").unwrap();
        assert!(subdifferential(&s, &v(&[0.0, 0.0])).unwrap().whole_hull);
    }

    #[test]
    fn compactness() {
        let s = set_fixture("ex1").unwrap();
        assert_eq!(subdifferential_compactness_probe(&s, &v(&[-1.0, -1.0])).unwrap(), Compactness::Unbounded);
        assert_eq!(subdifferential_compactness_probe(&s, &v(&[0.0, -1.0])).unwrap(), Compactness::Compact);
        let sc = set_fixture("ex3a").unwrap();
        assert_eq!(subdifferential_compactness_probe(&sc, &v(&[-1.0, -3.0])).unwrap(), Compactness::Compact);
    }

    #[test]
    fn dual_grid_is_inside_the_domain() {
        for k in [Cone::orthant(2).unwrap(), Cone::orthant(3).unwrap(), Cone::lorentz(3).unwrap()] {
            let g = dual_grid(&k, 100);
            assert_eq!(g.len(), 100);
            for y in &g {
                let neg: Vec<f64> = y.iter().map(|v| -v).collect();
                assert!(k.dual_margin(&neg) > 0.0);
            }
        }
    }

    #[test]
    fn cobb_douglas_level_set_minimisers() {
        let s = level_fixture("cobb-douglas", 1.0).unwrap();
        let a = argmax_set(&s, &v(&[-1.0, -4.0])).unwrap();
        assert!(a.is_singleton);
        assert!(dist(&a.representatives[0], &[2.0, 0.5]) < 1e-5, "{:?}", a.representatives);
    }
}
