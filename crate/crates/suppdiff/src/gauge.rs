//! The gauge `F_A(x) = max{t >= 0 : x in tA}` (with `0A = K`) and sampled
//! probes of its structural properties.
//!
//! Because `[α, ∞)A = αA` for (H)-sets, `{t > 0 : x/t in A}` is an interval
//! `(0, F_A(x)]`, so the gauge is found by bracketing and bisection on `t`.
//! The returned value is always the lower end of the final bracket, which
//! keeps `x / F_A(x)` a member of `A`.

use crate::conditions::CheckConfig;
use crate::error::{Error, Result};
use crate::report::{Alarm, ConditionReport, SuiteStatus, TheoremReport, Witness};
use crate::sampling::{self, ball_point, cone_point, to_cone_boundary};
use crate::sets::HSet;
use crate::tol::{Tolerances, BIS_MAX_ITER, BRACKET_STEPS, GAUGE_FLOOR};
use crate::vector::{dist, lerp, norm, Vector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeEval {
    pub value: f64,
    pub bracket_width: f64,
}

/// Gauge through the closed form when available, bisection otherwise.
pub fn gauge(set: &HSet, x: &Vector) -> Result<GaugeEval> {
    check_in_cone(set, x)?;
    Ok(gauge_raw(set, x.as_slice()))
}

/// Gauge by bisection on membership, ignoring any closed form.
pub fn gauge_bisect(set: &HSet, x: &Vector) -> Result<GaugeEval> {
    check_in_cone(set, x)?;
    Ok(bisect(set, x.as_slice(), Tolerances::default().bis))
}

fn check_in_cone(set: &HSet, x: &Vector) -> Result<()> {
    x.check_dim(set.dim())?;
    // rounding on bd K is tolerated at the 1e-12 relative level
    if set.cone.margin(x.as_slice()) < -1e-12 * x.norm().max(1.0) {
        return Err(Error::OutsideCone);
    }
    Ok(())
}

pub(crate) fn gauge_raw(set: &HSet, x: &[f64]) -> GaugeEval {
    match set.gauge_oracle() {
        Some(f) => GaugeEval { value: f(x).max(0.0), bracket_width: 0.0 },
        None => bisect(set, x, Tolerances::default().bis),
    }
}

fn bisect(set: &HSet, x: &[f64], tol_rel: f64) -> GaugeEval {
    let inside = |t: f64| {
        let y: Vec<f64> = x.iter().map(|v| v / t).collect();
        set.contains(&y)
    };
    if norm(x) == 0.0 {
        return GaugeEval { value: 0.0, bracket_width: 0.0 };
    }
    let (mut lo, mut hi);
    if inside(1.0) {
        lo = 1.0;
        hi = 2.0;
        let mut steps = 0;
        while inside(hi) {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps >= BRACKET_STEPS {
                return GaugeEval { value: lo, bracket_width: f64::INFINITY };
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        loop {
            if inside(lo) {
                break;
            }
            hi = lo;
            lo *= 0.5;
            if lo < GAUGE_FLOOR {
                return GaugeEval { value: 0.0, bracket_width: hi };
            }
        }
    }
    let mut it = 0;
    while hi - lo > tol_rel * (1.0 + lo) && it < BIS_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        it += 1;
    }
    GaugeEval { value: lo, bracket_width: hi - lo }
}

fn band(g: f64) -> f64 {
    1e-8 * (1.0 + g.abs())
}

/// Draws `n` points of `K` at the set's scale (a fifth of them on `bd K`).
pub fn sample_cone_points(set: &HSet, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let chart = set.cone.chart();
    let mut r = sampling::rng(seed, 11);
    (0..n).map(|_| cone_point(&chart, &mut r, 1e-2 * set.bound_hint, set.bound_hint, 0.2)).collect()
}

/// `{F_A >= γ} = γA` on the given samples.
pub fn level_identity_check(set: &HSet, gamma: f64, samples: &[Vec<f64>], seed: u64) -> ConditionReport {
    let mut ws = Vec::new();
    for x in samples {
        if gamma <= 0.0 {
            // 0A = K
            if set.cone.margin(x) < -1e-12 * norm(x).max(1.0) {
                ws.push(Witness::new(vec![x.clone()], None));
            }
            continue;
        }
        let g = gauge_raw(set, x).value;
        if (g - gamma).abs() <= band(gamma) {
            continue;
        }
        let y: Vec<f64> = x.iter().map(|v| v / gamma).collect();
        if (g >= gamma) != set.contains(&y) {
            ws.push(Witness::new(vec![x.clone()], None));
        }
    }
    ConditionReport::from_witnesses("level-identity", ws, samples.len(), seed)
}

/// `F_A(tx) = t F_A(x)`.
pub fn homogeneity_check(set: &HSet, samples: &[Vec<f64>], seed: u64) -> ConditionReport {
    let mut r = sampling::rng(seed, 12);
    let mut ws = Vec::new();
    for x in samples {
        let t = sampling::log_uniform(&mut r, 1e-2, 10.0);
        let gx = gauge_raw(set, x).value;
        let tx: Vec<f64> = x.iter().map(|v| v * t).collect();
        let gtx = gauge_raw(set, &tx).value;
        if (gtx - t * gx).abs() > 1e-8 * (1.0 + t) * (1.0 + gx) {
            ws.push(Witness::new(vec![x.clone(), tx], Some(t)));
        }
    }
    ConditionReport::from_witnesses("homogeneity", ws, samples.len(), seed)
}

/// `x in F_A(x) A` whenever the gauge is positive, up to the bisection band
/// (a closed-form gauge can put `x / F_A(x)` a rounding error outside `A`).
pub fn attainment_check(set: &HSet, samples: &[Vec<f64>], seed: u64) -> ConditionReport {
    let bis = Tolerances::default().bis;
    let mut ws = Vec::new();
    for x in samples {
        let g = gauge_raw(set, x).value;
        if g > GAUGE_FLOOR {
            let t = g * (1.0 - bis);
            let y: Vec<f64> = x.iter().map(|v| v / t).collect();
            if !set.contains(&y) {
                ws.push(Witness::new(vec![x.clone()], None));
            }
        }
    }
    ConditionReport::from_witnesses("attainment", ws, samples.len(), seed)
}

/// Interior points of `K` have positive gauge. Points within `1e-9 |x|` of
/// `bd K` are skipped: their gauge can fall below the bisection floor.
pub fn positivity_check(set: &HSet, samples: &[Vec<f64>], seed: u64) -> ConditionReport {
    let ws = samples
        .iter()
        .filter(|x| set.cone.margin(x) > 1e-9 * norm(x) && gauge_raw(set, x).value <= 0.0)
        .map(|x| Witness::new(vec![x.clone()], None))
        .collect();
    ConditionReport::from_witnesses("positivity", ws, samples.len(), seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    NonStrict,
    /// Strict increase from points of `int K`.
    StrictIntK,
    /// Strict increase from points with positive gauge.
    StrictPositive,
}

/// Random pairs `(x, x + k)` with `x, k in K`.
pub fn sample_pairs(set: &HSet, n: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let chart = set.cone.chart();
    let mut r = sampling::rng(seed, 13);
    (0..n)
        .map(|_| {
            let x = cone_point(&chart, &mut r, 1e-2 * set.bound_hint, set.bound_hint, 0.2);
            let k = cone_point(&chart, &mut r, 1e-3 * set.bound_hint, 0.5 * set.bound_hint, 0.5);
            let y = x.iter().zip(&k).map(|(a, b)| a + b).collect();
            (x, y)
        })
        .collect()
}

/// Monotonicity along the cone order; strict variants discard pairs closer
/// than the strict margin.
pub fn monotonicity_check(set: &HSet, pairs: &[(Vec<f64>, Vec<f64>)], mode: Strictness, seed: u64) -> ConditionReport {
    let margin = Tolerances::default().strict * set.bound_hint;
    let mut ws = Vec::new();
    let mut used = 0;
    for (x, y) in pairs {
        let gx = gauge_raw(set, x).value;
        let gy = gauge_raw(set, y).value;
        let ok = match mode {
            Strictness::NonStrict => gy >= gx - band(gx),
            Strictness::StrictIntK | Strictness::StrictPositive => {
                let eligible = dist(x, y) >= margin
                    && match mode {
                        Strictness::StrictIntK => set.cone.interior_contains_raw(x),
                        _ => gx > band(0.0),
                    };
                if !eligible {
                    continue;
                }
                gy > gx + 10.0 * Tolerances::default().bis * (1.0 + gx)
            }
        };
        used += 1;
        if !ok {
            ws.push(Witness::new(vec![x.clone(), y.clone()], None));
        }
    }
    let id = match mode {
        Strictness::NonStrict => "monotonicity",
        Strictness::StrictIntK => "strict-monotonicity-int-k",
        Strictness::StrictPositive => "strict-monotonicity-positive",
    };
    ConditionReport::from_witnesses(id, ws, used, seed)
}

/// Oscillation `max - min` of the gauge over `K ∩ ball(x0, r)` for each radius.
///
/// Half the probes are pushed onto `bd K`, where gauges of non-polyhedral
/// cones can jump.
pub fn continuity_probe(set: &HSet, x0: &[f64], radii: &[f64], samples_per_radius: usize, seed: u64) -> Vec<f64> {
    let mut r = sampling::rng(seed, 14);
    let p = x0.len();
    let g0 = gauge_raw(set, x0).value;
    radii
        .iter()
        .map(|&rad| {
            let (mut lo, mut hi) = (g0, g0);
            for i in 0..samples_per_radius {
                let b = ball_point(&mut r, p);
                let mut y: Vec<f64> = x0.iter().zip(&b).map(|(a, c)| a + rad * c).collect();
                if i % 2 == 1 {
                    y = to_cone_boundary(&set.cone, &y, norm(x0));
                }
                if set.cone.margin(&y) < 0.0 || dist(&y, x0) > rad {
                    continue;
                }
                let g = gauge_raw(set, &y).value;
                lo = lo.min(g);
                hi = hi.max(g);
            }
            hi - lo
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QcMode {
    NonStrict,
    /// Strict on `int K`.
    StrictIntK,
    /// Strict on `PA = {F_A > 0}`.
    StrictPositive,
}

pub type Triple = (Vec<f64>, Vec<f64>, f64);

/// Random triples `(x, x', λ)` of `K`; `λ = 1/2` for every other triple.
pub fn sample_triples(set: &HSet, n: usize, seed: u64) -> Vec<Triple> {
    let chart = set.cone.chart();
    let mut r = sampling::rng(seed, 15);
    (0..n)
        .map(|i| {
            let x = cone_point(&chart, &mut r, 1e-2 * set.bound_hint, set.bound_hint, 0.2);
            let y = cone_point(&chart, &mut r, 1e-2 * set.bound_hint, set.bound_hint, 0.2);
            let lam = if i % 2 == 0 { 0.5 } else { rand::Rng::gen_range(&mut r, 0.01..0.99) };
            (x, y, lam)
        })
        .collect()
}

/// `F_A(λx + (1-λ)x') >= min(F_A(x), F_A(x'))`, or its strict form.
pub fn quasiconcavity_check(set: &HSet, triples: &[Triple], mode: QcMode, seed: u64) -> ConditionReport {
    let margin = Tolerances::default().strict * set.bound_hint;
    let mut ws = Vec::new();
    let mut used = 0;
    for (x, y, lam) in triples {
        let gx = gauge_raw(set, x).value;
        let gy = gauge_raw(set, y).value;
        let m = lerp(x, y, *lam);
        let gm = gauge_raw(set, &m).value;
        let low = gx.min(gy);
        let ok = match mode {
            QcMode::NonStrict => gm >= low - band(low),
            QcMode::StrictIntK | QcMode::StrictPositive => {
                let eligible = dist(x, y) >= margin
                    && match mode {
                        QcMode::StrictIntK => set.cone.interior_contains_raw(x) && set.cone.interior_contains_raw(y),
                        _ => gx > band(0.0) && gy > band(0.0),
                    };
                if !eligible {
                    continue;
                }
                gm > low + 10.0 * Tolerances::default().bis * (1.0 + low)
            }
        };
        used += 1;
        if !ok {
            ws.push(Witness::new(vec![x.clone(), y.clone()], Some(*lam)));
        }
    }
    let id = match mode {
        QcMode::NonStrict => "quasiconcavity",
        QcMode::StrictIntK => "strict-quasiconcavity-int-k",
        QcMode::StrictPositive => "strict-quasiconcavity-positive",
    };
    ConditionReport::from_witnesses(id, ws, used, seed)
}

/// Midpoint concavity `F((x+x')/2) >= (F(x) + F(x'))/2`.
pub fn concavity_check(set: &HSet, triples: &[Triple], seed: u64) -> ConditionReport {
    let mut ws = Vec::new();
    for (x, y, _) in triples {
        let gx = gauge_raw(set, x).value;
        let gy = gauge_raw(set, y).value;
        let gm = gauge_raw(set, &lerp(x, y, 0.5)).value;
        let avg = 0.5 * (gx + gy);
        if gm < avg - band(avg) {
            ws.push(Witness::new(vec![x.clone(), y.clone()], Some(0.5)));
        }
    }
    ConditionReport::from_witnesses("concavity", ws, triples.len(), seed)
}

fn alarm_unless_holds(rep: &mut TheoremReport, r: &ConditionReport, replay: &str) {
    if !r.holds() {
        rep.alarm(Alarm {
            id: format!("prop-fa/{}", r.condition_id),
            message: format!("gauge property {} fails on the sample", r.condition_id),
            witness: r.witnesses.first().cloned(),
            replay: replay.to_string(),
        });
    }
}

/// Levels tested by the level identity in [`harness_prop_fa`].
pub const LEVELS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// Structural properties of the gauge of an (H)-set on shared samples:
/// homogeneity, monotonicity, attainment, the level identity and
/// positivity on `int K`, plus quasiconcavity and concavity for convex sets.
/// Any violation is an alarm.
pub fn harness_prop_fa(set: &HSet, cfg: &CheckConfig) -> TheoremReport {
    let mut rep = TheoremReport::new("prop-fa", set.label.clone());
    if !set.satisfies_h {
        rep.mark(SuiteStatus::Skipped);
        rep.note("set does not satisfy (H); the gauge is not defined");
        return rep;
    }
    let pts = sample_cone_points(set, cfg.samples, cfg.seed);
    let pairs = sample_pairs(set, cfg.samples, cfg.seed);
    let mut reports = vec![
        homogeneity_check(set, &pts, cfg.seed),
        monotonicity_check(set, &pairs, Strictness::NonStrict, cfg.seed),
        attainment_check(set, &pts, cfg.seed),
        positivity_check(set, &pts, cfg.seed),
    ];
    for g in LEVELS {
        let mut r = level_identity_check(set, g, &pts, cfg.seed);
        r.condition_id = format!("level-identity@{g}");
        reports.push(r);
    }
    if set.convex {
        let triples = sample_triples(set, cfg.samples, cfg.seed);
        reports.push(quasiconcavity_check(set, &triples, QcMode::NonStrict, cfg.seed));
        reports.push(concavity_check(set, &triples, cfg.seed));
    } else {
        rep.note("set not known to be convex: quasiconcavity and concavity not tested");
    }
    let replay = cfg.verify_command("prop-fa", set);
    for r in &reports {
        alarm_unless_holds(&mut rep, r, &replay);
    }
    rep.conditions = reports;
    rep
}

/// Probe radii for [`harness_cor_cfa`], relative to `max(|x0|, 1)`.
pub const CFA_RADII: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
const CFA_SAMPLES: usize = 64;
const CFA_BOUNDARY_PROBES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfaProbe {
    pub point: Vec<f64>,
    pub gauge: f64,
    /// Oscillation of the gauge over the ball of each radius.
    pub oscillation: Vec<f64>,
    pub discontinuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfaReport {
    pub set: String,
    pub polyhedral: bool,
    pub status: SuiteStatus,
    pub radii: Vec<f64>,
    pub probes: Vec<CfaProbe>,
    pub notes: Vec<String>,
    pub alarms: Vec<Alarm>,
}

/// Continuity of the gauge against the shape of the cone.
///
/// The gauge is usc, so a discontinuity at `x0` is a drop: the probe flags
/// one when the oscillation stays above `F_A(x0) / 2` at every radius. Over
/// a polyhedral cone this is an alarm. Over other cones a discontinuity is
/// expected for some sets, so it is recorded either way.
pub fn harness_cor_cfa(set: &HSet, cfg: &CheckConfig) -> CfaReport {
    let polyhedral = set.cone.is_polyhedral();
    let mut rep = CfaReport {
        set: set.label.clone(),
        polyhedral,
        status: SuiteStatus::Pass,
        radii: CFA_RADII.to_vec(),
        probes: Vec::new(),
        notes: Vec::new(),
        alarms: Vec::new(),
    };
    if !set.satisfies_h {
        rep.status = SuiteStatus::Skipped;
        rep.notes.push("set does not satisfy (H); the gauge is not defined".into());
        return rep;
    }
    let mut centres = vec![set.witness.clone()];
    centres.extend(set.cone.generators().iter().map(|g| g.iter().map(|v| v * set.bound_hint).collect()));
    let chart = set.cone.chart();
    let mut r = sampling::rng(cfg.seed, 16);
    centres.extend((0..CFA_BOUNDARY_PROBES).filter_map(|_| sampling::boundary_sample(set, &chart, &mut r, 0.5)));
    for (i, x0) in centres.into_iter().enumerate() {
        let scale = norm(&x0).max(1.0);
        let radii: Vec<f64> = CFA_RADII.iter().map(|r| r * scale).collect();
        let osc = continuity_probe(set, &x0, &radii, CFA_SAMPLES, cfg.seed.wrapping_add(i as u64));
        let g0 = gauge_raw(set, &x0).value;
        let discontinuous = g0 > GAUGE_FLOOR && osc.iter().all(|&o| o >= 0.5 * g0);
        rep.probes.push(CfaProbe { point: x0, gauge: g0, oscillation: osc, discontinuous });
    }
    let jumps: Vec<&CfaProbe> = rep.probes.iter().filter(|p| p.discontinuous).collect();
    match (polyhedral, jumps.first()) {
        (true, Some(p)) => {
            rep.alarms.push(Alarm {
                id: "cor-cfa/polyhedral".into(),
                message: "gauge over a polyhedral cone is discontinuous".into(),
                witness: Some(Witness::new(vec![p.point.clone()], None)),
                replay: cfg.verify_command("cor-cfa", set),
            });
            rep.status = SuiteStatus::Alarm;
        }
        (true, None) => rep.notes.push("polyhedral cone: no oscillation persists at any probe".into()),
        (false, Some(_)) => rep.notes.push(format!("non-polyhedral cone: gauge discontinuous at {} probes", jumps.len())),
        (false, None) => rep.notes.push("non-polyhedral cone: no discontinuity at the probed points (resolution-limited)".into()),
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;
    use crate::sets::shifted_cone;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn leontief_closed_form_and_bisection() {
        let a = shifted_cone(&v(&[1.0, 2.0, 4.0]), &Cone::orthant(3).unwrap()).unwrap();
        let x = v(&[2.0, 2.0, 4.0]);
        assert_eq!(gauge(&a, &x).unwrap().value, 1.0);
        let b = gauge_bisect(&a, &x).unwrap();
        assert!((b.value - 1.0).abs() < 1e-9);
        assert!(b.bracket_width <= 1e-10 * 2.0);
    }

    #[test]
    fn lorentz_shift_examples() {
        let a = shifted_cone(&v(&[1.0, 0.0, 1.0]), &Cone::lorentz(3).unwrap()).unwrap();
        assert!((gauge(&a, &v(&[0.0, 0.0, 1.0])).unwrap().value - 0.5).abs() < 1e-12);
        assert!((gauge_bisect(&a, &v(&[0.0, 0.0, 1.0])).unwrap().value - 0.5).abs() < 1e-9);
        let x = v(&[1.0, 1e-3, (1.0f64 + 1e-6).sqrt()]);
        assert!(gauge(&a, &x).unwrap().value < 1e-9);
        assert!(gauge_bisect(&a, &x).unwrap().value < 1e-9);
    }

    #[test]
    fn outside_cone_is_an_error() {
        let a = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        assert_eq!(gauge(&a, &v(&[-1.0, 1.0])), Err(Error::OutsideCone));
    }

    #[test]
    fn homogeneous_on_members() {
        let a = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        let x = v(&[3.0, 3.0]);
        let g1 = gauge(&a, &x).unwrap().value;
        let g2 = gauge(&a, &x.scale(2.0)).unwrap().value;
        assert!((g2 - 2.0 * g1).abs() < 1e-12);
    }

    #[test]
    fn level_identity_at_zero_is_trivial() {
        let a = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        let s = sample_cone_points(&a, 100, 1);
        assert!(level_identity_check(&a, 0.0, &s, 1).holds());
        assert!(level_identity_check(&a.numeric_only(), 1.0, &s, 1).holds());
    }

    #[test]
    fn prop_fa_on_fixtures() {
        let cfg = CheckConfig::default().with_samples(300).with_seed(5);
        for name in ["ex3a", "ex3b", "ex3c", "ex3d", "ex3d-poly", "d4", "hyperbola", "ex-adsz-L"] {
            let set = crate::fixtures::set_fixture(name).unwrap();
            let r = harness_prop_fa(&set, &cfg);
            assert_eq!(r.status, SuiteStatus::Pass, "{name}: {:?}", r.alarms);
        }
        let curve = crate::fixtures::set_fixture("ex2-A3").unwrap();
        assert_eq!(harness_prop_fa(&curve, &cfg).status, SuiteStatus::Skipped);
    }

    #[test]
    fn cor_cfa_dichotomy() {
        let cfg = CheckConfig::default().with_seed(5);
        let lorentz = harness_cor_cfa(&crate::fixtures::set_fixture("ex3c").unwrap(), &cfg);
        assert_eq!(lorentz.status, SuiteStatus::Pass);
        assert!(lorentz.probes[0].discontinuous, "{:?}", lorentz.probes[0]);
        for name in ["ex3a", "ex3d", "ex3d-poly", "d4", "ex3b"] {
            let r = harness_cor_cfa(&crate::fixtures::set_fixture(name).unwrap(), &cfg);
            assert_eq!(r.status, SuiteStatus::Pass, "{name}: {:?}", r.probes);
        }
    }
}
