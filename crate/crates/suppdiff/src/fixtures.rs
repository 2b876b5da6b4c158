//! Named sets and production functions with closed-form oracles.
//!
//! Curves (the circle, the hyperbola branch) have empty interior, so their
//! membership tests accept a relative band of `1e-12`; every other test is an
//! exact inequality.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::sets::{level_set, shifted_cone, Axiom, HSet, MemberFn, PointsFn, ProductionFn, ProductionTargets, ScalarFn, WitnessFn};
use crate::vector::{norm, Vector};
use std::sync::Arc;

const CURVE_BAND: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum Fixture {
    Set(HSet),
    Production(ProductionFn),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Set,
    Production,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: Kind,
    pub summary: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "ex1", kind: Kind::Set, summary: "b >= |a|(1 + 1/(a^2+1)) in R^2; nonconvex, contains 0, hull {b >= |a|}" },
    CatalogEntry { name: "ex2-A1", kind: Kind::Set, summary: "unit circle; bounded, support = Euclidean norm" },
    CatalogEntry { name: "ex2-A2", kind: Kind::Set, summary: "annulus 1/2 <= |x| <= 1; same support as the circle" },
    CatalogEntry { name: "ex2-A3", kind: Kind::Set, summary: "hyperbola branch y = 1/x, x > 0; support -2 sqrt(uv) on the negative quadrant" },
    CatalogEntry { name: "ex2-A4", kind: Kind::Set, summary: "1/x <= y <= 2/x, x > 0; same support as the branch" },
    CatalogEntry { name: "ex3a", kind: Kind::Set, summary: "(1,2) + R^2_+; support <a, x*> on the polar cone" },
    CatalogEntry { name: "ex3b", kind: Kind::Set, summary: "{x in R^2_+ : x1 + x2 >= 1}; support max(u1, u2), kink on the diagonal" },
    CatalogEntry { name: "ex3c", kind: Kind::Set, summary: "(1,0,1) + Lorentz cone; gauge discontinuous on the ray through (1,0,1)" },
    CatalogEntry { name: "ex3d", kind: Kind::Set, summary: "(1,2,4) + R^3_+; Leontief gauge min x_i/a_i" },
    CatalogEntry { name: "ex3d-poly", kind: Kind::Set, summary: "(1,1,1) + a four-facet polyhedral cone in R^3" },
    CatalogEntry { name: "d4", kind: Kind::Set, summary: "convex subset of R^3_+ with differentiable support but flat bottom edge" },
    CatalogEntry { name: "hyperbola", kind: Kind::Set, summary: "{x in R^2_+ : x1 x2 >= 1}; strictly convex" },
    CatalogEntry { name: "ex-adsz-L", kind: Kind::Set, summary: "{x in R^2_+ : x1 x2 >= 1, x1 + x2 >= 5/2}; flat edge between (1/2,2) and (2,1/2)" },
    CatalogEntry { name: "cobb-douglas", kind: Kind::Production, summary: "F = x1 x2" },
    CatalogEntry { name: "ex-adsz", kind: Kind::Production, summary: "usc, strictly quasiconcave on R^2_++, discontinuous at (2,1/2)" },
    CatalogEntry { name: "g-smooth", kind: Kind::Production, summary: "G = x1 + x2 + sqrt(x1 x2)" },
    CatalogEntry { name: "phi-g", kind: Kind::Production, summary: "phi(G) with phi(t) = min(t, max(1, t-1)); flat on 1 < G < 2" },
    CatalogEntry { name: "leontief", kind: Kind::Production, summary: "min(x1, x2/2)" },
    CatalogEntry { name: "zero", kind: Kind::Production, summary: "F = 0" },
    CatalogEntry { name: "d4-gauge", kind: Kind::Production, summary: "the gauge of d4 used as a production function" },
];

pub fn fixture(name: &str) -> Result<Fixture> {
    match CATALOG.iter().find(|e| e.name == name) {
        Some(e) if e.kind == Kind::Set => set_fixture(name).map(Fixture::Set),
        Some(_) => production_fixture(name).map(Fixture::Production),
        None => Err(Error::UnknownFixture(name.to_string())),
    }
}

fn orthant(p: usize) -> Cone {
    Cone::orthant(p).expect("valid dimension")
}

fn nonneg(x: &[f64]) -> bool {
    x.iter().all(|&v| v >= 0.0)
}

/// `-2 sqrt(uv)` on the closed negative quadrant, `+inf` elsewhere.
fn hyperbola_support() -> ScalarFn {
    Arc::new(|y: &[f64]| if y[0] <= 0.0 && y[1] <= 0.0 { -2.0 * (y[0] * y[1]).sqrt() } else { f64::INFINITY })
}

fn hyperbola_argmax() -> PointsFn {
    Arc::new(|y: &[f64]| {
        if y[0] < 0.0 && y[1] < 0.0 {
            let x = (y[1] / y[0]).sqrt();
            vec![vec![x, 1.0 / x]]
        } else {
            Vec::new()
        }
    })
}

pub fn set_fixture(name: &str) -> Result<HSet> {
    let set = match name {
        "ex1" => {
            let c = Cone::lorentz(2)?;
            let member: MemberFn = Arc::new(|x: &[f64]| x[1] >= x[0].abs() * (1.0 + 1.0 / (x[0] * x[0] + 1.0)));
            let k = c.clone();
            let support: ScalarFn = Arc::new(move |y: &[f64]| if k.dual_margin(&[-y[0], -y[1]]) >= 0.0 { 0.0 } else { f64::INFINITY });
            let hull = HSet::general("ex1-hull", c.clone(), vec![0.0, 1.0], Arc::new(|x: &[f64]| x[1] >= x[0].abs()))?
                .convex(true)
                .with_support(support.clone());
            HSet::general("ex1", c, vec![0.0, 1.0], member)?.with_support(support).with_hull(hull)
        }
        "ex2-A1" => {
            let member: MemberFn = Arc::new(|x: &[f64]| (norm(x) - 1.0).abs() <= CURVE_BAND);
            circle_oracles(HSet::general("ex2-A1", orthant(2), vec![1.0, 0.0], member)?.bounded())
        }
        "ex2-A2" => {
            let member: MemberFn = Arc::new(|x: &[f64]| {
                let r = norm(x);
                (0.5..=1.0).contains(&r)
            });
            circle_oracles(HSet::general("ex2-A2", orthant(2), vec![1.0, 0.0], member)?.bounded())
        }
        "ex2-A3" => {
            let member: MemberFn = Arc::new(|x: &[f64]| x[0] > 0.0 && (x[0] * x[1] - 1.0).abs() <= CURVE_BAND);
            HSet::general("ex2-A3", orthant(2), vec![1.0, 1.0], member)?.with_support(hyperbola_support()).with_argmax(hyperbola_argmax())
        }
        "ex2-A4" => {
            let member: MemberFn = Arc::new(|x: &[f64]| x[0] > 0.0 && x[0] * x[1] >= 1.0 && x[0] * x[1] <= 2.0);
            HSet::general("ex2-A4", orthant(2), vec![1.0, 1.5], member)?.with_support(hyperbola_support()).with_argmax(hyperbola_argmax())
        }
        "ex3a" => shifted_cone(&Vector::new(vec![1.0, 2.0])?, &orthant(2))?,
        "ex3b" => {
            let member: MemberFn = Arc::new(|x: &[f64]| nonneg(x) && x[0] + x[1] >= 1.0);
            let support: ScalarFn = Arc::new(|y: &[f64]| if y[0] <= 0.0 && y[1] <= 0.0 { y[0].max(y[1]) } else { f64::INFINITY });
            HSet::new("ex3b", orthant(2), vec![1.0, 0.0], member)?
                .with_support(support)
                .with_gauge(Arc::new(|x: &[f64]| x[0] + x[1]))
                .convex(true)
                .with_probes(vec![(vec![1.0, 0.0], vec![0.0, 1.0])])
        }
        "ex3c" => shifted_cone(&Vector::new(vec![1.0, 0.0, 1.0])?, &Cone::lorentz(3)?)?,
        "ex3d" => shifted_cone(&Vector::new(vec![1.0, 2.0, 4.0])?, &orthant(3))?,
        "ex3d-poly" => {
            let k = Cone::polyhedral(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, -1.0]])?;
            shifted_cone(&Vector::new(vec![1.0, 1.0, 1.0])?, &k)?
        }
        "d4" => {
            let member: MemberFn = Arc::new(|v: &[f64]| {
                let (x, y, z) = (v[0], v[1], v[2]);
                if x < 0.0 || y < 0.0 || z < 0.0 {
                    return false;
                }
                let s = x + y - 1.0;
                s >= 0.0 || z >= 0.5 * s * s / (2.0 - (x - y) * (x - y))
            });
            HSet::new("d4", orthant(3), vec![1.0, 0.0, 0.0], member)?
                .convex(true)
                .with_probes(vec![(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0])])
        }
        "hyperbola" => {
            let member: MemberFn = Arc::new(|x: &[f64]| nonneg(x) && x[0] * x[1] >= 1.0);
            HSet::new("hyperbola", orthant(2), vec![1.0, 1.0], member)?
                .with_support(hyperbola_support())
                .with_gauge(Arc::new(|x: &[f64]| (x[0] * x[1]).max(0.0).sqrt()))
                .convex(true)
        }
        "ex-adsz-L" => {
            let member: MemberFn = Arc::new(|x: &[f64]| nonneg(x) && x[0] * x[1] >= 1.0 && x[0] + x[1] >= 2.5);
            HSet::new("ex-adsz-L", orthant(2), vec![1.25, 1.25], member)?
                .convex(true)
                .with_probes(vec![(vec![0.5, 2.0], vec![2.0, 0.5])])
        }
        _ => {
            return match CATALOG.iter().find(|e| e.name == name) {
                Some(_) => Err(Error::Set(format!("`{name}` is a production function; use it through a level set"))),
                None => Err(Error::UnknownFixture(name.to_string())),
            }
        }
    };
    let summary = CATALOG.iter().find(|e| e.name == name).map(|e| e.summary).unwrap_or_default();
    let mut set = set.with_description(summary);
    set.label = name.to_string();
    Ok(set)
}

fn circle_oracles(s: HSet) -> HSet {
    s.with_support(Arc::new(|y: &[f64]| norm(y))).with_argmax(Arc::new(|y: &[f64]| {
        let n = norm(y);
        if n > 0.0 {
            vec![y.iter().map(|v| v / n).collect()]
        } else {
            Vec::new()
        }
    }))
}

/// ex-adsz production function, branches tested in order.
pub fn adsz(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let p = a * b;
    if p < 1.0 || (0.5 < a && a < 2.0 && b == 1.0 / a) {
        p
    } else if p >= 1.0 && a + b >= 2.5 {
        1.0 + p
    } else {
        1.0 + (p - 1.0) / (2.5 * a - 1.0 - a * a)
    }
}

pub fn g_smooth(x: &[f64]) -> f64 {
    x[0] + x[1] + (x[0] * x[1]).max(0.0).sqrt()
}

pub fn phi(t: f64) -> f64 {
    t.min(1.0f64.max(t - 1.0))
}

fn diag_witness(scale: impl Fn(f64) -> f64 + Send + Sync + 'static) -> WitnessFn {
    Arc::new(move |g: f64| {
        let s = scale(g);
        Some(vec![s, s])
    })
}

pub fn production_fixture(name: &str) -> Result<ProductionFn> {
    use Axiom::*;
    let f = match name {
        "cobb-douglas" => ProductionFn::new("cobb-douglas", 2, Arc::new(|x: &[f64]| x[0] * x[1]), diag_witness(|g| g.max(0.0).sqrt()))
            .with_axioms(&[F1, F2, F2c, F2d, F3, F3c, F3d, F4, F4b, F4c, F4d, F5])
            .with_targets(ProductionTargets {
                points: vec![vec![1.0, 1.0]],
                pairs: vec![(vec![0.0, 2.0], vec![0.0, 1.0])],
                triples: vec![(vec![0.0, 1.0], vec![0.0, 2.0], 0.5)],
            }),
        "ex-adsz" => ProductionFn::new("ex-adsz", 2, Arc::new(adsz), diag_witness(|g| 1.25f64.max(g.max(0.0).sqrt())))
            .with_axioms(&[F1, F2, F2c, F3c, F3d, F4])
            .with_targets(ProductionTargets {
                points: vec![vec![2.0, 0.5], vec![0.5, 2.0], vec![1.25, 1.25]],
                pairs: vec![(vec![2.0, 0.5], vec![1.9, 0.5])],
                triples: vec![(vec![0.5, 2.0], vec![2.0, 0.5], 0.5)],
            }),
        "g-smooth" => ProductionFn::new("g-smooth", 2, Arc::new(g_smooth), diag_witness(|g| g.max(0.0) / 3.0))
            .with_axioms(&[F1, F2, F2b, F2c, F2d, F3, F3b, F3c, F3d, F4, F4b, F4c, F4d, F5])
            .with_targets(ProductionTargets { points: vec![vec![1.0, 0.0]], pairs: vec![], triples: vec![(vec![1.0, 0.0], vec![0.0, 1.0], 0.5)] }),
        "phi-g" => ProductionFn::new("phi-g", 2, Arc::new(|x: &[f64]| phi(g_smooth(x))), diag_witness(|g| (g.max(0.0) + 1.0) / 3.0))
            .with_axioms(&[F1, F2, F3, F4, F4b, F4c, F4d, F5])
            .with_targets(ProductionTargets {
                points: vec![vec![0.5, 0.5]],
                pairs: vec![(vec![0.55, 0.55], vec![0.5, 0.5])],
                triples: vec![(vec![0.6, 0.4], vec![0.4, 0.6], 0.5)],
            }),
        "leontief" => ProductionFn::new("leontief", 2, Arc::new(|x: &[f64]| x[0].min(x[1] / 2.0)), Arc::new(|g: f64| Some(vec![g.max(0.0), 2.0 * g.max(0.0)])))
            .with_axioms(&[F1, F2, F3, F4, F4b, F4c, F4d, F5])
            .with_targets(ProductionTargets {
                points: vec![vec![1.0, 2.0]],
                pairs: vec![(vec![2.0, 2.0], vec![1.0, 2.0])],
                triples: vec![(vec![2.0, 2.0], vec![1.0, 2.0], 0.5)],
            }),
        "zero" => ProductionFn::new("zero", 2, Arc::new(|_: &[f64]| 0.0), Arc::new(|g: f64| (g <= 0.0).then(|| vec![0.0, 0.0])))
            .with_axioms(&[F1, F2, F3, F4, F4b]),
        "d4-gauge" => ProductionFn::from_gauge(&set_fixture("d4")?)?
            .with_axioms(&[F1, F2, F2c, F3, F4, F4b, F5])
            .with_targets(ProductionTargets {
                points: vec![vec![1.0, 0.0, 0.0]],
                pairs: vec![],
                triples: vec![(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], 0.5)],
            }),
        _ => {
            return match CATALOG.iter().find(|e| e.name == name) {
                Some(_) => Err(Error::Set(format!("`{name}` is a set, not a production function"))),
                None => Err(Error::UnknownFixture(name.to_string())),
            }
        }
    };
    let f = match name {
        "cobb-douglas" | "g-smooth" => convex_levels(f),
        // min(x1, x2/2) >= γ is (γ, 2γ) + R^2_+
        "leontief" => f.with_level_sets(Arc::new(|g: f64| {
            let mut s = shifted_cone(&Vector::raw(vec![g, 2.0 * g]), &Cone::orthant(2)?)?;
            s.label = format!("L(leontief,{g})");
            Ok(s)
        })),
        _ => f,
    };
    let summary = CATALOG.iter().find(|e| e.name == name).map(|e| e.summary).unwrap_or_default();
    Ok(f.with_description(summary))
}

/// Level set of a named production function.
pub fn level_fixture(name: &str, gamma: f64) -> Result<HSet> {
    level_set(&production_fixture(name)?, gamma, None)
}

/// Level sets known to be convex, plus the cobb-douglas gauge.
fn convex_levels(f: ProductionFn) -> ProductionFn {
    let base = f.clone();
    let name = f.label.clone();
    f.with_level_sets(Arc::new(move |g: f64| {
        let w = base.witness_for(g);
        let s = level_set(&base, g, w)?.convex(true);
        Ok(if name == "cobb-douglas" { s.with_gauge(Arc::new(move |x: &[f64]| ((x[0] * x[1]).max(0.0) / g).sqrt())) } else { s })
    }))
}
