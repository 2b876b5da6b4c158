//! Sets ordered by a cone, and production functions with their level sets.
//!
//! An [`HSet`] is a membership oracle `A` together with a cone `K`. When the
//! pair satisfies condition (H) (`K` pointed with interior, `A` closed and
//! `A = A + K ⊂ K \ {0}`) the numerical engines use rays from the origin and
//! the gauge; other sets fall back to box-constrained search.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::vector::{norm, sub, Vector};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub type MemberFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type PointsFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
pub type WitnessFn = Arc<dyn Fn(f64) -> Option<Vec<f64>> + Send + Sync>;
pub type LevelFn = Arc<dyn Fn(f64) -> Result<HSet> + Send + Sync>;

/// A pair of points known to be critical for a set, tried by every sampler.
pub type ProbePair = (Vec<f64>, Vec<f64>);

#[derive(Clone)]
pub struct HSet {
    pub label: String,
    pub cone: Cone,
    member: MemberFn,
    support_oracle: Option<ScalarFn>,
    gauge_oracle: Option<ScalarFn>,
    argmax_oracle: Option<PointsFn>,
    hull: Option<Box<HSet>>,
    /// Scale used for sampling boxes, probe radii and clustering.
    pub bound_hint: f64,
    pub witness: Vec<f64>,
    /// Whether `(A, K)` satisfies condition (H).
    pub satisfies_h: bool,
    /// Declared convexity (used by the convex-set conditions and harnesses).
    pub convex: bool,
    /// Bounded sets have a support function finite everywhere.
    pub bounded: bool,
    pub probes: Vec<ProbePair>,
    pub description: String,
}

impl fmt::Debug for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HSet")
            .field("label", &self.label)
            .field("cone", &self.cone)
            .field("bound_hint", &self.bound_hint)
            .field("satisfies_h", &self.satisfies_h)
            .field("convex", &self.convex)
            .field("support_oracle", &self.support_oracle.is_some())
            .field("gauge_oracle", &self.gauge_oracle.is_some())
            .finish()
    }
}

impl HSet {
    /// A set satisfying (H). The witness must be a member of `A`, lie in `K`
    /// and be nonzero.
    pub fn new(label: impl Into<String>, cone: Cone, witness: Vec<f64>, member: MemberFn) -> Result<Self> {
        let label = label.into();
        if witness.len() != cone.dim() {
            return Err(Error::Dimension { expected: cone.dim(), got: witness.len() });
        }
        if !member(&witness) {
            return Err(Error::Set(format!("{label}: witness is not a member")));
        }
        let bound_hint = 10.0 * norm(&witness).max(1e-3);
        Self {
            label,
            cone,
            member,
            support_oracle: None,
            gauge_oracle: None,
            argmax_oracle: None,
            hull: None,
            bound_hint,
            witness,
            satisfies_h: true,
            convex: false,
            bounded: false,
            probes: Vec::new(),
            description: String::new(),
        }
        .checked_h()
    }

    /// A set without the (H) requirement; `cone` is the declared recession
    /// cone that decides where the support function is finite.
    pub fn general(label: impl Into<String>, cone: Cone, witness: Vec<f64>, member: MemberFn) -> Result<Self> {
        let label = label.into();
        if witness.len() != cone.dim() {
            return Err(Error::Dimension { expected: cone.dim(), got: witness.len() });
        }
        if !member(&witness) {
            return Err(Error::Set(format!("{label}: witness is not a member")));
        }
        let mut s = Self::new("tmp", cone.clone(), cone.interior_point().to_vec(), Arc::new(|_: &[f64]| true))?;
        s.label = label;
        s.member = member;
        s.bound_hint = 10.0 * norm(&witness).max(0.1);
        s.witness = witness;
        s.satisfies_h = false;
        Ok(s)
    }

    fn checked_h(self) -> Result<Self> {
        if self.satisfies_h && (!self.cone.contains_raw(&self.witness) || norm(&self.witness) == 0.0) {
            return Err(Error::Set(format!("{}: witness must lie in K \\ {{0}}", self.label)));
        }
        Ok(self)
    }

    /// Marks the set as not satisfying (H); `cone` is then the declared
    /// recession cone used to decide the domain of the support function.
    pub fn without_h(mut self) -> Self {
        self.satisfies_h = false;
        self
    }

    pub fn bounded(mut self) -> Self {
        self.bounded = true;
        self.satisfies_h = false;
        self
    }

    pub fn convex(mut self, convex: bool) -> Self {
        self.convex = convex;
        self
    }

    pub fn with_support(mut self, f: ScalarFn) -> Self {
        self.support_oracle = Some(f);
        self
    }

    pub fn with_gauge(mut self, f: ScalarFn) -> Self {
        self.gauge_oracle = Some(f);
        self
    }

    pub fn with_argmax(mut self, f: PointsFn) -> Self {
        self.argmax_oracle = Some(f);
        self
    }

    pub fn with_hull(mut self, hull: HSet) -> Self {
        self.hull = Some(Box::new(hull));
        self
    }

    pub fn with_bound_hint(mut self, b: f64) -> Self {
        self.bound_hint = b;
        self
    }

    pub fn with_probes(mut self, probes: Vec<ProbePair>) -> Self {
        self.probes = probes;
        self
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn member(&self, x: &Vector) -> Result<bool> {
        x.check_dim(self.dim())?;
        Ok((self.member)(x.as_slice()))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.member)(x)
    }

    pub fn support_oracle(&self) -> Option<&ScalarFn> {
        self.support_oracle.as_ref()
    }

    pub fn gauge_oracle(&self) -> Option<&ScalarFn> {
        self.gauge_oracle.as_ref()
    }

    pub fn argmax_oracle(&self) -> Option<&PointsFn> {
        self.argmax_oracle.as_ref()
    }

    /// The closed convex hull, when the set is not convex and the hull is known.
    pub fn hull(&self) -> Option<&HSet> {
        self.hull.as_deref()
    }

    /// The same set with its closed-form oracles removed, forcing numerics.
    pub fn numeric_only(&self) -> HSet {
        let mut s = self.clone();
        s.support_oracle = None;
        s.gauge_oracle = None;
        s.argmax_oracle = None;
        s
    }

    /// `γ A` for `γ > 0`, keeping oracles consistent.
    pub fn dilate(&self, gamma: f64) -> Result<HSet> {
        if !(gamma > 0.0) {
            return Err(Error::Set("dilation factor must be positive".into()));
        }
        let inner = self.member.clone();
        let mut s = self.clone();
        s.label = format!("{}*{}", self.label, gamma);
        s.member = Arc::new(move |x: &[f64]| {
            let y: Vec<f64> = x.iter().map(|v| v / gamma).collect();
            inner(&y)
        });
        s.witness = self.witness.iter().map(|v| v * gamma).collect();
        s.bound_hint = self.bound_hint * gamma;
        s.support_oracle = self.support_oracle.clone().map(|f| -> ScalarFn { Arc::new(move |y: &[f64]| gamma * f(y)) });
        s.gauge_oracle = self.gauge_oracle.clone().map(|f| -> ScalarFn { Arc::new(move |y: &[f64]| f(y) / gamma) });
        s.argmax_oracle = self.argmax_oracle.clone().map(|f| -> PointsFn {
            Arc::new(move |y: &[f64]| f(y).into_iter().map(|u| u.iter().map(|v| v * gamma).collect()).collect())
        });
        s.hull = None;
        s.probes = self.probes.iter().map(|(a, b)| (a.iter().map(|v| v * gamma).collect(), b.iter().map(|v| v * gamma).collect())).collect();
        Ok(s)
    }
}

/// `A = a + K` for `a in K \ {0}`, with closed-form support and gauge.
pub fn shifted_cone(a: &Vector, cone: &Cone) -> Result<HSet> {
    a.check_dim(cone.dim())?;
    if !cone.contains_raw(a.as_slice()) || a.norm() == 0.0 {
        return Err(Error::Set("shift must lie in K \\ {0}".into()));
    }
    let av = a.as_slice().to_vec();
    let k = cone.clone();
    let member: MemberFn = {
        let (av, k) = (av.clone(), k.clone());
        Arc::new(move |x: &[f64]| k.contains_raw(&sub(x, &av)))
    };
    let support: ScalarFn = {
        let (av, k) = (av.clone(), k.clone());
        Arc::new(move |y: &[f64]| {
            let neg: Vec<f64> = y.iter().map(|v| -v).collect();
            if k.dual_margin(&neg) >= 0.0 {
                crate::vector::dot(&av, y)
            } else {
                f64::INFINITY
            }
        })
    };
    let argmax: PointsFn = {
        let av = av.clone();
        Arc::new(move |_y: &[f64]| vec![av.clone()])
    };
    let gauge = shifted_gauge(&av, cone);
    let label = format!("shifted({})", av.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","));
    Ok(HSet::new(label, cone.clone(), av, member)?
        .with_support(support)
        .with_gauge(gauge)
        .with_argmax(argmax)
        .convex(true)
        .with_description("translate of the ordering cone"))
}

/// `max{t >= 0 : x - t a in K}` in closed form.
fn shifted_gauge(a: &[f64], cone: &Cone) -> ScalarFn {
    let a = a.to_vec();
    let k = cone.clone();
    if cone.is_polyhedral() {
        Arc::new(move |x: &[f64]| {
            k.normals()
                .iter()
                .filter_map(|n| {
                    let an = crate::vector::dot(&a, n);
                    (an > 0.0).then(|| crate::vector::dot(x, n) / an)
                })
                .fold(f64::INFINITY, f64::min)
                .max(0.0)
        })
    } else {
        Arc::new(move |x: &[f64]| {
            let p = x.len();
            let q = |v: &[f64]| v[p - 1] * v[p - 1] - crate::vector::dot(&v[..p - 1], &v[..p - 1]);
            let qa = q(&a);
            let qx = q(x).max(0.0);
            let b = a[p - 1] * x[p - 1] - crate::vector::dot(&a[..p - 1], &x[..p - 1]);
            let scale = norm(&a) * norm(x);
            if b <= 1e-15 * scale {
                // x on the ray through a (both on bd K), or x = 0
                if scale == 0.0 {
                    0.0
                } else {
                    x[p - 1] / a[p - 1]
                }
            } else {
                let disc = (b * b - qa * qx).max(0.0);
                qx / (b + disc.sqrt())
            }
        })
    }
}

/// Axiom flags for production functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "F.1")]
    F1,
    #[serde(rename = "F.2")]
    F2,
    #[serde(rename = "F.2b")]
    F2b,
    #[serde(rename = "F.2c")]
    F2c,
    #[serde(rename = "F.2d")]
    F2d,
    #[serde(rename = "F.3")]
    F3,
    #[serde(rename = "F.3b")]
    F3b,
    #[serde(rename = "F.3c")]
    F3c,
    #[serde(rename = "F.3d")]
    F3d,
    #[serde(rename = "F.4")]
    F4,
    #[serde(rename = "F.4b")]
    F4b,
    #[serde(rename = "F.4c")]
    F4c,
    #[serde(rename = "F.4d")]
    F4d,
    #[serde(rename = "F.5")]
    F5,
}

impl Axiom {
    pub const ALL: [Axiom; 14] = [
        Axiom::F1,
        Axiom::F2,
        Axiom::F2b,
        Axiom::F2c,
        Axiom::F2d,
        Axiom::F3,
        Axiom::F3b,
        Axiom::F3c,
        Axiom::F3d,
        Axiom::F4,
        Axiom::F4b,
        Axiom::F4c,
        Axiom::F4d,
        Axiom::F5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::F1 => "F.1",
            Axiom::F2 => "F.2",
            Axiom::F2b => "F.2b",
            Axiom::F2c => "F.2c",
            Axiom::F2d => "F.2d",
            Axiom::F3 => "F.3",
            Axiom::F3b => "F.3b",
            Axiom::F3c => "F.3c",
            Axiom::F3d => "F.3d",
            Axiom::F4 => "F.4",
            Axiom::F4b => "F.4b",
            Axiom::F4c => "F.4c",
            Axiom::F4d => "F.4d",
            Axiom::F5 => "F.5",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s))
    }
}

/// Points, pairs and triples known to be critical for a production function.
#[derive(Debug, Clone, Default)]
pub struct ProductionTargets {
    /// Centres for continuity probes.
    pub points: Vec<Vec<f64>>,
    /// `(x, x')` with `x >= x'` for monotonicity axioms.
    pub pairs: Vec<ProbePair>,
    /// `(x, x', λ)` for quasiconcavity axioms.
    pub triples: Vec<(Vec<f64>, Vec<f64>, f64)>,
}

/// A production function `F : R^p_+ -> R_+`.
#[derive(Clone)]
pub struct ProductionFn {
    pub label: String,
    pub p: usize,
    eval: ScalarFn,
    witness: WitnessFn,
    level: Option<LevelFn>,
    pub claimed_axioms: Vec<Axiom>,
    pub targets: ProductionTargets,
    /// Typical scale of interesting inputs, used for sampling boxes.
    pub scale: f64,
    pub description: String,
}

impl fmt::Debug for ProductionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProductionFn").field("label", &self.label).field("p", &self.p).field("claimed_axioms", &self.claimed_axioms).finish()
    }
}

impl ProductionFn {
    pub fn new(label: impl Into<String>, p: usize, eval: ScalarFn, witness: WitnessFn) -> Self {
        Self {
            label: label.into(),
            p,
            eval,
            witness,
            level: None,
            claimed_axioms: Vec::new(),
            targets: ProductionTargets::default(),
            scale: 4.0,
            description: String::new(),
        }
    }

    pub fn with_axioms(mut self, a: &[Axiom]) -> Self {
        self.claimed_axioms = a.to_vec();
        self
    }

    pub fn with_targets(mut self, t: ProductionTargets) -> Self {
        self.targets = t;
        self
    }

    pub fn with_scale(mut self, s: f64) -> Self {
        self.scale = s;
        self
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    /// Known level sets (with oracles or flags) used by [`level_set`] when
    /// no witness is forced.
    pub fn with_level_sets(mut self, f: LevelFn) -> Self {
        self.level = Some(f);
        self
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn eval_vec(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.p)?;
        if x.as_slice().iter().any(|&v| v < 0.0) {
            return Err(Error::OutsideCone);
        }
        Ok(self.eval(x.as_slice()))
    }

    pub fn witness_for(&self, gamma: f64) -> Option<Vec<f64>> {
        let mut w = (self.witness)(gamma)?;
        // closed-form witnesses can land a rounding error short of the level
        for _ in 0..8 {
            if (self.eval)(&w) >= gamma {
                break;
            }
            w.iter_mut().for_each(|c| *c *= 1.0 + 4.0 * f64::EPSILON);
        }
        Some(w)
    }

    /// The production function `x -> F_A(x)` of an (H)-set on the orthant.
    pub fn from_gauge(set: &HSet) -> Result<Self> {
        if set.cone.variant() != crate::cone::Variant::Orthant {
            return Err(Error::Set("gauge production functions need the orthant".into()));
        }
        let s = set.clone();
        let w = set.witness.clone();
        let eval: ScalarFn = Arc::new(move |x: &[f64]| crate::gauge::gauge_raw(&s, x).value);
        let witness: WitnessFn = Arc::new(move |g: f64| Some(w.iter().map(|v| v * g.max(0.0)).collect()));
        // {F_A >= γ} = γA, so level sets keep the flags and oracles of A
        let src = set.clone();
        let level: LevelFn = Arc::new(move |g: f64| src.dilate(g));
        Ok(ProductionFn::new(format!("gauge({})", set.label), set.dim(), eval, witness).with_scale(set.bound_hint / 2.0).with_level_sets(level))
    }
}

/// `L(γ) = {x in R^p_+ : F(x) >= γ}` as an (H)-set over the orthant.
///
/// Membership is the exact inequality; `witness` defaults to the function's
/// own witness for `γ`. Without a forced witness, level sets registered with
/// [`ProductionFn::with_level_sets`] are returned instead.
pub fn level_set(f: &ProductionFn, gamma: f64, witness: Option<Vec<f64>>) -> Result<HSet> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Infeasible(format!("level {gamma} must be positive")));
    }
    if let (None, Some(level)) = (&witness, &f.level) {
        return level(gamma);
    }
    let w = witness
        .or_else(|| f.witness_for(gamma))
        .ok_or_else(|| Error::Infeasible(format!("{}: no witness for level {gamma}", f.label)))?;
    let eval = f.eval.clone();
    let member: MemberFn = Arc::new(move |x: &[f64]| x.iter().all(|&v| v >= 0.0) && eval(x) >= gamma);
    if !member(&w) {
        return Err(Error::Infeasible(format!("{}: witness fails F(x) >= {gamma}", f.label)));
    }
    let cone = Cone::orthant(f.p)?;
    Ok(HSet::new(format!("L({},{})", f.label, gamma), cone, w, member)?.with_description(format!("level set of {} at {gamma}", f.label)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn shifted_cone_membership() {
        let a = shifted_cone(&v(&[1.0, 2.0]), &Cone::orthant(2).unwrap()).unwrap();
        assert!(a.member(&v(&[2.0, 2.0])).unwrap());
        assert!(!a.member(&v(&[0.0, 3.0])).unwrap());
        let l = shifted_cone(&v(&[1.0, 0.0, 1.0]), &Cone::lorentz(3).unwrap()).unwrap();
        assert!(l.member(&v(&[1.0, 0.0, 1.0])).unwrap());
    }

    #[test]
    fn shifted_cone_rejects_bad_shift() {
        let k = Cone::orthant(2).unwrap();
        assert!(shifted_cone(&v(&[0.0, 0.0]), &k).is_err());
        assert!(shifted_cone(&v(&[-1.0, 1.0]), &k).is_err());
    }

    #[test]
    fn shifted_gauge_closed_forms() {
        let l = shifted_cone(&v(&[1.0, 0.0, 1.0]), &Cone::lorentz(3).unwrap()).unwrap();
        let g = l.gauge_oracle().unwrap();
        assert!((g(&[0.0, 0.0, 1.0]) - 0.5).abs() < 1e-15);
        assert!((g(&[2.0, 0.0, 2.0]) - 2.0).abs() < 1e-15);
        assert_eq!(g(&[0.0, 1.0, 1.0]), 0.0);
        let d = shifted_cone(&v(&[1.0, 2.0, 4.0]), &Cone::orthant(3).unwrap()).unwrap();
        assert_eq!(d.gauge_oracle().unwrap()(&[2.0, 2.0, 4.0]), 1.0);
    }

    #[test]
    fn level_set_of_product() {
        let f = ProductionFn::new(
            "xy",
            2,
            Arc::new(|x: &[f64]| x[0] * x[1]),
            Arc::new(|g: f64| Some(vec![g.sqrt(), g.sqrt()])),
        );
        let l = level_set(&f, 1.0, None).unwrap();
        assert!(l.member(&v(&[1.0, 1.0])).unwrap());
        assert!(!l.member(&v(&[0.5, 1.0])).unwrap());
        assert!(level_set(&f, 0.0, None).is_err());
        assert!(level_set(&f, 1.0, Some(vec![0.1, 0.1])).is_err());
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(Axiom::parse(a.name()), Some(a));
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.name()));
        }
    }
}
