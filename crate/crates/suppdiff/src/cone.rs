//! Pointed closed convex cones with nonempty interior.
//!
//! Three structural forms are supported: the nonnegative orthant, polyhedral
//! cones given by inward halfspace normals `<x, n_i> >= 0`, and the Lorentz
//! (second-order) cone `x_p >= |(x_1, ..., x_{p-1})|`. Every membership test is
//! an exact inequality check; polyhedral cones enumerate their extreme rays
//! once at construction so dual queries are exact too.

use crate::error::{Error, Result};
use crate::vector::{dot, norm, normalize, Vector};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Orthant,
    Polyhedral,
    Lorentz,
}

/// Wire form of a cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub variant: Variant,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeSpec", into = "ConeSpec")]
pub struct Cone {
    variant: Variant,
    p: usize,
    /// Inward normals: `x in K` iff `<x, n> >= 0` for all of them (orthant and polyhedral).
    normals: Vec<Vec<f64>>,
    /// Extreme rays (orthant and polyhedral); they also describe `K+` by halfspaces.
    generators: Vec<Vec<f64>>,
    interior_point: Vec<f64>,
}

impl TryFrom<ConeSpec> for Cone {
    type Error = Error;
    fn try_from(s: ConeSpec) -> Result<Self> {
        match s.variant {
            Variant::Orthant => Cone::orthant(s.dim),
            Variant::Lorentz => Cone::lorentz(s.dim),
            Variant::Polyhedral => {
                let normals = s.normals.ok_or_else(|| Error::Cone("polyhedral cone needs `normals`".into()))?;
                let c = Cone::polyhedral(normals)?;
                if c.p != s.dim {
                    return Err(Error::Dimension { expected: s.dim, got: c.p });
                }
                Ok(c)
            }
        }
    }
}

impl From<Cone> for ConeSpec {
    fn from(c: Cone) -> Self {
        ConeSpec {
            variant: c.variant,
            dim: c.p,
            normals: (c.variant == Variant::Polyhedral).then_some(c.normals),
        }
    }
}

impl Cone {
    pub fn orthant(p: usize) -> Result<Self> {
        check_p(p)?;
        let eye: Vec<Vec<f64>> = (0..p).map(|i| Vector::basis(p, i).into_vec()).collect();
        Ok(Self {
            variant: Variant::Orthant,
            p,
            normals: eye.clone(),
            generators: eye,
            interior_point: vec![1.0; p],
        })
    }

    pub fn lorentz(p: usize) -> Result<Self> {
        check_p(p)?;
        Ok(Self {
            variant: Variant::Lorentz,
            p,
            normals: Vec::new(),
            generators: Vec::new(),
            interior_point: Vector::basis(p, p - 1).into_vec(),
        })
    }

    /// Polyhedral cone `{x : <x, n_i> >= 0}`.
    ///
    /// The normals must span the space (pointedness) and the cone must have
    /// interior; both are verified while enumerating extreme rays.
    pub fn polyhedral(normals: Vec<Vec<f64>>) -> Result<Self> {
        let p = normals.first().map(|n| n.len()).ok_or_else(|| Error::Cone("no normals".into()))?;
        check_p(p)?;
        if normals.iter().any(|n| n.len() != p) {
            return Err(Error::Cone("normals of unequal length".into()));
        }
        if normals.iter().flatten().any(|v| !v.is_finite()) || normals.iter().any(|n| norm(n) == 0.0) {
            return Err(Error::Cone("zero or non-finite normal".into()));
        }
        let m = DMatrix::from_fn(normals.len(), p, |i, j| normals[i][j]);
        if m.rank(1e-10) < p {
            return Err(Error::Cone("normals do not span the space, so the cone is not pointed".into()));
        }
        let generators = extreme_rays(&normals, p);
        if generators.len() < p {
            return Err(Error::Cone("cone has empty interior".into()));
        }
        let mut interior = vec![0.0; p];
        for g in &generators {
            for (s, v) in interior.iter_mut().zip(g) {
                *s += v;
            }
        }
        if normals.iter().any(|n| dot(n, &interior) <= 1e-12 * norm(n) * norm(&interior)) {
            return Err(Error::Cone("cone has empty interior".into()));
        }
        Ok(Self {
            variant: Variant::Polyhedral,
            p,
            normals,
            generators,
            interior_point: normalize(&interior),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn is_polyhedral(&self) -> bool {
        self.variant != Variant::Lorentz
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    /// Extreme rays (empty for the Lorentz cone).
    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.interior_point
    }

    /// The dual cone `K+` as a cone in its own right.
    pub fn dual(&self) -> Cone {
        match self.variant {
            Variant::Polyhedral => Cone::polyhedral(self.generators.clone()).expect("dual of a valid cone"),
            _ => self.clone(),
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.p {
            Err(Error::Dimension { expected: self.p, got: x.len() })
        } else {
            Ok(())
        }
    }

    /// Signed slack of membership: nonnegative iff `x in K`, positive iff `x in int K`.
    pub fn margin(&self, x: &[f64]) -> f64 {
        match self.variant {
            Variant::Lorentz => lorentz_slack(x),
            _ => min_ratio(&self.normals, x),
        }
    }

    /// Signed slack of dual membership: nonnegative iff `y in K+`, positive iff `y in K#`.
    pub fn dual_margin(&self, y: &[f64]) -> f64 {
        match self.variant {
            Variant::Lorentz => lorentz_slack(y),
            _ => min_ratio(&self.generators, y),
        }
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        self.check(x.as_slice())?;
        Ok(self.contains_raw(x.as_slice()))
    }

    pub fn interior_contains(&self, x: &Vector) -> Result<bool> {
        self.check(x.as_slice())?;
        Ok(self.interior_contains_raw(x.as_slice()))
    }

    pub fn dual_contains(&self, y: &Vector) -> Result<bool> {
        self.check(y.as_slice())?;
        Ok(self.dual_margin(y.as_slice()) >= 0.0)
    }

    /// `y in K# = int K+`.
    pub fn strict_dual_contains(&self, y: &Vector) -> Result<bool> {
        self.check(y.as_slice())?;
        Ok(self.strict_dual_raw(y.as_slice()))
    }

    pub(crate) fn contains_raw(&self, x: &[f64]) -> bool {
        match self.variant {
            Variant::Orthant => x.iter().all(|&v| v >= 0.0),
            Variant::Polyhedral => self.normals.iter().all(|n| dot(n, x) >= 0.0),
            Variant::Lorentz => {
                let (head, last) = x.split_at(self.p - 1);
                last[0] >= 0.0 && last[0] * last[0] >= dot(head, head)
            }
        }
    }

    pub(crate) fn interior_contains_raw(&self, x: &[f64]) -> bool {
        match self.variant {
            Variant::Orthant => x.iter().all(|&v| v > 0.0),
            Variant::Polyhedral => self.normals.iter().all(|n| dot(n, x) > 0.0),
            Variant::Lorentz => {
                let (head, last) = x.split_at(self.p - 1);
                last[0] > 0.0 && last[0] * last[0] > dot(head, head)
            }
        }
    }

    pub(crate) fn strict_dual_raw(&self, y: &[f64]) -> bool {
        match self.variant {
            Variant::Orthant => y.iter().all(|&v| v > 0.0),
            Variant::Polyhedral => self.generators.iter().all(|g| dot(g, y) > 0.0),
            Variant::Lorentz => {
                let (head, last) = y.split_at(self.p - 1);
                last[0] > 0.0 && last[0] * last[0] > dot(head, head)
            }
        }
    }

    /// Largest `t >= 0` with `c + t w in K`, for `c` interior (infinite if never leaving).
    pub fn ray_exit(&self, c: &[f64], w: &[f64]) -> f64 {
        match self.variant {
            Variant::Lorentz => {
                let p = self.p;
                let a = w[p - 1] * w[p - 1] - dot(&w[..p - 1], &w[..p - 1]);
                let b = 2.0 * (c[p - 1] * w[p - 1] - dot(&c[..p - 1], &w[..p - 1]));
                let cc = c[p - 1] * c[p - 1] - dot(&c[..p - 1], &c[..p - 1]);
                if a < 0.0 {
                    let disc = (b * b - 4.0 * a * cc).max(0.0);
                    (-b - disc.sqrt()) / (2.0 * a)
                } else {
                    f64::INFINITY
                }
            }
            _ => self
                .normals
                .iter()
                .filter_map(|n| {
                    let s = dot(n, w);
                    (s < 0.0).then(|| -dot(n, c) / s)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// A unit vector of `K#` used to cut the cross-section of `K`.
    pub fn section_normal(&self) -> Vec<f64> {
        match self.variant {
            Variant::Lorentz => Vector::basis(self.p, self.p - 1).into_vec(),
            _ => {
                let mut s = vec![0.0; self.p];
                for n in &self.normals {
                    let nn = norm(n);
                    for (a, b) in s.iter_mut().zip(n) {
                        *a += b / nn;
                    }
                }
                normalize(&s)
            }
        }
    }

    /// Parametrisation of the directions of `K`, see [`Chart`].
    pub fn chart(&self) -> Chart {
        Chart::new(self)
    }
}

fn check_p(p: usize) -> Result<()> {
    if p < 2 {
        Err(Error::Cone(format!("dimension {p} < 2")))
    } else {
        Ok(())
    }
}

fn lorentz_slack(x: &[f64]) -> f64 {
    let p = x.len();
    (x[p - 1] - norm(&x[..p - 1])) / std::f64::consts::SQRT_2
}

fn min_ratio(rows: &[Vec<f64>], x: &[f64]) -> f64 {
    rows.iter().map(|r| dot(r, x) / norm(r)).fold(f64::INFINITY, f64::min)
}

/// Extreme rays of `{x : <x, n_i> >= 0}` by enumerating `(p-1)`-subsets of
/// normals whose common kernel is a line, keeping the sign that lies in the
/// cone. Adequate for the small dimensions this crate targets.
fn extreme_rays(normals: &[Vec<f64>], p: usize) -> Vec<Vec<f64>> {
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let m = normals.len();
    let mut idx: Vec<usize> = (0..p - 1).collect();
    if m < p - 1 {
        return rays;
    }
    loop {
        let rows: Vec<&Vec<f64>> = idx.iter().map(|&i| &normals[i]).collect();
        let r = cross(&rows, p);
        let scale: f64 = rows.iter().map(|n| norm(n)).product();
        if norm(&r) > 1e-10 * scale.max(1e-300) {
            let r = normalize(&r);
            for cand in [r.clone(), r.iter().map(|v| -v).collect::<Vec<_>>()] {
                if normals.iter().all(|n| dot(n, &cand) >= -1e-12 * norm(n)) {
                    let clean: Vec<f64> = cand.iter().map(|&v| if v.abs() < 1e-14 { 0.0 } else { v }).collect();
                    if !rays.iter().any(|q| crate::vector::dist(q, &clean) < 1e-9) {
                        rays.push(clean);
                    }
                }
            }
        }
        // next combination
        let k = p - 1;
        let mut i = k;
        loop {
            if i == 0 {
                rays.sort_by(|a, b| a.partial_cmp(b).unwrap());
                return rays;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Generalised cross product of `p-1` vectors in dimension `p`.
fn cross(rows: &[&Vec<f64>], p: usize) -> Vec<f64> {
    if p == 2 {
        return vec![-rows[0][1], rows[0][0]];
    }
    (0..p)
        .map(|col| {
            let minor = DMatrix::from_fn(p - 1, p - 1, |i, j| rows[i][if j < col { j } else { j + 1 }]);
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor.determinant()
        })
        .collect()
}

/// Star-shaped chart of the cross-section `{x in K : <x, c> = 1}`.
///
/// A parameter vector selects a unit direction `w` in the section's tangent
/// space and a radius `r in [0, 1]`; the point is `c0 + r * rho(w) * w`, where
/// `rho` is the exact distance to the relative boundary. `r = 1` lands on
/// `bd K`, so boundary sampling needs no rejection. In dimension 2 a single
/// signed parameter `t in [-1, 1]` is used instead.
#[derive(Debug, Clone)]
pub struct Chart {
    cone: Cone,
    center: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

/// Range of one chart parameter.
#[derive(Debug, Clone, Copy)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Chart {
    fn new(cone: &Cone) -> Self {
        let p = cone.dim();
        let c = cone.section_normal();
        let ip = cone.interior_point();
        let center: Vec<f64> = ip.iter().map(|v| v / dot(ip, &c)).collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for i in 0..p {
            let mut v = Vector::basis(p, i).into_vec();
            for b in std::iter::once(&c).chain(basis.iter()) {
                let s = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= s * y;
                }
            }
            if norm(&v) > 1e-8 && basis.len() < p - 1 {
                basis.push(normalize(&v));
            }
        }
        Self { cone: cone.clone(), center, basis }
    }

    pub fn n_params(&self) -> usize {
        self.basis.len()
    }

    pub fn ranges(&self) -> Vec<ParamRange> {
        let m = self.basis.len();
        if m == 1 {
            return vec![ParamRange { lo: -1.0, hi: 1.0, periodic: false }];
        }
        let mut r = vec![ParamRange { lo: 0.0, hi: 1.0, periodic: false }, ParamRange { lo: 0.0, hi: 2.0 * PI, periodic: true }];
        for _ in 2..m {
            r.push(ParamRange { lo: 0.0, hi: PI, periodic: false });
        }
        r
    }

    /// Unit tangent direction from the angular parameters.
    fn tangent(&self, angles: &[f64]) -> Vec<f64> {
        let m = self.basis.len();
        // hyperspherical coordinates: first angle is the azimuth
        let mut coeff = vec![0.0; m];
        let mut s = 1.0;
        for k in (1..angles.len()).rev() {
            coeff[k + 1] = s * angles[k].cos();
            s *= angles[k].sin();
        }
        coeff[0] = s * angles[0].cos();
        coeff[1] = s * angles[0].sin();
        let mut w = vec![0.0; self.cone.dim()];
        for (c, b) in coeff.iter().zip(&self.basis) {
            for (x, y) in w.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        w
    }

    /// Point of the cross-section for the given parameters (clamped to range).
    pub fn point(&self, params: &[f64]) -> Vec<f64> {
        let (r, w) = if self.basis.len() == 1 {
            let t = params[0].clamp(-1.0, 1.0);
            let w: Vec<f64> = self.basis[0].iter().map(|v| v * t.signum()).collect();
            (t.abs(), w)
        } else {
            (params[0].clamp(0.0, 1.0), self.tangent(&params[1..]))
        };
        if r == 0.0 {
            return self.center.clone();
        }
        let rho = self.cone.ray_exit(&self.center, &w);
        let mut x: Vec<f64> = self.center.iter().zip(&w).map(|(c, d)| c + r * rho * d).collect();
        // snap rounding noise so r = 1 stays in K
        if r >= 1.0 && !self.cone.contains_raw(&x) {
            let mut lo = 0.0;
            let mut hi = rho;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let y: Vec<f64> = self.center.iter().zip(&w).map(|(c, d)| c + mid * d).collect();
                if self.cone.contains_raw(&y) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            x = self.center.iter().zip(&w).map(|(c, d)| c + lo * d).collect();
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn membership_examples() {
        let o2 = Cone::orthant(2).unwrap();
        let l3 = Cone::lorentz(3).unwrap();
        assert!(o2.contains(&v(&[1.0, 0.0])).unwrap());
        assert!(l3.contains(&v(&[1.0, 0.0, 1.0])).unwrap());
        assert!(!l3.contains(&v(&[1.0, 1.0, 1.0])).unwrap());
        assert!(o2.interior_contains(&v(&[1.0, 1.0])).unwrap());
        assert!(!o2.interior_contains(&v(&[1.0, 0.0])).unwrap());
        assert!(l3.interior_contains(&v(&[0.0, 0.0, 1.0])).unwrap());
    }

    #[test]
    fn dual_examples() {
        let o2 = Cone::orthant(2).unwrap();
        let l3 = Cone::lorentz(3).unwrap();
        assert!(o2.dual_contains(&v(&[1.0, 2.0])).unwrap());
        assert!(l3.dual_contains(&v(&[0.0, 0.0, 1.0])).unwrap());
        assert!(!o2.dual_contains(&v(&[-1.0, 2.0])).unwrap());
        assert!(o2.strict_dual_contains(&v(&[1.0, 1.0])).unwrap());
        assert!(!o2.strict_dual_contains(&v(&[1.0, 0.0])).unwrap());
        assert!(l3.strict_dual_contains(&v(&[0.0, 0.0, 1.0])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let o2 = Cone::orthant(2).unwrap();
        assert_eq!(o2.contains(&v(&[1.0, 0.0, 0.0])), Err(Error::Dimension { expected: 2, got: 3 }));
    }

    #[test]
    fn polyhedral_generators() {
        // x1 >= 0, x2 >= 0, x1 + x2 - x3 >= 0 ... plus x3 >= 0: a cone in R^3
        let k = Cone::polyhedral(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, -1.0]]).unwrap();
        assert_eq!(k.generators().len(), 4);
        for g in k.generators() {
            assert!(k.contains_raw(g));
            assert!(!k.interior_contains_raw(g));
        }
        assert!(k.interior_contains_raw(k.interior_point()));
    }

    #[test]
    fn rejects_degenerate_polyhedra() {
        assert!(Cone::polyhedral(vec![vec![1.0, 0.0]]).is_err());
        // a halfplane pair with a common line
        assert!(Cone::polyhedral(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k = Cone::polyhedral(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"variant":"polyhedral","dim":2,"normals":[[1.0,0.0],[1.0,1.0]]}"#);
        let back: Cone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        let l: Cone = serde_json::from_str(r#"{"variant":"lorentz","dim":3}"#).unwrap();
        assert_eq!(l.variant(), Variant::Lorentz);
    }

    #[test]
    fn chart_reaches_the_boundary() {
        for k in [Cone::orthant(2).unwrap(), Cone::orthant(3).unwrap(), Cone::lorentz(3).unwrap(), Cone::lorentz(2).unwrap()] {
            let ch = k.chart();
            let m = ch.n_params();
            for i in 0..50 {
                let a = i as f64 * 0.3;
                let params: Vec<f64> = if m == 1 { vec![(a.sin()).signum()] } else { std::iter::once(1.0).chain((1..m).map(|_| a)).collect() };
                let x = ch.point(&params);
                assert!(k.contains_raw(&x), "{x:?}");
                assert!(k.margin(&x).abs() < 1e-9, "{x:?} margin {}", k.margin(&x));
                let mut inner = params.clone();
                inner[0] *= 0.5;
                assert!(k.interior_contains_raw(&ch.point(&inner)));
            }
        }
    }
}
