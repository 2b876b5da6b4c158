//! Seeded samplers for cones and sets.
//!
//! Every random draw in the crate goes through [`rng`], so a `(seed, stream)`
//! pair reproduces a run exactly.

use crate::cone::{Chart, Cone};
use crate::gauge::gauge_raw;
use crate::sets::HSet;
use crate::vector::{norm, normalize};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// Generator for an independent stream derived from `seed`.
pub fn rng(seed: u64, stream: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random chart parameters; with probability `boundary_prob` the point is
/// placed on the relative boundary of the section (that is, on `bd K`).
pub fn chart_params(chart: &Chart, rng: &mut SampleRng, boundary_prob: f64) -> Vec<f64> {
    let ranges = chart.ranges();
    let on_bd = rng.gen::<f64>() < boundary_prob;
    if ranges.len() == 1 {
        let t: f64 = if on_bd { if rng.gen::<bool>() { 1.0 } else { -1.0 } } else { rng.gen_range(-1.0..1.0) };
        return vec![t];
    }
    let m = ranges.len();
    let r = if on_bd { 1.0 } else { rng.gen::<f64>().powf(1.0 / m as f64) };
    std::iter::once(r).chain(ranges[1..].iter().map(|pr| rng.gen_range(pr.lo..pr.hi))).collect()
}

/// Unit direction of `K`.
pub fn cone_direction(chart: &Chart, rng: &mut SampleRng, boundary_prob: f64) -> Vec<f64> {
    normalize(&chart.point(&chart_params(chart, rng, boundary_prob)))
}

/// Point of `K` with norm log-uniform in `[lo, hi]`.
pub fn cone_point(chart: &Chart, rng: &mut SampleRng, lo: f64, hi: f64, boundary_prob: f64) -> Vec<f64> {
    let d = cone_direction(chart, rng, boundary_prob);
    let len = log_uniform(rng, lo, hi);
    d.iter().map(|v| v * len).collect()
}

pub fn log_uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// `d / F_A(d)`: the point where the ray through `d` enters `A`. It is a
/// member (the gauge is attained) and lies on `bd A`.
///
/// The gauge bracket is relative to `1 + F_A(d)`, which is coarse when the
/// gauge is small, so the ray parameter is bisected again to full precision.
pub fn boundary_point(set: &HSet, d: &[f64]) -> Option<Vec<f64>> {
    let g = gauge_raw(set, d);
    if !(g.value > 0.0 && g.value.is_finite()) {
        return None;
    }
    let at = |s: f64| -> Vec<f64> { d.iter().map(|v| v * s).collect() };
    let mut s_in = 1.0 / g.value;
    let mut nudge = 1e-15;
    while !set.contains(&at(s_in)) {
        s_in *= 1.0 + nudge;
        nudge *= 4.0;
        if nudge > 1e-3 {
            return None;
        }
    }
    let mut gap = (g.bracket_width / g.value).clamp(1e-14, 1e-2);
    let mut s_out = s_in / (1.0 + gap);
    while set.contains(&at(s_out)) {
        gap *= 4.0;
        if gap > 1.0 {
            return Some(at(s_in));
        }
        s_out = s_in / (1.0 + gap);
    }
    for _ in 0..64 {
        if s_in - s_out <= 4.0 * f64::EPSILON * s_in {
            break;
        }
        let mid = 0.5 * (s_in + s_out);
        if set.contains(&at(mid)) {
            s_in = mid;
        } else {
            s_out = mid;
        }
    }
    Some(at(s_in))
}

/// Boundary point of an (H)-set along a random ray of `K`.
pub fn boundary_sample(set: &HSet, chart: &Chart, rng: &mut SampleRng, cone_bd_prob: f64) -> Option<Vec<f64>> {
    for _ in 0..32 {
        let d = cone_direction(chart, rng, cone_bd_prob);
        if let Some(u) = boundary_point(set, &d) {
            if norm(&u) <= 4.0 * set.bound_hint {
                return Some(u);
            }
        }
    }
    None
}

/// Member of an (H)-set: a boundary point, optionally pushed inside by `k in K`.
pub fn member_sample(set: &HSet, chart: &Chart, rng: &mut SampleRng) -> Option<Vec<f64>> {
    let b = boundary_sample(set, chart, rng, 0.25)?;
    if rng.gen::<f64>() < 0.6 {
        return Some(b);
    }
    let k = cone_point(chart, rng, 1e-2 * set.bound_hint, 0.5 * set.bound_hint, 0.3);
    let x: Vec<f64> = b.iter().zip(&k).map(|(a, c)| a + c).collect();
    set.contains(&x).then_some(x)
}

/// Uniform point of `[lo, hi]^p`.
pub fn box_point(rng: &mut SampleRng, p: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..p).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Uniform point of the unit ball.
pub fn ball_point(rng: &mut SampleRng, p: usize) -> Vec<f64> {
    loop {
        let v = box_point(rng, p, -1.0, 1.0);
        if norm(&v) <= 1.0 {
            return v;
        }
    }
}

/// Projects `y` (in K, near `x0`) radially onto `bd K` as seen from the axis.
pub fn to_cone_boundary(cone: &Cone, y: &[f64], x0_norm: f64) -> Vec<f64> {
    let c: Vec<f64> = cone.interior_point().iter().map(|v| v * x0_norm.max(1e-3)).collect();
    let w: Vec<f64> = y.iter().zip(&c).map(|(a, b)| a - b).collect();
    let t = cone.ray_exit(&c, &w);
    if !t.is_finite() {
        return y.to_vec();
    }
    let mut z: Vec<f64> = c.iter().zip(&w).map(|(a, b)| a + t * b).collect();
    if !cone.contains_raw(&z) {
        // pull back by a hair so the point stays in K
        z = c.iter().zip(&w).map(|(a, b)| a + t * (1.0 - 1e-14) * b).collect();
    }
    z
}

/// `n` deterministic unit directions of `K` covering the section up to its
/// relative boundary, followed by the generators of polyhedral cones.
pub fn cone_directions(cone: &Cone, n: usize) -> Vec<Vec<f64>> {
    let chart = cone.chart();
    let m = chart.n_params();
    let mut out: Vec<Vec<f64>> = if m == 1 {
        (0..n).map(|i| chart.point(&[if n == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (n - 1) as f64 }])).collect()
    } else {
        // sunflower in the section, the outer ring on bd K
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..n)
            .map(|i| {
                let r = if n <= 1 { 0.0 } else { (i as f64 / (n - 1) as f64).sqrt() };
                let mut q = vec![r, (i as f64 * golden).rem_euclid(2.0 * std::f64::consts::PI)];
                for k in 2..m {
                    q.push(std::f64::consts::PI * (0.5 + 0.45 * ((i * (k + 1)) as f64 * golden).sin()));
                }
                chart.point(&q)
            })
            .collect()
    };
    out.extend(cone.generators().iter().cloned());
    out.into_iter().map(|d| normalize(&d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..5).map(|_| rng(1, 0).gen()).collect();
        let b: Vec<f64> = (0..5).map(|_| rng(1, 0).gen()).collect();
        assert_eq!(a, b);
        let mut r0 = rng(1, 0);
        let mut r1 = rng(1, 1);
        assert_ne!(r0.gen::<u64>(), r1.gen::<u64>());
    }

    #[test]
    fn directions_reach_the_boundary() {
        let k = Cone::orthant(2).unwrap();
        let d = cone_directions(&k, 64);
        assert!(d.len() >= 64);
        assert!(d.iter().all(|v| k.margin(v) >= -1e-12 && (norm(v) - 1.0).abs() < 1e-12));
        assert!(d.iter().any(|v| v[1].abs() < 1e-12));
        let l = Cone::lorentz(3).unwrap();
        assert!(cone_directions(&l, 64).iter().all(|v| l.margin(v) >= -1e-12));
    }

    #[test]
    fn cone_points_lie_in_the_cone() {
        for k in [Cone::orthant(3).unwrap(), Cone::lorentz(3).unwrap(), Cone::orthant(2).unwrap()] {
            let ch = k.chart();
            let mut r = rng(5, 0);
            for _ in 0..500 {
                let x = cone_point(&ch, &mut r, 0.1, 10.0, 0.5);
                assert!(k.margin(&x) >= -1e-12, "{x:?}");
            }
        }
    }
}
