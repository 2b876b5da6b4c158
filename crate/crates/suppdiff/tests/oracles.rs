//! Numeric results checked against brute-force grid searches that share no
//! code with the library solvers.

use suppdiff::cost::{cost_value, shephard_check};
use suppdiff::fixtures::{production_fixture, set_fixture};
use suppdiff::gauge::gauge;
use suppdiff::support::support_value;
use suppdiff::vector::Vector;

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

/// Minimises `f` over a box by repeatedly zooming a uniform grid onto the best cell.
fn grid_min(f: impl Fn(f64, f64) -> f64, mut lo: [f64; 2], mut hi: [f64; 2]) -> (f64, [f64; 2]) {
    const N: usize = 200;
    let mut best = (f64::INFINITY, [0.0; 2]);
    for _ in 0..8 {
        let step = [(hi[0] - lo[0]) / N as f64, (hi[1] - lo[1]) / N as f64];
        for i in 0..=N {
            for j in 0..=N {
                let p = [lo[0] + i as f64 * step[0], lo[1] + j as f64 * step[1]];
                let val = f(p[0], p[1]);
                if val < best.0 {
                    best = (val, p);
                }
            }
        }
        for k in 0..2 {
            lo[k] = (best.1[k] - 3.0 * step[k]).max(lo[k]);
            hi[k] = (best.1[k] + 3.0 * step[k]).min(hi[k]);
        }
    }
    best
}

/// Largest t in [lo, hi] with `ok(t)`, for predicates true on an interval (0, t*].
fn scan_down(ok: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64) -> f64 {
    const N: usize = 1000;
    for _ in 0..4 {
        let step = (hi - lo) / N as f64;
        let k = (0..=N).rev().find(|&k| ok(lo + k as f64 * step)).unwrap_or(0);
        lo += k as f64 * step;
        hi = (lo + step).min(hi);
    }
    lo
}

/// Minimises `p.x` over `{F >= gamma}` in the plane for `F` nondecreasing in
/// its second argument: the cheapest feasible `b` is found for each `a` by a
/// reverse scan, then `a` is scanned on a zooming grid.
fn frontier_min(f: impl Fn(f64, f64) -> f64, p: [f64; 2], gamma: f64, amax: f64, bmax: f64) -> (f64, [f64; 2]) {
    let b_of = |a: f64| bmax - scan_down(|u| f(a, bmax - u) >= gamma, 0.0, bmax);
    let (mut lo, mut hi) = (1e-9, amax);
    let mut best = (f64::INFINITY, [0.0; 2]);
    for _ in 0..5 {
        let step = (hi - lo) / 400.0;
        for k in 0..=400 {
            let a = lo + k as f64 * step;
            if f(a, bmax) < gamma {
                continue;
            }
            let b = b_of(a);
            let c = p[0] * a + p[1] * b;
            if c < best.0 {
                best = (c, [a, b]);
            }
        }
        lo = (best.1[0] - 2.0 * step).max(1e-9);
        hi = (best.1[0] + 2.0 * step).min(amax);
    }
    best
}

fn d4_floor(x: f64, y: f64) -> f64 {
    let s = x + y - 1.0;
    if s >= 0.0 {
        0.0
    } else {
        0.5 * s * s / (2.0 - (x - y) * (x - y))
    }
}

#[test]
fn d4_support_matches_grid_minimum() {
    let s = set_fixture("d4").unwrap();
    for p in [[1.0, 1.0, 1.0], [1.0, 2.0, 0.5], [3.0, 1.0, 2.0], [0.5, 0.7, 4.0]] {
        // p.x is minimised on the lower surface z = floor(x, y)
        let (brute, _) = grid_min(|x, y| p[0] * x + p[1] * y + p[2] * d4_floor(x, y), [0.0, 0.0], [1.5, 1.5]);
        let got = -support_value(&s, &v(&[-p[0], -p[1], -p[2]])).unwrap().value;
        assert!((got - brute).abs() <= 1e-6 * (1.0 + brute), "{p:?}: {got} vs {brute}");
    }
}

#[test]
fn adsz_cost_matches_grid_minimum() {
    let f = production_fixture("ex-adsz").unwrap();
    for (p, gamma) in [([1.0, 1.0], 2.5), ([1.0, 2.0], 2.5), ([3.0, 1.0], 4.0), ([1.0, 1.0], 1.5)] {
        let (brute, _) = frontier_min(|a, b| f.eval(&[a, b]), p, gamma, 8.0, 8.0);
        let got = cost_value(&f, &v(&p), gamma).unwrap();
        assert!(got <= brute + 1e-6 && brute - got <= 1e-3 * (1.0 + got), "{p:?} at {gamma}: {got} vs {brute}");
    }
    // the exact value at unit prices
    assert!((cost_value(&f, &v(&[1.0, 1.0]), 2.5).unwrap() - 2.5).abs() < 1e-9);
}

#[test]
fn cobb_douglas_demand_matches_grid_argmin() {
    let f = production_fixture("cobb-douglas").unwrap();
    for (p, gamma) in [([4.0, 1.0], 1.0), ([1.0, 3.0], 2.0), ([0.5, 0.8], 0.7)] {
        let (_, x) = frontier_min(|a, b| a * b, p, gamma, 8.0, 8.0);
        let r = shephard_check(&f, &v(&p), gamma, None).unwrap();
        assert!(r.lemma_holds(), "{p:?}");
        for k in 0..2 {
            assert!((r.gradient_fd[k] - x[k]).abs() < 1e-4 * (1.0 + x[k]), "{p:?}: {:?} vs {x:?}", r.gradient_fd);
        }
    }
}

#[test]
fn d4_gauge_matches_ray_scan() {
    let s = set_fixture("d4").unwrap();
    for x in [[1.0, 0.0, 0.0], [0.3, 0.2, 0.05], [1.0, 1.0, 1.0], [0.2, 0.1, 0.0], [2.0, 0.5, 0.01]] {
        // largest t with x/t in the set, scanned from above
        let member = |t: f64| {
            let (a, b, c) = (x[0] / t, x[1] / t, x[2] / t);
            a + b >= 1.0 || c >= d4_floor(a, b)
        };
        let t = scan_down(member, 1e-6, 10.0);
        let g = gauge(&s, &v(&x)).unwrap().value;
        assert!((g - t).abs() <= 1e-6 * (1.0 + t), "{x:?}: {g} vs {t}");
    }
}

#[test]
fn leontief_cost_matches_grid_minimum() {
    let f = production_fixture("leontief").unwrap();
    for (p, gamma) in [([3.0, 1.0], 2.0), ([1.0, 1.0], 0.5)] {
        let obj = |a: f64, b: f64| if a.min(b / 2.0) >= gamma { p[0] * a + p[1] * b } else { f64::INFINITY };
        let (brute, _) = grid_min(obj, [0.0, 0.0], [10.0, 10.0]);
        let got = cost_value(&f, &v(&p), gamma).unwrap();
        assert!((got - brute).abs() <= 1e-6 * (1.0 + brute), "{p:?}: {got} vs {brute}");
    }
}
