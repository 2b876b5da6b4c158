use proptest::prelude::*;
use suppdiff::cli::{read_points_csv, scan_csv};
use suppdiff::conditions::{check_condition, replay, CheckConfig, Condition};
use suppdiff::cost::{cost_value, replay_axiom, check_axiom};
use suppdiff::fixtures::{production_fixture, set_fixture};
use suppdiff::gauge::gauge;
use suppdiff::sets::Axiom;
use suppdiff::support::{scan, support_value, SupportConfig};
use suppdiff::vector::Vector;

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn neg2() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..-0.05f64, 2)
}

fn pos(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1..5.0f64, n)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn support_is_positively_homogeneous(y in neg2(), t in 0.1..10.0f64) {
        for name in ["ex3b", "hyperbola", "ex-adsz-L"] {
            let s = set_fixture(name).unwrap().numeric_only();
            let a = support_value(&s, &v(&y)).unwrap().value;
            let ty: Vec<f64> = y.iter().map(|c| c * t).collect();
            let b = support_value(&s, &v(&ty)).unwrap().value;
            prop_assert!(close(b, t * a, 1e-7), "{name}: {b} vs {}", t * a);
        }
    }

    #[test]
    fn support_is_convex(y1 in neg2(), y2 in neg2()) {
        for name in ["ex3b", "hyperbola", "ex1"] {
            let s = set_fixture(name).unwrap();
            let f = |y: &[f64]| support_value(&s, &v(y)).unwrap().value;
            let m: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| 0.5 * (a + b)).collect();
            prop_assert!(f(&m) <= 0.5 * (f(&y1) + f(&y2)) + 1e-8 * (1.0 + f(&m).abs()), "{name}");
        }
    }

    #[test]
    fn support_majorises_members(y in neg2(), x in pos(2)) {
        let s = set_fixture("ex-adsz-L").unwrap();
        if s.contains(&x) {
            let sigma = support_value(&s, &v(&y)).unwrap().value;
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            prop_assert!(dot <= sigma + 1e-9 * (1.0 + sigma.abs()));
        }
    }

    #[test]
    fn gauge_is_homogeneous_and_monotone(x in pos(3), k in pos(3), t in 0.1..10.0f64) {
        let s = set_fixture("d4").unwrap();
        let g = gauge(&s, &v(&x)).unwrap().value;
        let tx: Vec<f64> = x.iter().map(|c| c * t).collect();
        prop_assert!(close(gauge(&s, &v(&tx)).unwrap().value, t * g, 1e-8));
        let xk: Vec<f64> = x.iter().zip(&k).map(|(a, b)| a + b).collect();
        prop_assert!(gauge(&s, &v(&xk)).unwrap().value >= g - 1e-8 * (1.0 + g));
    }

    #[test]
    fn cost_is_concave_and_homogeneous(p in pos(2), q in pos(2), t in 0.1..10.0f64) {
        for name in ["cobb-douglas", "ex-adsz", "leontief"] {
            let f = production_fixture(name).unwrap();
            let c = |x: &[f64]| cost_value(&f, &v(x), 2.5).unwrap();
            let tp: Vec<f64> = p.iter().map(|c| c * t).collect();
            prop_assert!(close(c(&tp), t * c(&p), 1e-8), "{name}");
            let m: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
            prop_assert!(c(&m) >= 0.5 * (c(&p) + c(&q)) - 1e-8 * (1.0 + c(&m)), "{name}");
        }
    }

    #[test]
    fn cost_grows_with_the_level(p in pos(2), g1 in 0.2..4.0f64, dg in 0.0..3.0f64) {
        for name in ["cobb-douglas", "g-smooth", "leontief"] {
            let f = production_fixture(name).unwrap();
            let a = cost_value(&f, &v(&p), g1).unwrap();
            let b = cost_value(&f, &v(&p), g1 + dg).unwrap();
            prop_assert!(a <= b + 1e-8 * (1.0 + b), "{name}: {a} > {b}");
        }
    }

    #[test]
    fn gauge_production_round_trip(p in pos(3), gamma in 0.2..4.0f64) {
        let f = production_fixture("d4-gauge").unwrap();
        let d4 = set_fixture("d4").unwrap();
        let neg: Vec<f64> = p.iter().map(|c| -c).collect();
        let want = -gamma * support_value(&d4, &v(&neg)).unwrap().value;
        let got = cost_value(&f, &v(&p), gamma).unwrap();
        prop_assert!((got - want).abs() <= 1e-6 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn scan_csv_round_trips(ys in prop::collection::vec(neg2(), 1..6)) {
        let s = set_fixture("ex3b").unwrap();
        let rows = scan(&s, &ys, &SupportConfig::default()).unwrap();
        let text = scan_csv(&rows, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.csv");
        std::fs::write(&path, &text).unwrap();
        let back = read_points_csv(&path);
        // the verdict column is text, so rows are not all numeric
        prop_assert!(back.is_err());
        let coords: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').take(2).map(|c| c.parse().unwrap()).collect()).collect();
        prop_assert_eq!(coords, ys);
    }
}

#[test]
fn violations_replay() {
    let cfg = CheckConfig::default().with_samples(200).with_seed(99);
    for (name, cond) in [("d4", Condition::ChordsIntK), ("ex3a", Condition::TranslatesIntK), ("ex3b", Condition::StrictChords), ("ex-adsz-L", Condition::BoundaryChordsA)] {
        let s = set_fixture(name).unwrap();
        let r = check_condition(&s, cond, &cfg).unwrap();
        assert!(!r.holds(), "{name} {}", cond.id());
        assert!(r.witnesses.iter().all(|w| replay(&s, cond, w, &cfg)), "{name} {}", cond.id());
    }
    for (name, ax) in [("ex-adsz", Axiom::F4c), ("phi-g", Axiom::F3c), ("leontief", Axiom::F2b), ("d4-gauge", Axiom::F3c)] {
        let f = production_fixture(name).unwrap();
        let r = check_axiom(&f, ax, &cfg).unwrap();
        assert!(!r.holds(), "{name} {}", ax.name());
        assert!(r.witnesses.iter().all(|w| replay_axiom(&f, ax, w)), "{name} {}", ax.name());
    }
}

#[test]
fn reports_are_seed_stable() {
    let s = set_fixture("ex-adsz-L").unwrap();
    let cfg = CheckConfig::default().with_samples(300).with_seed(5);
    let a = serde_json::to_string(&check_condition(&s, Condition::ChordsIntK, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&check_condition(&s, Condition::ChordsIntK, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}
