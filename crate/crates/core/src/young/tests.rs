use super::*;
use crate::search::log_grid;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn families() -> Vec<YoungFunction> {
    vec![
        YoungFunction::power(2.0),
        YoungFunction::power(1.5),
        YoungFunction::power(3.0),
        YoungFunction::llogl(),
        YoungFunction::exp_minus_one(),
        YoungFunction::linear(),
        YoungFunction::power(4.0).power_compose(2.0).unwrap(),
        YoungFunction::tabulated(vec![(1.0, 1.0), (2.0, 3.0), (4.0, 9.0)]).unwrap(),
    ]
}

#[test]
fn eval_examples() {
    assert_eq!(YoungFunction::power(2.0).eval(3.0).unwrap(), 9.0);
    assert_eq!(YoungFunction::llogl().eval(0.0).unwrap(), 0.0);
    let e = YoungFunction::exp_minus_one().eval(1.0).unwrap();
    assert!((e - 1.718281828459045).abs() < 1e-15);
    assert!(matches!(YoungFunction::linear().eval(-1.0), Err(Error::Domain(_))));
}

#[test]
fn zero_maps_to_zero_for_every_family() {
    for phi in families() {
        assert_eq!(phi.value(0.0), 0.0, "{phi}");
    }
}

#[test]
fn cap_gives_infinity_only_above() {
    let phi = YoungFunction::linear().with_domain_cap(2.0);
    assert_eq!(phi.value(2.0), 2.0);
    assert_eq!(phi.value(2.5), f64::INFINITY);
}

#[test]
fn derivative_examples() {
    assert_eq!(YoungFunction::power(2.0).left_derivative(1.0).unwrap(), 2.0);
    assert_eq!(YoungFunction::linear().left_derivative(5.0).unwrap(), 1.0);
    let d = YoungFunction::llogl().left_derivative(1.0).unwrap();
    assert!(rel(d, 1.6362943611198906) < 1e-15);
    assert!(d >= 1.3862943611198906 && d <= 3.2188758248682007);
    assert!(YoungFunction::linear().left_derivative(0.0).is_err());
}

#[test]
fn numeric_derivative_matches_closed_forms() {
    for phi in families() {
        for t in [0.3, 1.7, 25.0] {
            let a = phi.slope(t);
            let n = phi.numeric_left_derivative(t).unwrap();
            assert!(rel(n, a) < 1e-6, "{phi} at {t}: {n} vs {a}");
        }
    }
}

#[test]
fn numeric_derivative_is_left_sided_at_kink() {
    let phi = YoungFunction::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)]).unwrap();
    let n = phi.numeric_left_derivative(1.0).unwrap();
    assert!((n - 1.0).abs() < 1e-9);
    assert_eq!(phi.slope(1.0), 1.0);
}

#[test]
fn ln_slope_agrees_with_slope() {
    for phi in families() {
        for t in [1e-3, 0.5, 7.0, 300.0] {
            let a = phi.slope(t).ln();
            let b = phi.ln_slope(t.ln());
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{phi} at {t}");
        }
    }
}

#[test]
fn ln_value_agrees_with_value() {
    for phi in families() {
        for t in [1e-5, 0.5, 7.0, 300.0] {
            let a = phi.value(t).ln();
            let b = phi.ln_value(t);
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{phi} at {t}");
        }
    }
    assert_eq!(YoungFunction::exp_minus_one().ln_value(1e6), 1e6);
}

#[test]
fn sandwich_on_every_family() {
    let grid = log_grid(1e-4, 1e4, 200);
    for phi in families() {
        let r = derivative_sandwich(&phi, &grid).unwrap();
        assert!(r.violations.is_empty(), "{phi}: {:?}", r.violations);
    }
}

#[test]
fn complementary_examples() {
    let half_square: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let s = i as f64 * 0.25;
            (s, s * s / 2.0)
        })
        .collect();
    let phi = YoungFunction::tabulated(half_square).unwrap();
    assert_eq!(phi.complementary(2.0).unwrap(), 2.0);
    assert_eq!(YoungFunction::linear().complementary(0.5).unwrap(), 0.0);
    assert_eq!(YoungFunction::linear().complementary(2.0).unwrap(), f64::INFINITY);
    assert!(YoungFunction::linear().complementary(-1.0).is_err());
}

#[test]
fn llogl_conjugate_band() {
    let phi = YoungFunction::llogl();
    let oracle = [
        (4.0, 17.290375657696775),
        (5.0, 51.677724479268248),
        (6.0, 145.44308029784642),
        (8.0, 1093.6372544364879),
    ];
    for (t, v) in oracle {
        let c = phi.complementary(t).unwrap();
        assert!(rel(c, v) < 1e-10, "t={t}: {c} vs {v}");
    }
    let r5 = phi.complementary(5.0).unwrap() / 5f64.exp();
    assert!((0.31668427679693389..=0.36687442734535222).contains(&r5));
}

#[test]
fn numeric_legendre_matches_closed_forms() {
    let exp = YoungFunction::exp_minus_one();
    let cap = 1e6;
    for t in [0.5, 1.0, 2.0, 10.0] {
        let numeric = exp.clone().with_domain_cap(cap).complementary(t).unwrap();
        let closed = exp.complementary(t).unwrap();
        assert!((numeric - closed).abs() <= 1e-9 * closed.max(1.0), "t={t}");
    }
    let composed = YoungFunction::power(3.0).power_compose(1.0).unwrap();
    let closed = YoungFunction::power(3.0).complementary(2.0).unwrap();
    assert!(rel(composed.complementary(2.0).unwrap(), closed) < 1e-10);
}

#[test]
fn capped_linear_conjugate_is_finite() {
    let phi = YoungFunction::linear().with_domain_cap(3.0);
    let c = phi.complementary(2.0).unwrap();
    assert!((c - 3.0).abs() < 1e-9);
}

#[test]
fn inverse_examples() {
    assert_eq!(YoungFunction::power(2.0).generalized_inverse(9.0).unwrap(), 3.0);
    let e = YoungFunction::exp_minus_one();
    let s = e.generalized_inverse(std::f64::consts::E - 1.0).unwrap();
    assert!((s - 1.0).abs() < 1e-15);
    let flat = YoungFunction::tabulated(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]).unwrap();
    assert_eq!(flat.generalized_inverse(0.0).unwrap(), 1.0);
    let l = YoungFunction::llogl().generalized_inverse(1.0).unwrap();
    assert!(rel(l, 0.75570086574999403) < 1e-14);
}

#[test]
fn inverse_of_capped_function_stays_below_cap() {
    let phi = YoungFunction::linear().with_domain_cap(2.0);
    assert_eq!(phi.inverse(5.0), 2.0);
}

#[test]
fn validate_examples() {
    let grid = default_grid();
    let sqrt = validate_young(&YoungFunction::power(0.5), &grid).unwrap();
    assert!(!sqrt.convexity.passed);
    assert!(sqrt.positivity.passed);
    for phi in [YoungFunction::power(2.0), YoungFunction::llogl()] {
        let r = validate_young(&phi, &grid).unwrap();
        assert!(r.is_valid(), "{phi}: {r:?}");
    }
    assert!(validate_young(&YoungFunction::linear(), &[]).is_err());
}

#[test]
fn validate_flags_nonzero_origin_and_flat_start() {
    let grid = default_grid();
    let shifted = YoungFunction::tabulated(vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
    assert_eq!(validate_young(&shifted, &grid).unwrap().vanishes_at_zero.first_violation, Some(0.0));
    let flat = YoungFunction::tabulated(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]).unwrap();
    assert!(!validate_young(&flat, &grid).unwrap().positivity.passed);
}

#[test]
fn composed_validation() {
    let grid = default_grid();
    let root = YoungFunction::power(1.0).power_compose(2.0).unwrap();
    assert!(!validate_young(&root, &grid).unwrap().convexity.passed);
    let t = 7.0_f64;
    assert_eq!(root.value(t * t), YoungFunction::power(1.0).value(t));
    let same = YoungFunction::llogl().power_compose(1.0).unwrap();
    for t in [0.0, 0.5, 3.0, 1e5] {
        assert_eq!(same.value(t), YoungFunction::llogl().value(t));
    }
    let p = YoungFunction::power(3.0).power_compose(1.5).unwrap();
    assert!(rel(p.value(5.0), 25.0) < 1e-14);
    assert!(YoungFunction::linear().power_compose(0.0).is_err());
}

#[test]
fn nabla2_examples() {
    let grid = default_grid();
    let sq = check_nabla2(&YoungFunction::power(2.0), &DEFAULT_K_CANDIDATES, &grid).unwrap();
    assert!(sq.holds);
    assert_eq!(sq.witness_k, Some(2.0));
    assert!((sq.gamma.unwrap() - 2.0).abs() < 1e-6);
    for phi in [YoungFunction::linear(), YoungFunction::llogl()] {
        let r = check_nabla2(&phi, &DEFAULT_K_CANDIDATES, &grid).unwrap();
        assert!(!r.holds, "{phi}");
        assert_eq!(r.failures.len(), DEFAULT_K_CANDIDATES.len());
    }
}

#[test]
fn llogl_nabla2_ratio_tends_to_half() {
    let phi = YoungFunction::llogl();
    let t = 1e6;
    for k in DEFAULT_K_CANDIDATES {
        let ratio = phi.value(k * t) / (2.0 * k * phi.value(t));
        assert!((ratio - 0.5).abs() < 0.11, "k={k}: {ratio}");
    }
}

#[test]
fn exp_fails_nabla2_near_zero() {
    let r = check_nabla2(&YoungFunction::exp_minus_one(), &DEFAULT_K_CANDIDATES, &default_grid())
        .unwrap();
    assert!(!r.holds);
    for f in &r.failures {
        assert!(f.t < 1.0);
        assert!(f.ratio < 1.0);
    }
    let big = log_grid(1.0, 1e6, 200);
    assert!(check_nabla2(&YoungFunction::exp_minus_one(), &DEFAULT_K_CANDIDATES, &big)
        .unwrap()
        .holds);
}

#[test]
fn exponent_examples() {
    let grid = log_grid(1e-3, 1e3, 200);
    for p in [2.0, 3.0, 5.5] {
        let e = estimate_nabla2_exponent(&YoungFunction::power(p), &grid).unwrap();
        assert!((e.gamma - p).abs() < 1e-6, "p={p}: {e:?}");
        assert!((e.constant - 1.0).abs() < 1e-6);
    }
    let c = YoungFunction::power(2.0).power_compose(1.0).unwrap();
    let e = estimate_nabla2_exponent(&c, &grid).unwrap();
    assert!((e.gamma - 2.0).abs() < 1e-6);
    assert!(matches!(
        estimate_nabla2_exponent(&YoungFunction::linear(), &grid),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn exponent_for_non_power_function() {
    let phi = YoungFunction::power(3.0).power_compose(1.0).unwrap();
    let tab = YoungFunction::tabulated(
        log_grid(1e-9, 1e8, 400).into_iter().map(|t| (t, phi.value(t) + t.powf(2.5))).collect(),
    )
    .unwrap();
    let e = estimate_nabla2_exponent(&tab, &log_grid(1e-3, 1e3, 100)).unwrap();
    assert!(e.gamma > 1.0 && e.constant >= 1.0 && e.constant.is_finite());
}

#[test]
fn oneil_examples() {
    let sq = check_oneil(&YoungFunction::power(2.0), &[1.0]).unwrap();
    assert!(sq.holds);
    let l = check_oneil(&YoungFunction::llogl(), &[0.1, 1.0, 10.0, 100.0]).unwrap();
    assert!(l.holds);
    let oracle = [1.28362796863803, 1.58885270811869, 1.71815735691511, 1.62742230164662];
    for (pt, want) in l.points.iter().zip(oracle) {
        assert!((pt.ratio - want).abs() < 1e-9, "t={}: {} vs {want}", pt.t, pt.ratio);
    }
    let e = check_oneil(&YoungFunction::exp_minus_one(), &[1.0]).unwrap();
    assert!(e.holds);
    assert!((e.points[0].ratio - 1.8841693853637201).abs() < 1e-9);
}

#[test]
fn power_equivalence_examples() {
    let log_map = |t: f64| (1.0 / t).ln_1p().recip();
    let r = check_power_equivalence(log_map, 1.0, (1.0, 1e6)).unwrap();
    assert!(r.holds);
    assert!(rel(r.c2, std::f64::consts::LOG2_E) < 1e-12);
    assert!((log_map(1e6) / 1e6 - 1.0).abs() < 1e-6);

    let exact = check_power_equivalence(|t| t.powf(2.5), 2.5, (1.5, 100.0)).unwrap();
    assert!((exact.c1 - 1.0).abs() < 1e-14 && (exact.c2 - 1.0).abs() < 1e-14);

    let phi = YoungFunction::llogl();
    let g = |t: f64| phi.inverse(1.0 / t).recip();
    let r = check_power_equivalence(g, 1.0, (1.0, 1e4)).unwrap();
    assert!(r.holds);
    assert!(rel(r.c2, 1.3232749164678430) < 1e-12);
    assert!(rel(r.c1, 1.0986426286774985) < 1e-9);

    assert!(check_power_equivalence(|_| f64::NAN, 1.0, (1.0, 2.0)).is_err());
}
