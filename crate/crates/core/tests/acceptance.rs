use std::io::Write;
use std::time::{Duration, Instant};

use orlicz_kit::composition::{
    blocks, certify_min_d, check_volume_condition, continuity_obstruction_demo, counterexample_suite,
    holder_bound_check, modular_bound_check, normalize_for_bound, singletons, CounterexampleKind, TauMap,
    LADDER,
};
use orlicz_kit::config::{Command, RunConfig, Target};
use orlicz_kit::measure::{corpus, FunctionSpec, MeasurableSet, MeasureSpace};
use orlicz_kit::norm::{
    layer_cake_check, lorentz_quasinorm, luxemburg_norm, scaling_identity_check, QuadratureSettings,
};
use orlicz_kit::run::run;
use orlicz_kit::search::log_grid;
use orlicz_kit::young::{check_nabla2, check_oneil, default_grid, derivative_sandwich, YoungFunction, DEFAULT_K_CANDIDATES};

const LINE: MeasureSpace = MeasureSpace::LebesgueLine;
const INTEGERS: MeasureSpace = MeasureSpace::CountingIntegers;

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Prints the verdict line straight to the terminal so it shows without `--nocapture`.
fn verdict(n: u32, name: &str, start: Instant, budget: Duration, failures: &[String]) {
    let elapsed = start.elapsed();
    let mut failures = failures.to_vec();
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?}, budget {budget:?}"));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let detail = if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) };
    let line = format!("{status} criterion {n} ({name}, {elapsed:.2?}){detail}\n");
    let _ = std::io::stdout().write_all(line.as_bytes());
    assert!(failures.is_empty(), "{}", line.trim_end());
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_01_indicator_closed_forms() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let llogl = [
        (1e-3, 0.0052627638891285138482),
        (1.0, 1.3232749164678430085),
        (4.0, 4.6702178642096967969),
        (1e3, 1098.9155720113918811),
    ];
    for (mu, llogl_norm) in llogl {
        let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, mu).unwrap());
        let orlicz = [
            (YoungFunction::power(2.0), mu.sqrt()),
            (YoungFunction::llogl(), llogl_norm),
            (YoungFunction::exp_minus_one(), 1.0 / mu.recip().ln_1p()),
        ];
        for (phi, want) in orlicz {
            let got = luxemburg_norm(&phi, &f, &LINE, &settings()).unwrap().value;
            if rel(got, want) > 1e-6 {
                bad.push(format!("{phi} at mu={mu}: {got} vs {want}"));
            }
        }
        for (p, q) in [(2.0, 1.0), (2.0, 2.0), (3.0, f64::INFINITY)] {
            let c = if q == f64::INFINITY { 1.0 } else { f64::powf(q, -1.0 / q) };
            let want = c * mu.powf(1.0 / p);
            let got = lorentz_quasinorm(p, q, &f, &LINE, &settings()).unwrap().value;
            if rel(got, want) > 1e-6 {
                bad.push(format!("L({p},{q}) at mu={mu}: {got} vs {want}"));
            }
        }
    }
    verdict(1, "indicator norms", start, secs(1), &bad);
}

#[test]
fn criterion_02_layer_cake() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let phis = [YoungFunction::power(2.0), YoungFunction::llogl(), YoungFunction::exp_minus_one()];
    for f in corpus::simple_on_line(2024, 50) {
        for phi in &phis {
            let r = layer_cake_check(phi, &f, &LINE, &settings()).unwrap();
            if !(r.relative_gap <= 1e-6) {
                bad.push(format!("{phi} on {f}: gap {}", r.relative_gap));
            }
        }
    }
    verdict(2, "layer cake", start, secs(30), &bad);
}

fn builtin_families() -> Vec<YoungFunction> {
    vec![
        YoungFunction::power(1.0),
        YoungFunction::power(2.0),
        YoungFunction::power(3.5),
        YoungFunction::llogl(),
        YoungFunction::exp_minus_one(),
        YoungFunction::linear(),
        YoungFunction::exp_minus_one().power_compose(0.5).unwrap(),
        YoungFunction::power(6.0).power_compose(2.0).unwrap(),
        YoungFunction::tabulated(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 2.0), (4.0, 8.0)]).unwrap(),
    ]
}

#[test]
fn criterion_03_derivative_sandwich() {
    let start = Instant::now();
    let grid = log_grid(1e-4, 1e4, 200);
    let mut bad = Vec::new();
    for phi in builtin_families() {
        let r = derivative_sandwich(&phi, &grid).unwrap();
        if r.checked != 200 || !r.violations.is_empty() {
            bad.push(format!("{phi}: {} violations", r.violations.len()));
        }
    }
    verdict(3, "derivative sandwich", start, secs(1), &bad);
}

#[test]
fn criterion_04_oneil() {
    let start = Instant::now();
    let grid = log_grid(1e-6, 1e6, 100);
    let mut bad = Vec::new();
    for phi in [YoungFunction::power(2.0), YoungFunction::llogl(), YoungFunction::exp_minus_one()] {
        let r = check_oneil(&phi, &grid).unwrap();
        if !r.holds || r.points.len() != 100 {
            bad.push(format!("{phi}: ratios in [{}, {}]", r.min_ratio, r.max_ratio));
        }
    }
    verdict(4, "O'Neil inequality", start, secs(10), &bad);
}

#[test]
fn criterion_05_gauss_power_coherence() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let family = blocks(1000, true);
    for (p, q) in [(2.0, 1.0), (1.0, 1.0)] {
        let tau = TauMap::GaussPower { p, q };
        let r = certify_min_d(&tau, &YoungFunction::power(q), p, &family).unwrap();
        let bound = 2f64.powf(1.0 / q) * (1.0 + 1e-6);
        if !r.passed || !(r.min_d_estimate <= bound) {
            bad.push(format!("({p},{q}): passed={} min_d={}", r.passed, r.min_d_estimate));
        }
    }
    let tau = TauMap::GaussPower { p: 1.0, q: 2.0 };
    let phi = YoungFunction::power(2.0);
    let r = certify_min_d(&tau, &phi, 1.0, &family).unwrap();
    if r.passed {
        bad.push(format!("(1,2) certified with min_d={}", r.min_d_estimate));
    }
    let s = check_volume_condition(&tau, &phi, 1.0, 2f64.sqrt(), &singletons(0, 10_000)).unwrap();
    let ratio = |n: usize| s.per_set_margins[n].ratio;
    if !(ratio(10_000) > 100.0 * ratio(1)) {
        bad.push(format!("singleton ratio {} at 1e4 vs {} at 1", ratio(10_000), ratio(1)));
    }
    verdict(5, "Gauss power certification", start, secs(10), &bad);
}

#[test]
fn criterion_06_modular_bound() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut check = |tau: TauMap, phi: YoungFunction, p: f64, fs: Vec<FunctionSpec>, space: &MeasureSpace| {
        let family = match space {
            MeasureSpace::LebesgueLine => orlicz_kit::composition::dyadic_intervals(),
            _ => blocks(200, true),
        };
        let d = certify_min_d(&tau, &phi, p, &family).unwrap().min_d_estimate;
        for f in fs {
            let g = normalize_for_bound(&f, space, p, d).unwrap();
            let r = modular_bound_check(&tau, &phi, p, d, &g).unwrap();
            if !r.holds {
                bad.push(format!("{tau} {phi}: {} > 2*{d}*{}", r.modular, r.bound / (2.0 * d)));
            }
        }
    };
    for p in [1.0, 2.0, 3.0] {
        check(TauMap::Identity, YoungFunction::power(p), p, corpus::simple_on_line(61, 20), &LINE);
    }
    for (p, q) in [(2.0, 1.0), (1.0, 1.0), (3.0, 2.0)] {
        check(
            TauMap::GaussPower { p, q },
            YoungFunction::power(q),
            p,
            corpus::simple_on_integers(62, 20, 0, 60),
            &INTEGERS,
        );
    }
    verdict(6, "modular bound", start, secs(60), &bad);
}

#[test]
fn criterion_07_counterexample_divergence() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (kind, p, q) in [(CounterexampleKind::Ex1, 0.5, None), (CounterexampleKind::Ex2_3, 2.0, Some(1.0))] {
        let ev = counterexample_suite(kind, p, q, &LADDER).unwrap();
        let slope = ev.log_slope.unwrap_or(f64::NAN);
        let ok = ev.norm.is_finite()
            && ev.norm_converged
            && ev.tail_certified
            && ev.strictly_increasing
            && slope > 0.0
            && ev.ladder.len() == 4;
        if !ok {
            bad.push(format!("{kind:?}: norm={} slope={slope} ladder={:?}", ev.norm, ev.ladder));
        }
    }
    verdict(7, "counterexample divergence", start, secs(30), &bad);
}

#[test]
fn criterion_08_nabla2() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let grid = default_grid();
    let h: Vec<f64> = (1..=20).map(|k| 2f64.powi(-k)).collect();
    let expect = [
        (YoungFunction::power(2.0), true),
        (YoungFunction::exp_minus_one(), true),
        (YoungFunction::linear(), false),
        (YoungFunction::llogl(), false),
    ];
    for (phi, holds) in expect {
        let r = check_nabla2(&phi, &DEFAULT_K_CANDIDATES, &grid).unwrap();
        if r.holds != holds {
            let first = r.failures.first().map(|f| format!(" (k={}, t={}, ratio={})", f.k, f.t, f.ratio));
            bad.push(format!("{phi}: holds={} expected {holds}{}", r.holds, first.unwrap_or_default()));
        }
        if holds {
            match holder_bound_check(&phi, 1.0, None, &h) {
                Ok(rep) if rep.monotone_decreasing && rep.final_quantity < 1e-3 => {}
                Ok(rep) => bad.push(format!("{phi}: Holder quantity ends at {}", rep.final_quantity)),
                Err(e) => bad.push(format!("{phi}: Holder check unavailable: {e}")),
            }
        }
    }
    verdict(8, "nabla-2 machinery", start, secs(5), &bad);
}

#[test]
fn criterion_09_scaling_identities() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for f in corpus::simple_on_line(909, 20) {
        let r = scaling_identity_check(3.0, 2.0, &YoungFunction::power(3.0), &f, &LINE, &settings()).unwrap();
        if !(r.lorentz_gap <= 1e-6) {
            bad.push(format!("Lorentz {} vs {}", r.lorentz_lhs, r.lorentz_rhs));
        }
        if !(r.orlicz_gap <= 1e-6) {
            bad.push(format!("Orlicz {} vs {}", r.orlicz_lhs, r.orlicz_rhs));
        }
    }
    if bad.len() > 3 {
        let n = bad.len();
        bad.truncate(2);
        bad.push(format!("{n} mismatches in total"));
    }
    verdict(9, "scaling identities", start, secs(20), &bad);
}

#[test]
fn criterion_10_unbounded_witness() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let radii: Vec<f64> = (1..=30).map(|k| 2f64.powi(-k)).collect();
    let r = continuity_obstruction_demo(2.0, 0.25, &radii).unwrap();
    for (k, &(eps, level)) in (1..=30).zip(&r.ladder) {
        let want = 2f64.powf(0.25 * k as f64);
        if eps != radii[k - 1] || level != want {
            bad.push(format!("k={k}: level {level} vs {want}"));
        }
    }
    let oracle = (2.0f64 / (1.0 - 0.25 * 2.0)).sqrt();
    if rel(r.lp_norm, oracle) > 1e-8 {
        bad.push(format!("L2 norm {} vs {oracle}", r.lp_norm));
    }
    verdict(10, "unbounded L2 witness", start, secs(1), &bad);
}

#[test]
fn criterion_11_determinism() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let payload = || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_orlicz-kit"))
            .args(["reproduce-paper", "all", "--seed", "42"])
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    let (c1, a) = payload();
    let (c2, b) = payload();
    if c1 != c2 || a != b || a.is_empty() {
        bad.push("binary output differs between runs".into());
    }
    let config = RunConfig::new(Command::ReproducePaper { target: Target::All });
    let lib = || {
        let o = run(&config).unwrap();
        let tables: Vec<String> = o.tables.iter().map(|t| t.to_csv_string().unwrap()).collect();
        (o.envelope(&config).to_json(), tables)
    };
    if lib() != lib() {
        bad.push("library payload differs between runs".into());
    }
    verdict(11, "determinism", start, secs(600), &bad);
}
