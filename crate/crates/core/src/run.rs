//! Command dispatch and the reproduction targets.

use serde::Serialize;
use serde_json::{json, Value};

use crate::composition::{
    blocks, certify_min_d, check_volume_condition, continuity_obstruction_demo,
    counterexample_suite, finite_subsets, holder_bound_check, singletons, CertificationReport,
    CounterexampleKind, SetFamily, TauMap, VolumeCondition, LADDER,
};
use crate::config::{Command, DemoSpec, RunConfig, Target};
use crate::measure::{corpus, FunctionSpec, MeasurableSet, MeasureSpace};
use crate::norm::{
    indicator_lorentz_norm, indicator_orlicz_norm, layer_cake_check, lorentz_quasinorm,
    luxemburg_norm, QuadratureSettings,
};
use crate::report::{fmt_real, Diagnostic, Level, ReportEnvelope, Table, Verdict};
use crate::search::log_grid;
use crate::young::{
    check_nabla2, check_oneil, check_power_equivalence, default_grid, derivative_sandwich,
    estimate_nabla2_exponent, validate_young, YoungFunction, DEFAULT_K_CANDIDATES,
};
use crate::Result;

pub const TOOL_VERSION: &str = concat!("orlicz-kit ", env!("CARGO_PKG_VERSION"));

/// Result of one command: a JSON body, its tables and a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub results: Value,
    pub tables: Vec<Table>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Outcome {
    fn new(passed: bool, results: impl Serialize) -> Result<Self> {
        Ok(Outcome { passed, results: to_value(results)?, tables: vec![], diagnostics: vec![] })
    }

    fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn envelope(&self, config: &RunConfig) -> ReportEnvelope {
        ReportEnvelope {
            tool_version: TOOL_VERSION.into(),
            config_echo: Some(config.clone()),
            verdict: if self.passed { Verdict::Pass } else { Verdict::Fail },
            results: self.results.clone(),
            diagnostics: self.diagnostics.clone(),
        }
    }
}

/// Envelope for a run that stopped with an error.
pub fn error_envelope(config: Option<&RunConfig>, err: &dyn std::fmt::Display) -> ReportEnvelope {
    ReportEnvelope {
        tool_version: TOOL_VERSION.into(),
        config_echo: config.cloned(),
        verdict: Verdict::Error,
        results: Value::Null,
        diagnostics: vec![Diagnostic { level: Level::Error, message: err.to_string() }],
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| crate::Error::Evaluation(format!("serializing results: {e}")))
}

fn r(v: f64) -> String {
    fmt_real(v)
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let settings = &config.quadrature;
    match &config.command {
        Command::YoungValidate { phi } => {
            let validity = validate_young(phi, &default_grid())?;
            let sandwich = derivative_sandwich(phi, &log_grid(1e-4, 1e4, 200))?;
            let passed = validity.is_valid() && sandwich.violations.is_empty();
            Outcome::new(passed, json!({ "phi": phi.to_string(), "validity": validity, "sandwich": sandwich }))
        }
        Command::YoungComplementary { phi, t } => {
            let mut table = Table::new("complementary", &["t", "phi", "complementary", "inverse", "conjugate_inverse", "oneil_ratio"]);
            let mut ok = true;
            for &x in t {
                let inv = phi.generalized_inverse(x)?;
                let cinv = phi.conjugate_inverse(x)?;
                let ratio = if x > 0.0 { inv * cinv / x } else { f64::NAN };
                if x > 0.0 && !(1.0 - 1e-8..=2.0 + 1e-8).contains(&ratio) {
                    ok = false;
                }
                table.push(vec![r(x), r(phi.eval(x)?), r(phi.complementary(x)?), r(inv), r(cinv), r(ratio)]);
            }
            Ok(Outcome::new(ok, json!({ "phi": phi.to_string(), "points": t.len() }))?.table(table))
        }
        Command::YoungNabla2 { phi, k_candidates } => {
            let ks = k_candidates.clone().unwrap_or_else(|| DEFAULT_K_CANDIDATES.to_vec());
            let report = check_nabla2(phi, &ks, &default_grid())?;
            let exponent = if report.holds { Some(estimate_nabla2_exponent(phi, &default_grid())?) } else { None };
            Outcome::new(report.holds, json!({ "phi": phi.to_string(), "nabla2": report, "exponent": exponent }))
        }
        Command::NormOrlicz { phi, f, space } => {
            let est = luxemburg_norm(phi, f, space, settings)?;
            Outcome::new(true, json!({ "norm": "luxemburg", "phi": phi.to_string(), "f": f.to_string(), "estimate": est }))
        }
        Command::NormLorentz { p, q, f, space } => {
            let est = lorentz_quasinorm(*p, q.0, f, space, settings)?;
            Outcome::new(true, json!({ "norm": "lorentz", "p": p, "q": fmt_real(q.0), "f": f.to_string(), "estimate": est }))
        }
        Command::Certify { tau, phi, p, d, family, n_max, include_zero, lorentz_q } => {
            let fam = SetFamily::canonical(*family, tau, *n_max, config.seed, *include_zero);
            let mut vc = VolumeCondition::new(tau.clone(), phi.clone(), *p);
            if let Some(q) = lorentz_q {
                vc = vc.with_lorentz_q(*q);
            }
            let report = match d {
                Some(d) => vc.check(*d, &fam)?,
                None => vc.certify_min_d(&fam)?,
            };
            let table = margins_table(&report);
            Ok(Outcome::new(report.passed, &report)?.table(table))
        }
        Command::Demo { demo } => run_demo(demo),
        Command::ReproducePaper { target } => reproduce(*target, config.seed, settings),
    }
}

fn margins_table(report: &CertificationReport) -> Table {
    let mut t = Table::new("margins", &["set_id", "mu_E", "nu_preimage", "rhs", "ratio"]);
    for m in &report.per_set_margins {
        t.push(vec![m.set_id.to_string(), r(m.mu), r(m.nu_preimage), r(m.rhs), r(m.ratio)]);
    }
    t
}

fn ladder_table(ev: &crate::composition::DivergenceEvidence) -> Table {
    let mut t = Table::new("ladder", &["R", "truncated_value"]);
    for rung in &ev.ladder {
        t.push(vec![r(rung.r), r(rung.truncated_value)]);
    }
    t
}

fn run_demo(demo: &DemoSpec) -> Result<Outcome> {
    match demo {
        DemoSpec::Counterexample { kind, p, q } => {
            let ev = counterexample_suite(*kind, *p, *q, &LADDER)?;
            let t = ladder_table(&ev);
            Ok(Outcome::new(ev.diverges, &ev)?.table(t))
        }
        DemoSpec::Holder { phi, d, gamma, steps } => {
            let grid: Vec<f64> = (1..=*steps as i32).map(|k| 2f64.powi(-k)).collect();
            let rep = holder_bound_check(phi, *d, *gamma, &grid)?;
            let mut t = Table::new("holder", &["h", "quantity", "scaled"]);
            for pt in &rep.points {
                t.push(vec![r(pt.h), r(pt.quantity), r(pt.scaled)]);
            }
            Ok(Outcome::new(rep.holds, &rep)?.table(t))
        }
        DemoSpec::Continuity { p, gamma, levels } => {
            let out = section_5(*p, *gamma, *levels)?;
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct TargetResult {
    target: &'static str,
    passed: bool,
    summary: Value,
}

fn reproduce(target: Target, seed: u64, settings: &QuadratureSettings) -> Result<Outcome> {
    let targets: Vec<Target> = if target == Target::All { Target::EACH.to_vec() } else { vec![target] };
    let mut results = Vec::new();
    let mut tables = Vec::new();
    let mut diagnostics = Vec::new();
    for t in targets {
        let out = reproduce_one(t, seed, settings)?;
        diagnostics.push(Diagnostic {
            level: if out.passed { Level::Info } else { Level::Warning },
            message: format!("{}: {}", t.name(), if out.passed { "PASS" } else { "FAIL" }),
        });
        diagnostics.extend(out.diagnostics);
        results.push(TargetResult { target: t.name(), passed: out.passed, summary: out.results });
        tables.extend(out.tables.into_iter().map(|mut tb| {
            tb.name = format!("{}_{}", t.name(), tb.name);
            tb
        }));
    }
    let passed = results.iter().all(|x| x.passed);
    Ok(Outcome { passed, results: to_value(json!({ "targets": results }))?, tables, diagnostics })
}

fn reproduce_one(target: Target, seed: u64, settings: &QuadratureSettings) -> Result<Outcome> {
    match target {
        Target::Example1 => {
            let ev = counterexample_suite(CounterexampleKind::Ex1, 0.5, None, &LADDER)?;
            let t = ladder_table(&ev);
            Ok(Outcome::new(ev.diverges, &ev)?.table(t))
        }
        Target::Example2 => example_2(),
        Target::Example3 => {
            let tau = TauMap::OrliczInverse { phi: YoungFunction::llogl(), p: 1.0 };
            let phi = YoungFunction::llogl();
            let g = |t: f64| phi.inverse(t.recip()).recip();
            let band = check_power_equivalence(g, 1.0, (1.0, 1e4))?;
            let rep = certify_min_d(&tau, &phi, 1.0, &blocks(1000, false))?;
            let oneil = check_oneil(&phi, &log_grid(1e-4, 1e4, 100))?;
            let mut t = Table::new("certification", &["tau", "phi", "p", "min_d", "growth_slope", "passed"]);
            t.push(cert_row(&tau, &phi, 1.0, &rep));
            let passed = rep.passed && band.holds && oneil.holds;
            Ok(Outcome::new(passed, json!({ "power_equivalence": band, "certification": rep, "oneil": oneil }))?.table(t))
        }
        Target::Example4 => {
            let tau = TauMap::LogMap { p: 1.0 };
            let phi = YoungFunction::exp_minus_one();
            let g = |t: f64| t.recip().ln_1p().recip();
            let band = check_power_equivalence(g, 1.0, (1.0, 1e6))?;
            let rep = certify_min_d(&tau, &phi, 1.0, &blocks(1000, false))?;
            let mut t = Table::new("certification", &["tau", "phi", "p", "min_d", "growth_slope", "passed"]);
            t.push(cert_row(&tau, &phi, 1.0, &rep));
            Ok(Outcome::new(rep.passed && band.holds, json!({ "power_equivalence": band, "certification": rep }))?.table(t))
        }
        Target::LemmaLayerCake => {
            let mut t = Table::new("layer_cake", &["function_id", "phi", "direct", "layer_cake", "relative_gap"]);
            let mut worst: f64 = 0.0;
            let line = MeasureSpace::LebesgueLine;
            for (i, f) in corpus::simple_on_line(seed, 50).iter().enumerate() {
                for phi in [YoungFunction::power(2.0), YoungFunction::llogl(), YoungFunction::exp_minus_one()] {
                    let rep = layer_cake_check(&phi, f, &line, settings)?;
                    worst = worst.max(rep.relative_gap);
                    t.push(vec![i.to_string(), phi.to_string(), r(rep.lhs), r(rep.rhs), r(rep.relative_gap)]);
                }
            }
            Ok(Outcome::new(worst <= 1e-6, json!({ "functions": 50, "max_relative_gap": worst }))?.table(t))
        }
        Target::LemmaIndicators => indicators(settings),
        Target::Oneil => {
            let grid = log_grid(1e-4, 1e4, 100);
            let mut t = Table::new("oneil", &["phi", "min_ratio", "min_ratio_at", "max_ratio", "max_ratio_at", "holds"]);
            let mut passed = true;
            for phi in [YoungFunction::power(2.0), YoungFunction::llogl(), YoungFunction::exp_minus_one()] {
                let rep = check_oneil(&phi, &grid)?;
                passed &= rep.holds;
                t.push(vec![
                    phi.to_string(),
                    r(rep.min_ratio),
                    r(rep.min_ratio_at),
                    r(rep.max_ratio),
                    r(rep.max_ratio_at),
                    rep.holds.to_string(),
                ]);
            }
            Ok(Outcome::new(passed, json!({ "grid_points": grid.len() }))?.table(t))
        }
        Target::Nabla2Demo => nabla2_demo(),
        Target::Section5Demo => section_5(2.0, 0.25, 30),
        Target::All => reproduce(Target::All, seed, settings),
    }
}

fn cert_row(tau: &TauMap, phi: &YoungFunction, p: f64, rep: &CertificationReport) -> Vec<String> {
    vec![
        tau.to_string(),
        phi.to_string(),
        r(p),
        r(rep.min_d_estimate),
        rep.growth_slope.map_or_else(String::new, r),
        rep.passed.to_string(),
    ]
}

fn example_2() -> Result<Outcome> {
    let mut t = Table::new("gauss_power_blocks", &["p", "q", "min_d", "d_bound", "growth_slope", "passed", "expected"]);
    let mut ok = true;
    let mut reports = Vec::new();
    for (p, q, expected) in [(2.0, 1.0, true), (1.0, 1.0, true), (1.0, 2.0, false)] {
        let tau = TauMap::GaussPower { p, q };
        let rep = certify_min_d(&tau, &YoungFunction::power(q), p, &blocks(1000, true))?;
        let bound = 2f64.powf(q.recip());
        let matches = if expected {
            rep.passed && rep.min_d_estimate <= bound * (1.0 + 1e-6)
        } else {
            !rep.passed
        };
        ok &= matches;
        t.push(vec![
            r(p),
            r(q),
            r(rep.min_d_estimate),
            r(bound),
            rep.growth_slope.map_or_else(String::new, r),
            rep.passed.to_string(),
            expected.to_string(),
        ]);
        reports.push(json!({ "p": p, "q": q, "report": rep }));
    }
    let tau = TauMap::GaussPower { p: 1.0, q: 2.0 };
    let single = check_volume_condition(&tau, &YoungFunction::power(2.0), 1.0, 2f64.sqrt(), &singletons(0, 10_000))?;
    let ratio_1 = single.per_set_margins[1].ratio;
    let ratio_top = single.per_set_margins[10_000].ratio;
    let singleton_growth = ratio_top > 100.0 * ratio_1;
    ok &= singleton_growth && !single.passed;

    let restricted = TauMap::FiniteRestriction { base: Box::new(tau.clone()), k: 10 };
    let fin = certify_min_d(&restricted, &YoungFunction::power(2.0), 1.0, &finite_subsets(10)?)?;
    ok &= fin.min_d_estimate.is_finite();

    let ev = counterexample_suite(CounterexampleKind::Ex2_3, 2.0, Some(1.0), &LADDER)?;
    ok &= ev.diverges;
    let ladder = ladder_table(&ev);
    Ok(Outcome::new(
        ok,
        json!({
            "blocks": reports,
            "singletons": { "d": 2f64.sqrt(), "ratio_at_1": ratio_1, "ratio_at_10000": ratio_top, "diverging": singleton_growth },
            "finite_restriction": { "k": 10, "min_d": fin.min_d_estimate, "passed": fin.passed },
            "counterexample": ev,
        }),
    )?
    .table(t)
    .table(ladder))
}

fn indicators(settings: &QuadratureSettings) -> Result<Outcome> {
    let mut t = Table::new("indicators", &["norm", "params", "mu", "engine", "closed_form", "relative_gap"]);
    let mut worst: f64 = 0.0;
    let line = MeasureSpace::LebesgueLine;
    let gap = |a: f64, b: f64| (a - b).abs() / b.abs();
    for mu in [1e-3, 1.0, 4.0, 1e3] {
        let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, mu)?);
        for phi in [YoungFunction::power(2.0), YoungFunction::llogl(), YoungFunction::exp_minus_one()] {
            let engine = luxemburg_norm(&phi, &f, &line, settings)?.value;
            let closed = indicator_orlicz_norm(&phi, mu);
            worst = worst.max(gap(engine, closed));
            t.push(vec!["orlicz".into(), phi.to_string(), r(mu), r(engine), r(closed), r(gap(engine, closed))]);
        }
        for (p, q) in [(2.0, 1.0), (2.0, 2.0), (3.0, f64::INFINITY)] {
            let engine = lorentz_quasinorm(p, q, &f, &line, settings)?.value;
            let closed = indicator_lorentz_norm(p, q, mu);
            worst = worst.max(gap(engine, closed));
            t.push(vec![
                "lorentz".into(),
                format!("p={p} q={}", r(q)),
                r(mu),
                r(engine),
                r(closed),
                r(gap(engine, closed)),
            ]);
        }
    }
    Ok(Outcome::new(worst <= 1e-6, json!({ "max_relative_gap": worst }))?.table(t))
}

fn nabla2_demo() -> Result<Outcome> {
    let mut t = Table::new("nabla2", &["phi", "expected", "holds", "witness_k", "gamma"]);
    let mut diagnostics = Vec::new();
    let mut ok = true;
    let mut holder = Vec::new();
    let grid: Vec<f64> = (1..=20).map(|k| 2f64.powi(-k)).collect();
    for (phi, expected) in [
        (YoungFunction::power(2.0), true),
        (YoungFunction::exp_minus_one(), true),
        (YoungFunction::linear(), false),
        (YoungFunction::llogl(), false),
    ] {
        let rep = check_nabla2(&phi, &DEFAULT_K_CANDIDATES, &default_grid())?;
        ok &= rep.holds == expected;
        if rep.holds {
            let h = holder_bound_check(&phi, 1.0, None, &grid)?;
            ok &= h.holds && h.final_quantity < 1e-3;
            holder.push(json!({ "phi": phi.to_string(), "report": h }));
        } else if expected {
            let first = rep.failures.first();
            diagnostics.push(Diagnostic {
                level: Level::Warning,
                message: format!(
                    "{phi} fails nabla_2 on the default grid; smallest ratio Phi(kt)/(2k Phi(t)) = {} at t = {}",
                    first.map_or(f64::NAN, |f| f.ratio),
                    first.map_or(f64::NAN, |f| f.t)
                ),
            });
        }
        t.push(vec![
            phi.to_string(),
            expected.to_string(),
            rep.holds.to_string(),
            rep.witness_k.map_or_else(String::new, r),
            rep.gamma.map_or_else(String::new, r),
        ]);
    }
    let mut out = Outcome::new(ok, json!({ "holder": holder }))?.table(t);
    out.diagnostics = diagnostics;
    Ok(out)
}

fn section_5(p: f64, gamma: f64, levels: u32) -> Result<Outcome> {
    let radii: Vec<f64> = (1..=levels as i32).map(|k| 2f64.powi(-k)).collect();
    let rep = continuity_obstruction_demo(p, gamma, &radii)?;
    let mut t = Table::new("witness", &["k", "radius", "level", "closed_form"]);
    let mut exact = true;
    for (k, (radius, level)) in (1..=levels).zip(&rep.ladder) {
        let closed = (gamma * k as f64).exp2();
        exact &= *level == closed;
        t.push(vec![k.to_string(), r(*radius), r(*level), r(closed)]);
    }
    let passed = exact && rep.relative_gap <= 1e-8 && rep.diverges;
    Ok(Outcome::new(passed, &rep)?.table(t))
}
