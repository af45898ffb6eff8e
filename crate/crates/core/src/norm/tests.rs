use super::*;
use crate::measure::{corpus, FunctionSpec, MeasurableSet, MeasureSpace};
use crate::young::YoungFunction;

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * b.abs().max(f64::MIN_POSITIVE)
}

fn s() -> QuadratureSettings {
    QuadratureSettings::default()
}

const LINE: MeasureSpace = MeasureSpace::LebesgueLine;

#[test]
fn indicator_of_unit_interval_llogl() {
    let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, 1.0).unwrap());
    let n = luxemburg_norm(&YoungFunction::llogl(), &f, &LINE, &s()).unwrap();
    assert!(close(n.value, 1.3232749164678430, 1e-9), "{}", n.value);
    assert!(close(indicator_orlicz_norm(&YoungFunction::llogl(), 1.0), 1.3232749164678430, 1e-12));
}

#[test]
fn indicator_closed_forms_power() {
    for mu in [1e-3, 1.0, 4.0, 1e3] {
        let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, mu).unwrap());
        let phi = YoungFunction::power(2.0);
        let n = luxemburg_norm(&phi, &f, &LINE, &s()).unwrap().value;
        assert!(close(n, mu.sqrt(), 1e-9), "mu={mu}: {n}");
        for (p, q) in [(2.0, 1.0), (2.0, 2.0), (3.0, f64::INFINITY)] {
            let l = lorentz_quasinorm(p, q, &f, &LINE, &s()).unwrap().value;
            assert!(close(l, indicator_lorentz_norm(p, q, mu), 1e-9), "mu={mu} p={p} q={q}: {l}");
        }
    }
}

#[test]
fn counting_indicator() {
    let f = FunctionSpec::indicator(MeasurableSet::block(0, 4));
    let n = luxemburg_norm(&YoungFunction::power(2.0), &f, &MeasureSpace::CountingIntegers, &s()).unwrap();
    assert!(close(n.value, 2.0, 1e-10));
}

#[test]
fn zero_function() {
    let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, 0.0).unwrap());
    let n = luxemburg_norm(&YoungFunction::power(2.0), &f, &LINE, &s()).unwrap();
    assert_eq!(n.status, Status::Zero);
    assert_eq!(lorentz_quasinorm(2.0, 1.0, &f, &LINE, &s()).unwrap().value, 0.0);
}

#[test]
fn lorentz_norm_of_first_counterexample() {
    let f = FunctionSpec::power_log_decay(0.5, 0.5).unwrap();
    let n = lorentz_quasinorm(0.5, 1.0, &f, &LINE, &s()).unwrap();
    assert_eq!(n.status, Status::Finite);
    assert!(n.converged);
    assert!(close(n.value, 7.0438458011257011, 1e-7), "{}", n.value);
    let m = modular(&YoungFunction::power(0.5), &f, 1.0, &LINE, &s()).unwrap();
    assert_eq!(m.status, Status::Infinite);
}

#[test]
fn sequence_norm_of_second_counterexample() {
    let f = FunctionSpec::power_log_decay(2.0, 1.0).unwrap();
    let z = MeasureSpace::CountingIntegers;
    let m = modular(&YoungFunction::power(2.0), &f, 1.0, &z, &s()).unwrap();
    assert!(close(m.value, 2.9474683041735815, 1e-9), "{}", m.value);
    assert_eq!(m.truncation, Some(SUM_TERMS));
    let n = luxemburg_norm(&YoungFunction::power(2.0), &f, &z, &s()).unwrap();
    assert!(close(n.value, 1.7168192403900830, 1e-8), "{}", n.value);
}

#[test]
fn diagonal_lorentz_is_scaled_lebesgue_norm() {
    let f = FunctionSpec::power_log_decay(1.0, 1.0).unwrap();
    for p in [1.5, 2.0, 3.0] {
        let lp = luxemburg_norm(&YoungFunction::power(p), &f, &LINE, &s()).unwrap().value;
        let lpp = lorentz_quasinorm(p, p, &f, &LINE, &s()).unwrap().value;
        assert!(close(lpp, p.powf(-1.0 / p) * lp, 1e-7), "p={p}: {lpp} vs {lp}");
    }
}

#[test]
fn radial_power_norms() {
    let f = FunctionSpec::radial_power(0.25, 1.0).unwrap();
    let n = luxemburg_norm(&YoungFunction::power(2.0), &f, &LINE, &s()).unwrap().value;
    assert!(close(n, 2.0, 1e-9), "{n}");
    let g = FunctionSpec::radial_power(0.5, 1.0).unwrap();
    assert_eq!(luxemburg_norm(&YoungFunction::power(2.0), &g, &LINE, &s()).unwrap().status, Status::Infinite);
    let w = lorentz_quasinorm(2.0, f64::INFINITY, &g, &LINE, &s()).unwrap().value;
    assert!(close(w, 2f64.sqrt(), 1e-9), "{w}");
}

#[test]
fn weak_norm_of_decaying_function() {
    let f = FunctionSpec::power_log_decay(1.0, 1.0).unwrap();
    let w = lorentz_quasinorm(1.0, f64::INFINITY, &f, &LINE, &s()).unwrap();
    assert_eq!(w.status, Status::Finite);
    let strong = lorentz_quasinorm(1.0, 2.0, &f, &LINE, &s()).unwrap();
    assert!(strong.value.is_finite());
    assert_eq!(lorentz_quasinorm(0.5, f64::INFINITY, &f, &LINE, &s()).unwrap().status, Status::Infinite);
}

#[test]
fn layer_cake_on_simple_corpus() {
    for f in corpus::simple_on_line(7, 10) {
        for phi in [YoungFunction::power(2.0), YoungFunction::llogl(), YoungFunction::exp_minus_one()] {
            let r = layer_cake_check(&phi, &f, &LINE, &s()).unwrap();
            assert!(r.relative_gap <= 1e-9, "{phi} {f}: {r:?}");
        }
    }
}

#[test]
fn layer_cake_on_decaying_function() {
    let f = FunctionSpec::power_log_decay(1.0, 1.0).unwrap();
    let r = layer_cake_check(&YoungFunction::power(2.0), &f, &LINE, &s()).unwrap();
    assert!(r.relative_gap <= 1e-7, "{r:?}");
}

#[test]
fn scaling_identities_on_simple_function() {
    let f = corpus::simple_on_line(3, 1).remove(0);
    let r = scaling_identity_check(3.0, 2.0, &YoungFunction::llogl(), &f, &LINE, &s()).unwrap();
    assert!(r.orlicz_gap <= 1e-8, "{r:?}");
    assert!(close(r.lorentz_rhs / r.lorentz_lhs, 2f64.sqrt(), 1e-8), "{r:?}");
    assert!(!r.holds);
}

#[test]
fn embedding_ratio_of_indicator() {
    let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, 2.0).unwrap());
    let r = embedding_ratio(2.0, 1.0, 2.0, &f, &LINE, &s()).unwrap();
    assert!(close(r, 2f64.powf(-0.5), 1e-9));
    assert!(embedding_ratio(2.0, 2.0, 1.0, &f, &LINE, &s()).is_err());
}

#[test]
fn capped_young_function_diverges() {
    let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, 1.0).unwrap());
    let phi = YoungFunction::power(2.0).with_domain_cap(0.5);
    assert_eq!(modular(&phi, &f, 1.0, &LINE, &s()).unwrap().status, Status::Infinite);
    let n = luxemburg_norm(&phi, &f, &LINE, &s()).unwrap().value;
    assert!(close(n, 2.0, 1e-9), "{n}");
}

#[test]
fn argument_errors() {
    let f = FunctionSpec::power_log_decay(1.0, 1.0).unwrap();
    assert!(modular(&YoungFunction::power(2.0), &f, 0.0, &LINE, &s()).is_err());
    assert!(lorentz_quasinorm(0.0, 1.0, &f, &LINE, &s()).is_err());
    assert!(lorentz_quasinorm(1.0, -1.0, &f, &LINE, &s()).is_err());
}
