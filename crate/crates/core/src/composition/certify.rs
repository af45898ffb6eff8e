use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TauMap;
use crate::measure::{measure_of, FunctionSpec, IntegerSet, MeasurableSet, MeasureSpace};
use crate::norm::{
    direct_modular, lorentz_quasinorm, luxemburg_norm, indicator_orlicz_norm, modular,
    QuadratureSettings,
};
use crate::search::fit_slope;
use crate::young::{check_power_equivalence, default_grid, validate_young, YoungFunction};
use crate::{Error, Result};

/// Relative slack in `ν(τ⁻¹E) <= 1/Φ(1/(d·μ(E)^{1/p}))`.
pub const VOLUME_RTOL: f64 = 1e-12;
/// Log-log slope of the running-max `d_E` above which the family shows
/// unbounded growth.
pub const GROWTH_SLOPE_LIMIT: f64 = 0.05;

const LOG2_D_MAX: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetMargin {
    pub set_id: usize,
    pub mu: f64,
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub nu_preimage: f64,
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub rhs: f64,
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub ratio: f64,
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub required_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub passed: bool,
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub min_d_estimate: f64,
    pub d_tested: Option<f64>,
    pub witness_id: Option<usize>,
    pub witness_set: Option<MeasurableSet>,
    pub family_description: String,
    pub sets_tested: usize,
    pub growth_slope: Option<f64>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub per_set_margins: Vec<SetMargin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Blocks,
    Random,
    Dyadic,
    Singletons,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetFamily {
    pub description: String,
    pub sets: Vec<MeasurableSet>,
}

/// Blocks `{n, ..., m-1}` for `n0 <= n < m <= n_max`, `n0 = 0` or `1`.
pub fn blocks(n_max: i64, include_zero: bool) -> SetFamily {
    let n0 = if include_zero { 0 } else { 1 };
    let mut sets = Vec::new();
    for n in n0..n_max {
        for m in n + 1..=n_max {
            sets.push(MeasurableSet::block(n, m));
        }
    }
    SetFamily { description: format!("blocks {{n..m-1}}, {n0} <= n < m <= {n_max}"), sets }
}

/// Seeded random subsets of `{n0, ..., max_element}` with `1..=max_card` elements.
pub fn random_sets(
    seed: u64,
    draws: usize,
    max_card: usize,
    max_element: i64,
    include_zero: bool,
) -> SetFamily {
    let n0 = if include_zero { 0 } else { 1 };
    let pool = (max_element - n0 + 1).max(0) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..draws)
        .filter(|_| pool > 0)
        .map(|_| {
            let card = rng.gen_range(1..=max_card.min(pool));
            let picks = sample(&mut rng, pool, card);
            MeasurableSet::integers(picks.into_iter().map(|i| n0 + i as i64))
        })
        .collect();
    SetFamily {
        description: format!(
            "{draws} random subsets of {{{n0}..={max_element}}}, at most {max_card} elements, seed {seed}"
        ),
        sets,
    }
}

/// Dyadic intervals `[k·2^l, (k+1)·2^l)` for `-10 <= l <= 10`, `-8 <= k < 8`.
pub fn dyadic_intervals() -> SetFamily {
    let mut sets = Vec::new();
    for l in -10..=10 {
        let w = 2f64.powi(l);
        for k in -8..8 {
            let a = k as f64 * w;
            sets.push(MeasurableSet::interval(a, a + w).expect("finite dyadic endpoints"));
        }
    }
    SetFamily { description: "dyadic intervals, scales 2^-10..2^10".into(), sets }
}

pub fn singletons(from: i64, to: i64) -> SetFamily {
    SetFamily {
        description: format!("singletons {{n}}, {from} <= n <= {to}"),
        sets: (from..=to).map(|n| MeasurableSet::integers([n])).collect(),
    }
}

/// Every nonempty subset of `{1, ..., k}`.
pub fn finite_subsets(k: u32) -> Result<SetFamily> {
    if k == 0 || k > 16 {
        return Err(Error::Argument(format!("finite_subsets needs 1 <= k <= 16, got {k}")));
    }
    let sets = (1u32..1 << k)
        .map(|mask| MeasurableSet::integers((0..k).filter(|i| mask >> i & 1 == 1).map(|i| i as i64 + 1)))
        .collect();
    Ok(SetFamily { description: format!("nonempty subsets of {{1..={k}}}"), sets })
}

impl SetFamily {
    pub fn canonical(kind: FamilyKind, tau: &TauMap, n_max: i64, seed: u64, include_zero: bool) -> Self {
        let zero = include_zero || tau.zero_in_default_family();
        match kind {
            FamilyKind::Blocks => blocks(n_max, zero),
            FamilyKind::Random => random_sets(seed, 500, 50, 200, zero),
            FamilyKind::Dyadic => dyadic_intervals(),
            FamilyKind::Singletons => singletons(if zero { 0 } else { 1 }, n_max),
        }
    }
}

/// `ν(τ⁻¹(E)) <= {Φ(1/(d·μ(E)^{1/p}))}⁻¹` for a map, Young function and exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeCondition {
    pub tau: TauMap,
    pub phi: YoungFunction,
    pub p: f64,
    /// Target Lorentz exponent; when set, `Φ((·)^{1/q})` must be a Young function.
    pub lorentz_q: Option<f64>,
}

struct SetEval {
    mu: f64,
    nu: f64,
    scale: f64,
}

impl VolumeCondition {
    pub fn new(tau: TauMap, phi: YoungFunction, p: f64) -> Self {
        VolumeCondition { tau, phi, p, lorentz_q: None }
    }

    pub fn with_lorentz_q(mut self, q: f64) -> Self {
        self.lorentz_q = Some(q);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.tau.validate()?;
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(Error::Argument(format!("p must be positive, got {}", self.p)));
        }
        let checked = match self.lorentz_q {
            Some(q) => self.phi.power_compose(q)?,
            None => {
                self.phi.check_parameters()?;
                self.phi.clone()
            }
        };
        let report = validate_young(&checked, &default_grid())?;
        if !report.is_valid() {
            return Err(Error::Precondition(format!("{checked} is not a Young function: {report:?}")));
        }
        Ok(())
    }

    /// `{Φ(1/(d·μ^{1/p}))}⁻¹`
    pub fn rhs(&self, d: f64, mu: f64) -> f64 {
        self.phi.value((d * mu.powf(self.p.recip())).recip()).recip()
    }

    fn holds(&self, d: f64, mu: f64, nu: f64) -> bool {
        nu <= self.rhs(d, mu) * (1.0 + VOLUME_RTOL)
    }

    /// Smallest `d >= 1` at which the set satisfies the condition, `∞` if
    /// none up to `2^64`.
    pub fn required_d(&self, mu: f64, nu: f64) -> f64 {
        if nu == 0.0 || self.holds(1.0, mu, nu) {
            return 1.0;
        }
        if !self.holds(LOG2_D_MAX.exp2(), mu, nu) {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (0.0f64, LOG2_D_MAX);
        while hi - lo > 2e-9 {
            let mid = 0.5 * (lo + hi);
            if self.holds(mid.exp2(), mu, nu) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let bracket = hi.exp2();
        let exact = (mu.powf(self.p.recip()) * self.phi.inverse(nu.recip())).recip();
        if exact.is_finite() && exact >= 1.0 && exact <= bracket && self.holds(exact, mu, nu) {
            exact
        } else {
            bracket
        }
    }

    fn prepare(&self, family: &SetFamily) -> Result<Vec<MeasurableSet>> {
        self.validate()?;
        if family.sets.is_empty() {
            return Err(Error::Argument("set family is empty".into()));
        }
        let target = self.tau.codomain();
        if let MeasureSpace::CountingFinite(k) = target {
            let window: MeasurableSet = IntegerSet::block(1, k as i64 + 1).into();
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for e in &family.sets {
                let c = e.intersect(&window)?;
                let key = c.as_integers().map(|s| s.runs().to_vec());
                if !c.is_empty() && seen.insert(key) {
                    out.push(c);
                }
            }
            if out.is_empty() {
                return Err(Error::Argument(format!("no set of the family meets {{1..={k}}}")));
            }
            return Ok(out);
        }
        Ok(family.sets.clone())
    }

    fn evaluate(&self, sets: &[MeasurableSet]) -> Result<Vec<SetEval>> {
        let target = self.tau.codomain();
        sets.par_iter()
            .map(|e| {
                let mu = measure_of(&target, e)?;
                let nu = measure_of(&MeasureSpace::LebesgueLine, &self.tau.preimage(e)?)?;
                if mu == 0.0 && nu > 0.0 {
                    return Err(Error::Nonsingular(format!(
                        "{e} is null but its preimage under {} has measure {nu}",
                        self.tau
                    )));
                }
                let scale = match e {
                    MeasurableSet::Integers(s) => s.sup_abs() as f64 + 1.0,
                    MeasurableSet::Intervals(s) => s.sup_abs() + 1.0,
                };
                Ok(SetEval { mu, nu, scale })
            })
            .collect()
    }

    fn required(&self, ev: &SetEval) -> f64 {
        if ev.mu == 0.0 {
            1.0
        } else {
            self.required_d(ev.mu, ev.nu)
        }
    }

    fn margin(&self, id: usize, ev: &SetEval, d: f64, required_d: f64) -> SetMargin {
        let rhs = if ev.mu == 0.0 { f64::INFINITY } else { self.rhs(d, ev.mu) };
        let ratio = if ev.nu == 0.0 { 0.0 } else { ev.nu / rhs };
        SetMargin { set_id: id, mu: ev.mu, nu_preimage: ev.nu, rhs, ratio, required_d }
    }

    fn power_equivalence_gate(&self, notes: &mut Vec<String>) -> Result<()> {
        if let TauMap::OrliczInverse { phi, p } = &self.tau {
            let g = |t: f64| phi.inverse(t.recip()).powf(-p);
            let eq = check_power_equivalence(g, *p, (1.0, 1e4))?;
            if !eq.holds {
                return Err(Error::Precondition(format!(
                    "t -> Phi^-1(1/t)^-p is not equivalent to t^{p} on (1, 1e4)"
                )));
            }
            notes.push(format!("power equivalence on (1, 1e4): c1 = {}, c2 = {}", eq.c1, eq.c2));
        }
        Ok(())
    }

    /// Checks the condition at a fixed `d >= 1` on every set of the family.
    pub fn check(&self, d: f64, family: &SetFamily) -> Result<CertificationReport> {
        if !(d >= 1.0 && d.is_finite()) {
            return Err(Error::Argument(format!("d must be finite and >= 1, got {d}")));
        }
        let sets = self.prepare(family)?;
        let evals = self.evaluate(&sets)?;
        let margins: Vec<SetMargin> = evals
            .par_iter()
            .enumerate()
            .map(|(i, ev)| self.margin(i, ev, d, self.required(ev)))
            .collect();
        let worst = argmax(margins.iter().map(|m| m.ratio));
        let passed = evals.iter().all(|ev| ev.mu == 0.0 || self.holds(d, ev.mu, ev.nu));
        let min_d = margins.iter().map(|m| m.required_d).fold(1.0, f64::max);
        Ok(CertificationReport {
            passed,
            min_d_estimate: min_d,
            d_tested: Some(d),
            witness_id: worst,
            witness_set: worst.map(|i| sets[i].clone()),
            family_description: family.description.clone(),
            sets_tested: sets.len(),
            growth_slope: growth_slope(&evals, &margins),
            notes: vec![],
            per_set_margins: margins,
        })
    }

    /// Smallest admissible `D` over the family, with a growth-trend test on
    /// the per-set requirements.
    pub fn certify_min_d(&self, family: &SetFamily) -> Result<CertificationReport> {
        let sets = self.prepare(family)?;
        let mut notes = Vec::new();
        self.power_equivalence_gate(&mut notes)?;
        let evals = self.evaluate(&sets)?;
        let required: Vec<f64> = evals
            .par_iter()
            .map(|ev| self.required(ev))
            .collect();
        let witness = argmax(required.iter().copied());
        let min_d = required.iter().copied().fold(1.0, f64::max);
        let margins: Vec<SetMargin> = evals
            .par_iter()
            .enumerate()
            .map(|(i, ev)| self.margin(i, ev, min_d, required[i]))
            .collect();
        let slope = growth_slope(&evals, &margins);
        let growing = slope.is_some_and(|s| s > GROWTH_SLOPE_LIMIT);
        if min_d.is_infinite() {
            notes.push("some set needs d > 2^64".into());
        }
        if growing {
            notes.push(format!(
                "required d grows with set position: log-log slope {:.4} > {GROWTH_SLOPE_LIMIT}",
                slope.unwrap_or(f64::NAN)
            ));
        }
        Ok(CertificationReport {
            passed: min_d.is_finite() && !growing,
            min_d_estimate: min_d,
            d_tested: None,
            witness_id: witness,
            witness_set: witness.map(|i| sets[i].clone()),
            family_description: family.description.clone(),
            sets_tested: sets.len(),
            growth_slope: slope,
            notes,
            per_set_margins: margins,
        })
    }
}

fn argmax(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Slope of `log max{d_E : scale(E) <= s}` against `log s` over the top decade.
fn growth_slope(evals: &[SetEval], margins: &[SetMargin]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> =
        evals.iter().zip(margins).map(|(ev, m)| (ev.scale, m.required_d)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut env: Vec<(f64, f64)> = Vec::new();
    let mut run = 1.0f64;
    for (s, d) in pts {
        run = run.max(d);
        match env.last_mut() {
            Some(last) if last.0 == s => last.1 = run,
            _ => env.push((s, run)),
        }
    }
    let top = env.last()?.0;
    if !env.iter().all(|e| e.1.is_finite()) {
        return None;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        env.iter().filter(|e| e.0 >= top / 10.0).map(|e| (e.0.ln(), e.1.ln())).unzip();
    fit_slope(&xs, &ys)
}

pub fn check_volume_condition(
    tau: &TauMap,
    phi: &YoungFunction,
    p: f64,
    d: f64,
    family: &SetFamily,
) -> Result<CertificationReport> {
    VolumeCondition::new(tau.clone(), phi.clone(), p).check(d, family)
}

pub fn certify_min_d(
    tau: &TauMap,
    phi: &YoungFunction,
    p: f64,
    family: &SetFamily,
) -> Result<CertificationReport> {
    VolumeCondition::new(tau.clone(), phi.clone(), p).certify_min_d(family)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModularBound {
    /// `∫ Φ(|C_τ f|) dν` through the composed distribution function.
    pub modular: f64,
    /// The same integral summed piece by piece over exact preimages.
    pub modular_direct: f64,
    /// `2d·‖f‖_{p,1}`
    pub bound: f64,
    pub weak_norm: f64,
    pub holds: bool,
}

/// Rescales a finite-range `f` so that `‖f‖_{p,∞}` sits just inside `(2d)⁻¹`.
pub fn normalize_for_bound(f: &FunctionSpec, space: &MeasureSpace, p: f64, d: f64) -> Result<FunctionSpec> {
    let settings = QuadratureSettings::default();
    let weak = lorentz_quasinorm(p, f64::INFINITY, f, space, &settings)?.value;
    if weak == 0.0 {
        return Ok(f.clone());
    }
    f.scaled(0.999 / (2.0 * d * weak))
}

/// `∫ Φ(|C_τ f|) dν <= 2d·‖f‖_{L^{p,1}}` for a normalized finite-range `f`.
pub fn modular_bound_check(
    tau: &TauMap,
    phi: &YoungFunction,
    p: f64,
    d: f64,
    f: &FunctionSpec,
) -> Result<ModularBound> {
    let space = tau.codomain();
    f.validate(&space)?;
    if !f.has_finite_range() {
        return Err(Error::Argument(format!("{f} must take finitely many values")));
    }
    let settings = QuadratureSettings::default();
    let weak = lorentz_quasinorm(p, f64::INFINITY, f, &space, &settings)?.value;
    let limit = (2.0 * d).recip();
    if weak > limit * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "weak norm {weak} exceeds 1/(2d) = {limit}; rescale f first"
        )));
    }
    let levels = f.jump_levels(&space)?;
    if !levels.is_empty() {
        let sets = levels
            .iter()
            .map(|&v| f.superlevel_set(&space, v, false))
            .collect::<Result<Vec<_>>>()?;
        let family = SetFamily { description: "superlevel sets".into(), sets };
        let report = check_volume_condition(tau, phi, p, d, &family)?;
        if !report.passed {
            return Err(Error::Precondition(format!(
                "volume condition fails at d = {d} on a superlevel set of f"
            )));
        }
    }
    let composed = FunctionSpec::composed(tau.clone(), f.clone());
    let line = MeasureSpace::LebesgueLine;
    let modular_value = modular(phi, &composed, 1.0, &line, &settings)?.value;
    let modular_direct = direct_modular(phi, &composed, &line, &settings)?.value;
    let bound = 2.0 * d * lorentz_quasinorm(p, 1.0, f, &space, &settings)?.value;
    Ok(ModularBound {
        modular: modular_value,
        modular_direct,
        bound,
        weak_norm: weak,
        holds: modular_value <= bound + 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub nu_preimage: f64,
    /// `‖χ_{τ⁻¹(E)}‖_Φ` from the general norm engine.
    pub engine_norm: f64,
    /// `1/Φ⁻¹(1/ν(τ⁻¹(E)))`
    pub closed_form: f64,
    pub relative_gap: f64,
    /// `‖χ_E‖_{p,1} = μ(E)^{1/p}`
    pub lorentz_norm: f64,
    /// `‖C_τ χ_E‖_Φ / (d·‖χ_E‖_{p,1})`
    pub ratio: f64,
}

/// Norm of `C_τ χ_E = χ_{τ⁻¹(E)}` by the engine and by the indicator formula.
pub fn indicator_sharpness_check(
    tau: &TauMap,
    phi: &YoungFunction,
    p: f64,
    d: f64,
    e: &MeasurableSet,
) -> Result<SharpnessReport> {
    tau.validate()?;
    let space = tau.codomain();
    let mu = measure_of(&space, e)?;
    if !mu.is_finite() {
        return Err(Error::Argument(format!("{e} has infinite measure")));
    }
    let pre = tau.preimage(e)?;
    let line = MeasureSpace::LebesgueLine;
    let nu = measure_of(&line, &pre)?;
    let engine = luxemburg_norm(phi, &FunctionSpec::indicator(pre), &line, &QuadratureSettings::default())?.value;
    let closed = indicator_orlicz_norm(phi, nu);
    let gap = if engine == closed { 0.0 } else { (engine - closed).abs() / closed.abs().max(engine.abs()) };
    let lorentz_norm = mu.powf(p.recip());
    let ratio = if engine == 0.0 { 0.0 } else { engine / (d * lorentz_norm) };
    Ok(SharpnessReport { nu_preimage: nu, engine_norm: engine, closed_form: closed, relative_gap: gap, lorentz_norm, ratio })
}
