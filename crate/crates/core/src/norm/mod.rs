//! Orlicz modular and Luxemburg norm, Lorentz quasi-norm, and the identities
//! relating them.

use std::cell::RefCell;

use serde::Serialize;

use crate::measure::{FunctionSpec, MeasurableSet, MeasureSpace};
use crate::quadrature::{integrate, integrate_half_line, Integral};
use crate::young::YoungFunction;
use crate::{Error, Result};

mod tails;

pub use crate::quadrature::{QuadratureSettings, Transform};
pub use tails::{lorentz_diverges, modular_diverges, weak_lorentz_infinite};

/// Terms summed explicitly on each side of the origin before the integral
/// tail estimate takes over on counting spaces.
pub const SUM_TERMS: i64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Finite,
    Infinite,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub value: f64,
    pub status: Status,
    /// Absolute error estimate.
    #[serde(serialize_with = "crate::report::ext::serialize")]
    pub tolerance: f64,
    /// Number of explicitly summed terms per side, when a tail was estimated.
    pub truncation: Option<i64>,
    pub converged: bool,
}

impl Estimate {
    fn zero() -> Self {
        Estimate { value: 0.0, status: Status::Zero, tolerance: 0.0, truncation: None, converged: true }
    }

    fn infinite() -> Self {
        Estimate {
            value: f64::INFINITY,
            status: Status::Infinite,
            tolerance: 0.0,
            truncation: None,
            converged: true,
        }
    }

    fn from_value(value: f64, tolerance: f64, converged: bool) -> Self {
        let status = if value == f64::INFINITY {
            Status::Infinite
        } else if value == 0.0 {
            Status::Zero
        } else {
            Status::Finite
        };
        Estimate { value, status, tolerance, truncation: None, converged }
    }

    fn from_integral(i: Integral) -> Self {
        Self::from_value(i.value, i.abs_error, i.converged)
    }
}

/// Collects the first error raised inside a quadrature callback.
#[derive(Default)]
struct Trap(RefCell<Option<Error>>);

impl Trap {
    fn catch(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish<T>(&self, r: Result<T>) -> Result<T> {
        match self.0.borrow_mut().take() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

fn check_inputs(f: &FunctionSpec, space: &MeasureSpace, settings: &QuadratureSettings) -> Result<()> {
    settings.validate()?;
    f.validate(space)
}

/// `∫ Φ(|f|/λ) dμ`: summation on counting spaces, the layer-cake integral
/// `∫₀^∞ φ(t)·μ_{f/λ}(t) dt` on the line.
pub fn modular(
    phi: &YoungFunction,
    f: &FunctionSpec,
    lambda: f64,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Argument(format!("lambda must be positive, got {lambda}")));
    }
    check_inputs(f, space, settings)?;
    if space.is_counting() {
        modular_sum(phi, f, lambda, space, settings)
    } else {
        layer_cake_modular(phi, f, lambda, space, settings)
    }
}

/// Layer-cake route `∫₀^∞ φ(t)·μ({|f| > λt}) dt` on any space.
pub fn layer_cake_modular(
    phi: &YoungFunction,
    f: &FunctionSpec,
    lambda: f64,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if modular_diverges(phi, f, lambda, space)? {
        return Ok(Estimate::infinite());
    }
    let sup = f.sup_abs(space)? / lambda;
    if sup == 0.0 {
        return Ok(Estimate::zero());
    }
    let knots: Vec<f64> = f.jump_levels(space)?.iter().map(|v| v / lambda).collect();
    let trap = Trap::default();
    let result = if f.has_finite_range() {
        let g = |t: f64| {
            let m = trap.catch(f.distribution(space, lambda * t));
            if m == 0.0 {
                0.0
            } else {
                phi.slope(t) * m
            }
        };
        integrate(g, 0.0, sup, &knots, settings)
    } else {
        let ln_lambda = lambda.ln();
        let h = |w: f64| {
            let lm = trap.catch(f.ln_distribution(space, ln_lambda + w));
            if lm == f64::NEG_INFINITY {
                0.0
            } else {
                (phi.ln_slope(w) + lm + w).exp()
            }
        };
        let mut all = knots;
        if sup.is_finite() {
            all.push(sup);
        }
        integrate_half_line(h, &all, settings)
    };
    trap.finish(result).map(Estimate::from_integral)
}

fn modular_sum(
    phi: &YoungFunction,
    f: &FunctionSpec,
    lambda: f64,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if modular_diverges(phi, f, lambda, space)? {
        return Ok(Estimate::infinite());
    }
    match (f, space) {
        (FunctionSpec::PowerLogDecay { .. }, MeasureSpace::CountingFinite(k)) => {
            if *k > 100_000_000 {
                return Err(Error::Argument(format!("finite space of size {k} is too large to sum")));
            }
            let v: f64 = (1..=*k)
                .rev()
                .map(|n| phi.value(f.value_at(n as f64) / lambda))
                .sum();
            Ok(Estimate::from_value(v, 0.0, true))
        }
        (FunctionSpec::PowerLogDecay { .. }, MeasureSpace::CountingIntegers) => {
            let term = |x: f64| phi.value(f.value_at(x) / lambda);
            let mut partial: f64 = (1..=SUM_TERMS).rev().map(|n| term(n as f64)).sum();
            partial = 2.0 * partial + term(0.0);
            let ln_lambda = lambda.ln();
            let tail_from = |a: f64| -> Result<Integral> {
                let h = |w: f64| (phi.ln_value_exp(f.ln_abs_shifted(a, w) - ln_lambda) + w).exp();
                integrate_half_line(h, &[1.0], settings)
            };
            let n = SUM_TERMS as f64;
            let upper = tail_from(n)?;
            let lower = tail_from(n + 1.0)?;
            let tail = upper.value - 0.5 * term(n);
            let err = 0.5 * (upper.value - lower.value) + upper.abs_error + lower.abs_error;
            let mut e = Estimate::from_value(partial + 2.0 * tail, 2.0 * err, upper.converged && lower.converged);
            e.truncation = Some(SUM_TERMS);
            Ok(e)
        }
        _ => Ok(Estimate::from_value(finite_range_sum(phi, f, lambda, space)?, 0.0, true)),
    }
}

/// `Σ Φ(|v_i|/λ)·μ(E_i)` for functions with finitely many values.
fn finite_range_sum(
    phi: &YoungFunction,
    f: &FunctionSpec,
    lambda: f64,
    space: &MeasureSpace,
) -> Result<f64> {
    let pieces: Vec<(f64, f64)> = match f {
        FunctionSpec::Simple { pieces } => pieces
            .iter()
            .map(|pc| Ok((pc.value, crate::measure::measure_of(space, &pc.set)?)))
            .collect::<Result<_>>()?,
        FunctionSpec::Indicator { set } => vec![(1.0, crate::measure::measure_of(space, set)?)],
        FunctionSpec::Composed { tau, inner } => {
            let inner_pieces: Vec<(f64, MeasurableSet)> = match inner.as_ref() {
                FunctionSpec::Simple { pieces } => {
                    pieces.iter().map(|pc| (pc.value, pc.set.clone())).collect()
                }
                FunctionSpec::Indicator { set } => vec![(1.0, set.clone())],
                _ => {
                    return Err(Error::Argument(format!(
                        "no direct summation for {f}; use the layer-cake route"
                    )))
                }
            };
            inner_pieces
                .into_iter()
                .map(|(v, e)| Ok((v, crate::measure::measure_of(space, &tau.preimage(&e)?)?)))
                .collect::<Result<_>>()?
        }
        _ => return Err(Error::Argument(format!("{f} does not have finitely many values"))),
    };
    Ok(pieces
        .into_iter()
        .filter(|(v, m)| *v != 0.0 && *m > 0.0)
        .map(|(v, m)| phi.value(v.abs() / lambda) * m)
        .sum())
}

/// `∫ Φ(|f|) dμ` evaluated pointwise, without the layer-cake formula.
pub fn direct_modular(
    phi: &YoungFunction,
    f: &FunctionSpec,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    check_inputs(f, space, settings)?;
    if f.has_finite_range() {
        return Ok(Estimate::from_value(finite_range_sum(phi, f, 1.0, space)?, 0.0, true));
    }
    if space.is_counting() {
        return modular_sum(phi, f, 1.0, space, settings);
    }
    if modular_diverges(phi, f, 1.0, space)? {
        return Ok(Estimate::infinite());
    }
    let r = match f {
        FunctionSpec::PowerLogDecay { .. } | FunctionSpec::RadialPower { .. } => {
            let knot = match f {
                FunctionSpec::RadialPower { radius, .. } => *radius,
                _ => 1.0,
            };
            let h = |w: f64| (phi.ln_value_exp(f.ln_abs_shifted(0.0, w)) + w).exp();
            integrate_half_line(h, &[knot], settings)?
        }
        _ => return Err(Error::Argument(format!("no pointwise route for {f}"))),
    };
    Ok(Estimate::from_value(2.0 * r.value, 2.0 * r.abs_error, r.converged))
}

/// Luxemburg norm `inf { λ > 0 : ∫ Φ(|f|/λ) dμ <= 1 }`.
pub fn luxemburg_norm(
    phi: &YoungFunction,
    f: &FunctionSpec,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    check_inputs(f, space, settings)?;
    if f.sup_abs(space)? == 0.0 || f.distribution(space, 0.0)? == 0.0 {
        return Ok(Estimate::zero());
    }
    if tails::diverges_at_every_scale(phi, f, space) {
        return Ok(Estimate::infinite());
    }
    let fits = |lambda: f64| -> Result<bool> { Ok(modular(phi, f, lambda, space, settings)?.value <= 1.0) };
    let (mut lo, mut hi);
    if fits(1.0)? {
        hi = 1.0;
        lo = 0.25;
        let mut steps = 0;
        while fits(lo)? {
            hi = lo;
            lo *= 0.25;
            steps += 1;
            if steps == 60 {
                return Ok(Estimate::zero());
            }
        }
    } else {
        lo = 1.0;
        hi = 4.0;
        let mut steps = 0;
        while !fits(hi)? {
            lo = hi;
            hi *= 4.0;
            steps += 1;
            if steps == 60 {
                return Ok(Estimate::infinite());
            }
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 <= 1e-13 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let tolerance = (hi - lo).max(hi * settings.relative_tolerance);
    Ok(Estimate::from_value(hi, tolerance, true))
}

/// Lorentz quasi-norm `(∫₀^∞ [t·μ_f(t)^{1/p}]^q dt/t)^{1/q}`, or
/// `sup_t t·μ_f(t)^{1/p}` when `q = ∞`.
pub fn lorentz_quasinorm(
    p: f64,
    q: f64,
    f: &FunctionSpec,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Argument(format!("p must be positive and finite, got {p}")));
    }
    if !(q > 0.0) {
        return Err(Error::Argument(format!("q must be positive or inf, got {q}")));
    }
    check_inputs(f, space, settings)?;
    if f.sup_abs(space)? == 0.0 || f.distribution(space, 0.0)? == 0.0 {
        return Ok(Estimate::zero());
    }
    if q.is_infinite() {
        return weak_quasinorm(p, f, space);
    }
    if lorentz_diverges(p, q, f, space)? {
        return Ok(Estimate::infinite());
    }
    let sup = f.sup_abs(space)?;
    let mut knots = f.jump_levels(space)?;
    if sup.is_finite() {
        knots.push(sup);
    }
    let trap = Trap::default();
    let h = |w: f64| {
        let lm = trap.catch(f.ln_distribution(space, w));
        if lm == f64::NEG_INFINITY {
            0.0
        } else {
            (q * w + q / p * lm).exp()
        }
    };
    let r = trap.finish(integrate_half_line(h, &knots, settings))?;
    if r.value == f64::INFINITY {
        return Ok(Estimate::infinite());
    }
    let value = r.value.powf(q.recip());
    let tolerance = value * (r.abs_error / r.value) / q;
    Ok(Estimate::from_value(value, tolerance, r.converged))
}

fn weak_quasinorm(p: f64, f: &FunctionSpec, space: &MeasureSpace) -> Result<Estimate> {
    if weak_lorentz_infinite(p, f, space)? {
        return Ok(Estimate::infinite());
    }
    let levels = f.jump_levels(space)?;
    let mut best: f64 = 0.0;
    for &v in &levels {
        best = best.max(v * f.distribution_at_least(space, v)?.powf(p.recip()));
    }
    if f.has_finite_range() {
        return Ok(Estimate::from_value(best, 0.0, true));
    }
    let ln_psi = |s: f64| -> Result<f64> { Ok(s + f.ln_distribution(space, s)? / p) };
    let top = match f.sup_abs(space)? {
        s if s.is_finite() => s.ln(),
        _ => levels.last().map_or(0.0, |l| l.ln()) + 350.0,
    };
    let n = 4096;
    let span = 700.0;
    let grid: Vec<f64> = (0..n).map(|i| top - span + span * i as f64 / (n - 1) as f64).collect();
    let mut vals = Vec::with_capacity(n);
    for &s in &grid {
        vals.push(ln_psi(s)?);
    }
    let (i_best, _) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let lo = grid[i_best.saturating_sub(1)];
    let hi = grid[(i_best + 1).min(n - 1)];
    let trap = Trap::default();
    let (_, refined) = crate::search::golden_max(|s| trap.catch(ln_psi(s)), lo, hi, 1e-12);
    trap.finish(Ok(()))?;
    let best = best.max(refined.max(vals[i_best]).exp());
    Ok(Estimate::from_value(best, 0.0, true))
}

/// `‖χ_E‖_Φ = 1 / Φ⁻¹(1/μ(E))`.
pub fn indicator_orlicz_norm(phi: &YoungFunction, mu: f64) -> f64 {
    if mu == 0.0 {
        0.0
    } else {
        phi.inverse(mu.recip()).recip()
    }
}

/// `‖χ_E‖_{p,q} = q^{-1/q}·μ(E)^{1/p}`, with `q^{-1/q} = 1` at `q = ∞`.
pub fn indicator_lorentz_norm(p: f64, q: f64, mu: f64) -> f64 {
    let c = if q.is_infinite() { 1.0 } else { q.powf(-q.recip()) };
    c * mu.powf(p.recip())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerCakeReport {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_gap: f64,
}

/// Compares the pointwise modular with the layer-cake integral.
pub fn layer_cake_check(
    phi: &YoungFunction,
    f: &FunctionSpec,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<LayerCakeReport> {
    let lhs = direct_modular(phi, f, space, settings)?.value;
    check_inputs(f, space, settings)?;
    let rhs = layer_cake_modular(phi, f, 1.0, space, settings)?.value;
    if lhs.is_infinite() != rhs.is_infinite() {
        return Err(Error::Inconsistency(format!(
            "direct modular {lhs} vs layer-cake {rhs} for {f}"
        )));
    }
    let relative_gap = if lhs.is_infinite() || lhs == rhs {
        0.0
    } else {
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
    };
    Ok(LayerCakeReport { lhs, rhs, relative_gap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    /// `‖f‖_{p,q}`
    pub lorentz_lhs: f64,
    /// `‖|f|^q‖_{p/q,1}^{1/q}`
    pub lorentz_rhs: f64,
    pub lorentz_gap: f64,
    /// `‖f‖_Φ`
    pub orlicz_lhs: f64,
    /// `‖|f|^q‖_{Φ((·)^{1/q})}^{1/q}`
    pub orlicz_rhs: f64,
    pub orlicz_gap: f64,
    pub holds: bool,
}

pub const SCALING_TOLERANCE: f64 = 1e-6;

fn rel_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Evaluates both sides of the `|f|^q` rescaling identities for the
/// Lorentz and Orlicz norms.
pub fn scaling_identity_check(
    p: f64,
    q: f64,
    phi: &YoungFunction,
    f: &FunctionSpec,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<ScalingReport> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Argument(format!("q must be positive and finite, got {q}")));
    }
    let g = f.abs_pow(q)?;
    let lorentz_lhs = lorentz_quasinorm(p, q, f, space, settings)?.value;
    let lorentz_rhs = lorentz_quasinorm(p / q, 1.0, &g, space, settings)?.value.powf(q.recip());
    let orlicz_lhs = luxemburg_norm(phi, f, space, settings)?.value;
    let composed = phi.power_compose(q)?;
    let orlicz_rhs = luxemburg_norm(&composed, &g, space, settings)?.value.powf(q.recip());
    let lorentz_gap = rel_gap(lorentz_lhs, lorentz_rhs);
    let orlicz_gap = rel_gap(orlicz_lhs, orlicz_rhs);
    Ok(ScalingReport {
        lorentz_lhs,
        lorentz_rhs,
        lorentz_gap,
        orlicz_lhs,
        orlicz_rhs,
        orlicz_gap,
        holds: lorentz_gap <= SCALING_TOLERANCE && orlicz_gap <= SCALING_TOLERANCE,
    })
}

/// `‖f‖_{p,q2} / ‖f‖_{p,q1}` for `q1 <= q2`.
pub fn embedding_ratio(
    p: f64,
    q1: f64,
    q2: f64,
    f: &FunctionSpec,
    space: &MeasureSpace,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(q1 <= q2) {
        return Err(Error::Argument(format!("need q1 <= q2, got {q1} > {q2}")));
    }
    let a = lorentz_quasinorm(p, q1, f, space, settings)?.value;
    let b = lorentz_quasinorm(p, q2, f, space, settings)?.value;
    if a == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Degenerate(format!("quasi-norms {a} and {b} give no finite ratio")));
    }
    Ok(b / a)
}

#[cfg(test)]
mod tests;
