use serde::{Deserialize, Serialize};

use super::TauMap;
use crate::measure::{FunctionSpec, MeasureSpace};
use crate::norm::{lorentz_quasinorm, luxemburg_norm, QuadratureSettings, Status};
use crate::quadrature::integrate;
use crate::search::fit_slope;
use crate::young::{
    check_nabla2, default_grid, estimate_nabla2_exponent, YoungFunction, DEFAULT_K_CANDIDATES,
};
use crate::{Error, Result};

/// Truncation radii for divergence ladders.
pub const LADDER: [f64; 4] = [1e3, 1e4, 1e5, 1e6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CounterexampleKind {
    #[serde(rename = "ex1")]
    Ex1,
    #[serde(rename = "ex2_3")]
    Ex2_3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderRung {
    #[serde(rename = "R")]
    pub r: f64,
    pub truncated_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceEvidence {
    pub kind: CounterexampleKind,
    pub p: f64,
    pub q: Option<f64>,
    pub function: String,
    pub norm_label: String,
    pub norm: f64,
    pub norm_tolerance: f64,
    pub norm_converged: bool,
    /// Whether the tail of the norm integral converges by the asymptotic test.
    pub tail_certified: bool,
    pub ladder: Vec<LadderRung>,
    /// Slope of the truncated value against `log R`.
    pub log_slope: Option<f64>,
    pub strictly_increasing: bool,
    /// Exact truncated modular at the first rung, for comparison with the
    /// pointwise lower bound used along the ladder.
    pub exact_at_first_rung: Option<f64>,
    pub diverges: bool,
}

/// `2∫₀^R g(x) dx` with `g` given in log form, integrated in `w = log(1 + x)`.
fn symmetric_truncated(ln_g: impl Fn(f64) -> f64, r: f64) -> Result<f64> {
    let settings = QuadratureSettings { relative_tolerance: 1e-12, ..Default::default() };
    let top = r.ln_1p();
    let knots: Vec<f64> = (1..8).map(|i| top * i as f64 / 8.0).collect();
    let h = |w: f64| (ln_g(w.exp_m1()) + w).exp();
    Ok(2.0 * integrate(h, 0.0, top, &knots, &settings)?.value)
}

fn ladder_summary(ladder: &[LadderRung]) -> (Option<f64>, bool) {
    let xs: Vec<f64> = ladder.iter().map(|l| l.r.ln()).collect();
    let ys: Vec<f64> = ladder.iter().map(|l| l.truncated_value).collect();
    let increasing = ys.windows(2).all(|w| w[1] > w[0]);
    (fit_slope(&xs, &ys), increasing)
}

/// Norm in one space, divergence of a truncated modular in another.
pub fn counterexample_suite(
    kind: CounterexampleKind,
    p: f64,
    q: Option<f64>,
    ladder: &[f64],
) -> Result<DivergenceEvidence> {
    if ladder.is_empty() || ladder.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::Argument("ladder radii must be positive and finite".into()));
    }
    let settings = QuadratureSettings::default();
    match kind {
        CounterexampleKind::Ex1 => {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Precondition(format!("ex1 needs 0 < p < 1, got {p}")));
            }
            let f = FunctionSpec::power_log_decay(p, p)?;
            let line = MeasureSpace::LebesgueLine;
            let norm = lorentz_quasinorm(p, 1.0, &f, &line, &settings)?;
            let rungs = ladder
                .iter()
                .map(|&r| {
                    let v = symmetric_truncated(|x| p * f.value_at(x).ln(), r)?;
                    Ok(LadderRung { r, truncated_value: v })
                })
                .collect::<Result<Vec<_>>>()?;
            let (slope, increasing) = ladder_summary(&rungs);
            Ok(DivergenceEvidence {
                kind,
                p,
                q,
                function: f.to_string(),
                norm_label: format!("L^({p},1)"),
                norm: norm.value,
                norm_tolerance: norm.tolerance,
                norm_converged: norm.converged,
                tail_certified: norm.status == Status::Finite,
                diverges: norm.status == Status::Finite
                    && increasing
                    && slope.is_some_and(|s| s > 0.0),
                ladder: rungs,
                log_slope: slope,
                strictly_increasing: increasing,
                exact_at_first_rung: None,
            })
        }
        CounterexampleKind::Ex2_3 => {
            let q = q.ok_or_else(|| Error::Argument("ex2_3 needs q".into()))?;
            if !(q > 0.0 && q < p && p.is_finite()) {
                return Err(Error::Precondition(format!("ex2_3 needs 0 < q < p, got p={p}, q={q}")));
            }
            let f = FunctionSpec::power_log_decay(p, q)?;
            let z = MeasureSpace::CountingIntegers;
            let norm = luxemburg_norm(&YoungFunction::power(p), &f, &z, &settings)?;
            let c = q / p;
            let lower = |x: f64| c.ln() - x.ln_1p() - (3.0 + x).ln().ln();
            let rungs = ladder
                .iter()
                .map(|&r| Ok(LadderRung { r, truncated_value: symmetric_truncated(lower, r)? }))
                .collect::<Result<Vec<_>>>()?;
            let exact = truncated_composed_power(&f, &TauMap::GaussPower { p, q }, q, ladder[0])?;
            if rungs[0].truncated_value > exact * (1.0 + 1e-9) {
                return Err(Error::Inconsistency(format!(
                    "lower bound {} exceeds exact value {exact} at R = {}",
                    rungs[0].truncated_value, ladder[0]
                )));
            }
            let (slope, increasing) = ladder_summary(&rungs);
            Ok(DivergenceEvidence {
                kind,
                p,
                q: Some(q),
                function: f.to_string(),
                norm_label: format!("l^{p}"),
                norm: norm.value,
                norm_tolerance: norm.tolerance,
                norm_converged: norm.converged,
                tail_certified: norm.status == Status::Finite,
                diverges: norm.status == Status::Finite
                    && increasing
                    && slope.is_some_and(|s| s > 0.0),
                ladder: rungs,
                log_slope: slope,
                strictly_increasing: increasing,
                exact_at_first_rung: Some(exact),
            })
        }
    }
}

/// `∫_{|y| <= R} |f(τ(y))|^s dy`, summed over the exact level sets of `τ`.
fn truncated_composed_power(f: &FunctionSpec, tau: &TauMap, s: f64, r: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut k: i64 = 0;
    loop {
        let a = tau.threshold(k);
        if a >= r {
            break;
        }
        let b = tau.threshold(k + 1).min(r);
        total += 2.0 * f.value_at(k as f64).powf(s) * (b - a);
        k += 1;
        if k > 100_000_000 {
            return Err(Error::Evaluation("too many level sets below R".into()));
        }
    }
    Ok(total)
}

/// `|h|⁻¹·{Φ(1/(d|h|))}⁻¹`
pub fn holder_quantity(phi: &YoungFunction, d: f64, h: f64) -> f64 {
    (h * phi.value((d * h).recip())).recip()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderPoint {
    pub h: f64,
    pub quantity: f64,
    /// `quantity / h^{γ-1}`
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderReport {
    pub gamma: f64,
    /// Largest `quantity / h^{γ-1}` on the grid.
    pub constant: f64,
    pub points: Vec<HolderPoint>,
    pub monotone_decreasing: bool,
    pub final_quantity: f64,
    pub holds: bool,
}

/// Evaluates `|h|⁻¹{Φ(1/(d|h|))}⁻¹` against `C·|h|^{γ-1}` for a `∇₂` function.
pub fn holder_bound_check(
    phi: &YoungFunction,
    d: f64,
    gamma: Option<f64>,
    h_grid: &[f64],
) -> Result<HolderReport> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Argument(format!("d must be positive, got {d}")));
    }
    if h_grid.is_empty() || h_grid.iter().any(|h| !(*h > 0.0 && *h < 1.0)) {
        return Err(Error::Argument("h grid must be nonempty and inside (0, 1)".into()));
    }
    let nabla = check_nabla2(phi, &DEFAULT_K_CANDIDATES, &default_grid())?;
    if !nabla.holds {
        return Err(Error::Precondition(format!("{phi} does not satisfy the nabla_2 condition")));
    }
    let gamma = match gamma {
        Some(g) => g,
        None => estimate_nabla2_exponent(phi, &default_grid())?.gamma,
    };
    if !(gamma > 1.0) {
        return Err(Error::Argument(format!("gamma must exceed 1, got {gamma}")));
    }
    let points: Vec<HolderPoint> = h_grid
        .iter()
        .map(|&h| {
            let quantity = holder_quantity(phi, d, h);
            HolderPoint { h, quantity, scaled: quantity / h.powf(gamma - 1.0) }
        })
        .collect();
    let constant = points.iter().map(|pt| pt.scaled).fold(0.0, f64::max);
    let mut by_h: Vec<&HolderPoint> = points.iter().collect();
    by_h.sort_by(|a, b| b.h.total_cmp(&a.h));
    let monotone_decreasing = by_h.windows(2).all(|w| w[1].quantity < w[0].quantity);
    let final_quantity = by_h.last().map_or(f64::NAN, |pt| pt.quantity);
    Ok(HolderReport {
        gamma,
        constant,
        holds: monotone_decreasing && constant.is_finite(),
        points,
        monotone_decreasing,
        final_quantity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub p: f64,
    pub gamma: f64,
    pub lp_norm: f64,
    /// `(2/(1 - γp))^{1/p}`
    pub closed_form: f64,
    pub relative_gap: f64,
    /// `(ε, ess inf of |x|^{-γ} over B(0, ε))`; the levels are unbounded as `ε → 0`.
    pub ladder: Vec<(f64, f64)>,
    pub diverges: bool,
}

/// `|x|^{-γ}χ_{(-1,1)}` lies in `L^p` while its values near the origin exceed every level.
pub fn continuity_obstruction_demo(p: f64, gamma: f64, radii: &[f64]) -> Result<ContinuityReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Argument(format!("p must be positive, got {p}")));
    }
    if !(gamma > 0.0 && gamma * p < 1.0) {
        return Err(Error::Precondition(format!("need 0 < gamma < 1/p, got gamma={gamma}, p={p}")));
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
        return Err(Error::Argument("radii must lie in (0, 1]".into()));
    }
    let f = FunctionSpec::radial_power(gamma, 1.0)?;
    let norm = luxemburg_norm(
        &YoungFunction::power(p),
        &f,
        &MeasureSpace::LebesgueLine,
        &QuadratureSettings::default(),
    )?
    .value;
    let closed = (2.0 / (1.0 - gamma * p)).powf(p.recip());
    let ladder: Vec<(f64, f64)> = radii.iter().map(|&r| (r, (-gamma * r.log2()).exp2())).collect();
    let increasing = ladder.windows(2).all(|w| w[0].0 <= w[1].0 || w[1].1 > w[0].1);
    Ok(ContinuityReport {
        p,
        gamma,
        lp_norm: norm,
        closed_form: closed,
        relative_gap: (norm - closed).abs() / closed,
        diverges: norm.is_finite() && increasing,
        ladder,
    })
}
