use serde::Serialize;

use super::YoungFunction;
use crate::search::log_grid;
use crate::{Error, Result};

pub const DEFAULT_K_CANDIDATES: [f64; 5] = [1.5, 2.0, 4.0, 8.0, 16.0];

const CONVEXITY_RTOL: f64 = 1e-12;
const NABLA2_RTOL: f64 = 1e-12;
const ONEIL_SLACK: f64 = 1e-8;

/// 200 log-spaced points on `[1e-6, 1e6]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 200)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Argument("grid is empty".into()));
    }
    if grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Argument("grid points must be positive and finite".into()));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Argument("grid must be sorted".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub passed: bool,
    pub first_violation: Option<f64>,
}

impl ConditionCheck {
    fn from_violation(v: Option<f64>) -> Self {
        ConditionCheck { passed: v.is_none(), first_violation: v }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub positivity: ConditionCheck,
    pub convexity: ConditionCheck,
    pub vanishes_at_zero: ConditionCheck,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.positivity.passed && self.convexity.passed && self.vanishes_at_zero.passed
    }
}

/// Positivity, discrete convexity and vanishing at the origin, on `grid`.
pub fn validate_young(phi: &YoungFunction, grid: &[f64]) -> Result<ValidityReport> {
    check_grid(grid)?;
    let positivity = grid.iter().copied().find(|&t| !(phi.value(t) > 0.0));

    let mut pts = Vec::with_capacity(grid.len() + 1);
    pts.push(0.0);
    pts.extend_from_slice(grid);
    pts.dedup();
    let vals: Vec<f64> = pts.iter().map(|&t| phi.value(t)).collect();
    let above = |v: f64, bound: f64| v > bound + CONVEXITY_RTOL * bound.abs() + 1e-300;
    let mut convexity = None;
    for i in 0..pts.len() - 1 {
        let (a, c) = (pts[i], pts[i + 1]);
        let (fa, fc) = (vals[i], vals[i + 1]);
        let m = a + 0.5 * (c - a);
        if fc.is_finite() && above(phi.value(m), 0.5 * (fa + fc)) {
            convexity = Some(m);
            break;
        }
        if i + 2 < pts.len() {
            let (b, fb) = (c, fc);
            let (c, fc) = (pts[i + 2], vals[i + 2]);
            if fc.is_finite() && above(fb, fa + (fc - fa) * (b - a) / (c - a)) {
                convexity = Some(b);
                break;
            }
        }
    }

    let vanishing = if phi.value(0.0) != 0.0 {
        Some(0.0)
    } else {
        let head = phi.value(grid[0]);
        let mut prev = head;
        let mut bad = None;
        let mut eps = grid[0];
        for _ in 0..12 {
            eps /= 10.0;
            let v = phi.value(eps);
            if v > prev {
                bad = Some(eps);
                break;
            }
            prev = v;
        }
        if bad.is_none() && prev > 1e-3 * head {
            bad = Some(eps);
        }
        bad
    };

    Ok(ValidityReport {
        positivity: ConditionCheck::from_violation(positivity),
        convexity: ConditionCheck::from_violation(convexity),
        vanishes_at_zero: ConditionCheck::from_violation(vanishing),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Nabla2Failure {
    pub k: f64,
    pub t: f64,
    /// `Φ(kt) / (2k·Φ(t))`; the condition needs this to be at least 1.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Nabla2Report {
    pub holds: bool,
    pub witness_k: Option<f64>,
    pub gamma: Option<f64>,
    pub constant: Option<f64>,
    pub test_grid: Vec<f64>,
    /// First failing grid point for each rejected candidate.
    pub failures: Vec<Nabla2Failure>,
}

fn nabla2_failure(phi: &YoungFunction, k: f64, grid: &[f64]) -> Option<Nabla2Failure> {
    let l2k = (2.0 * k).ln();
    let slack = NABLA2_RTOL.ln_1p();
    grid.iter().find_map(|&t| {
        let lhs = l2k + phi.ln_value(t);
        let rhs = phi.ln_value(k * t);
        let ok = lhs <= rhs + slack || (lhs.is_infinite() && lhs == rhs);
        (!ok).then(|| Nabla2Failure { k, t, ratio: (rhs - lhs).exp() })
    })
}

/// First `k` among the candidates with `2k·Φ(t) <= Φ(kt)` on the whole grid.
pub fn check_nabla2(phi: &YoungFunction, k_candidates: &[f64], grid: &[f64]) -> Result<Nabla2Report> {
    check_grid(grid)?;
    if k_candidates.is_empty() || k_candidates.iter().any(|k| !(*k > 1.0 && k.is_finite())) {
        return Err(Error::Argument("k candidates must be finite and > 1".into()));
    }
    let mut failures = Vec::new();
    for &k in k_candidates {
        match nabla2_failure(phi, k, grid) {
            Some(f) => failures.push(f),
            None => {
                let est = exponent_scan(phi, k, grid);
                return Ok(Nabla2Report {
                    holds: true,
                    witness_k: Some(k),
                    gamma: Some(est.gamma),
                    constant: Some(est.constant),
                    test_grid: grid.to_vec(),
                    failures,
                });
            }
        }
    }
    Ok(Nabla2Report {
        holds: false,
        witness_k: None,
        gamma: None,
        constant: None,
        test_grid: grid.to_vec(),
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub gamma: f64,
    pub constant: f64,
}

/// Largest `γ` (to bisection precision) for which `Φ(t)/t^γ <= C·Φ(s)/s^γ`
/// over grid pairs `t < s` holds with the constant found at the exponent
/// `1 + log 2 / log k` guaranteed by the ∇₂ condition with witness `k`.
pub fn estimate_nabla2_exponent(phi: &YoungFunction, grid: &[f64]) -> Result<ExponentEstimate> {
    check_grid(grid)?;
    let report = check_nabla2(phi, &DEFAULT_K_CANDIDATES, &default_grid())?;
    let k = report.witness_k.ok_or_else(|| {
        Error::Precondition(format!("{phi} does not satisfy the nabla-2 condition"))
    })?;
    Ok(exponent_scan(phi, k, grid))
}

fn exponent_scan(phi: &YoungFunction, k: f64, grid: &[f64]) -> ExponentEstimate {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .map(|&t| (t.ln(), phi.ln_value(t)))
        .filter(|(_, l)| l.is_finite())
        .collect();
    let max_ratio = |gamma: f64| {
        let mut run = f64::NEG_INFINITY;
        let mut best = f64::NEG_INFINITY;
        for &(lt, lp) in &pts {
            let l = lp - gamma * lt;
            best = best.max(run - l);
            run = run.max(l);
        }
        best.exp()
    };
    let floor = 1.0 + 2f64.ln() / k.ln();
    let target = max_ratio(floor).max(1.0) * (1.0 + 1e-9);
    let mut lo = floor;
    let mut step = 1.0;
    let mut hi = floor + step;
    while max_ratio(hi) <= target {
        lo = hi;
        step *= 2.0;
        hi += step;
        if hi > 1e3 {
            return ExponentEstimate { gamma: lo, constant: max_ratio(lo).max(1.0) };
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if max_ratio(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ExponentEstimate { gamma: lo, constant: max_ratio(lo).max(1.0) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneilPoint {
    pub t: f64,
    pub inverse: f64,
    pub conjugate_inverse: f64,
    pub product: f64,
    /// `product / t`, which should lie in `[1, 2]`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneilReport {
    pub holds: bool,
    pub points: Vec<OneilPoint>,
    pub min_ratio: f64,
    pub min_ratio_at: f64,
    pub max_ratio: f64,
    pub max_ratio_at: f64,
}

/// `t <= Φ⁻¹(t)·Φ̃⁻¹(t) <= 2t` on the grid, with `1e-8` absolute slack.
pub fn check_oneil(phi: &YoungFunction, grid: &[f64]) -> Result<OneilReport> {
    check_grid(grid)?;
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let inverse = phi.inverse(t);
        let conjugate_inverse = phi.conjugate_inverse(t)?;
        let product = inverse * conjugate_inverse;
        points.push(OneilPoint { t, inverse, conjugate_inverse, product, ratio: product / t });
    }
    let holds = points
        .iter()
        .all(|pt| pt.product >= pt.t - ONEIL_SLACK && pt.product <= 2.0 * pt.t + ONEIL_SLACK);
    let lo = points.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio)).expect("nonempty");
    let hi = points.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).expect("nonempty");
    Ok(OneilReport {
        holds,
        min_ratio: lo.ratio,
        min_ratio_at: lo.t,
        max_ratio: hi.ratio,
        max_ratio_at: hi.t,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerEquivalence {
    pub c1: f64,
    pub c2: f64,
    pub holds: bool,
}

/// Empirical band `c1 <= g(t)/t^p <= c2` over 400 log-spaced points in `[a, b]`.
pub fn check_power_equivalence(
    g: impl Fn(f64) -> f64,
    p: f64,
    interval: (f64, f64),
) -> Result<PowerEquivalence> {
    let (a, b) = interval;
    if !(p > 0.0) || !(a >= 1.0) || !(b > a) || !b.is_finite() {
        return Err(Error::Argument(format!(
            "need p > 0 and 1 <= a < b < inf, got p={p}, ({a}, {b})"
        )));
    }
    let mut c1 = f64::INFINITY;
    let mut c2: f64 = 0.0;
    for t in log_grid(a, b, 400) {
        let v = g(t);
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("g({t}) = {v}")));
        }
        let r = v / t.powf(p);
        c1 = c1.min(r);
        c2 = c2.max(r);
    }
    Ok(PowerEquivalence { c1, c2, holds: c1 > 0.0 && c2.is_finite() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub checked: usize,
    /// Points where `Φ(t)/t <= φ(t) <= Φ(2t)/t` fails.
    pub violations: Vec<f64>,
}

pub fn derivative_sandwich(phi: &YoungFunction, grid: &[f64]) -> Result<SandwichReport> {
    check_grid(grid)?;
    let violations = grid
        .iter()
        .copied()
        .filter(|&t| {
            let d = phi.slope(t);
            !(phi.value(t) / t <= d && d <= phi.value(2.0 * t) / t)
        })
        .collect();
    Ok(SandwichReport { checked: grid.len(), violations })
}
