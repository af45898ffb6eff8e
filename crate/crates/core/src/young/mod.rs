//! Young functions: evaluation, left derivative, complementary function and
//! generalized inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::search;
use crate::{Error, Result};

mod checks;

pub use checks::{
    check_nabla2, check_oneil, check_power_equivalence, default_grid, derivative_sandwich,
    estimate_nabla2_exponent, validate_young, ConditionCheck, ExponentEstimate, Nabla2Failure,
    Nabla2Report, OneilPoint, OneilReport, PowerEquivalence, SandwichReport, ValidityReport,
    DEFAULT_K_CANDIDATES,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum YoungFamily {
    /// `t^p`
    Power { p: f64 },
    /// `t·log(3 + t)`
    #[serde(rename = "llogl")]
    LLogL,
    /// `e^t - 1`
    ExpMinusOne,
    /// `t`
    Linear,
    /// `base(t^{1/q})`
    PowerComposed { base: Box<YoungFunction>, q: f64 },
    /// Piecewise-linear interpolation of `(t, Φ(t))` knots, extended linearly
    /// past the last knot and joined to the origin before the first.
    Tabulated { knots: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungFunction {
    #[serde(flatten)]
    pub family: YoungFamily,
    /// Arguments above the cap evaluate to `+∞`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_cap: Option<f64>,
}

impl From<YoungFamily> for YoungFunction {
    fn from(family: YoungFamily) -> Self {
        YoungFunction { family, domain_cap: None }
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            YoungFamily::Power { p } => write!(f, "Power({p})")?,
            YoungFamily::LLogL => write!(f, "LLogL")?,
            YoungFamily::ExpMinusOne => write!(f, "ExpMinusOne")?,
            YoungFamily::Linear => write!(f, "Linear")?,
            YoungFamily::PowerComposed { base, q } => write!(f, "PowerComposed({base}, {q})")?,
            YoungFamily::Tabulated { knots } => write!(f, "Tabulated({} knots)", knots.len())?,
        }
        if let Some(cap) = self.domain_cap {
            write!(f, "[cap {cap}]")?;
        }
        Ok(())
    }
}

fn domain(t: f64, what: &str) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("{what} requires t >= 0, got {t}")));
    }
    Ok(())
}

/// `(t0, v0, t1, v1)` of the table segment whose half-open range `(t0, t1]`
/// holds `t`, with a virtual origin knot and linear extension past the end.
fn tab_segment(knots: &[(f64, f64)], t: f64) -> (f64, f64, f64, f64) {
    let n = knots.len() as isize;
    let first: isize = if knots[0].0 > 0.0 { -1 } else { 0 };
    let at = |j: isize| if j < 0 { (0.0, 0.0) } else { knots[j as usize] };
    let last = n - 1;
    if last == first {
        let (t0, v0) = at(first);
        return (t0, v0, t0 + 1.0, v0);
    }
    let mut hi = knots.partition_point(|k| k.0 < t) as isize;
    if hi > last {
        hi = last;
    }
    if hi <= first {
        hi = first + 1;
    }
    let (t0, v0) = at(hi - 1);
    let (t1, v1) = at(hi);
    (t0, v0, t1, v1)
}

impl YoungFunction {
    pub fn power(p: f64) -> Self {
        YoungFamily::Power { p }.into()
    }

    pub fn llogl() -> Self {
        YoungFamily::LLogL.into()
    }

    pub fn exp_minus_one() -> Self {
        YoungFamily::ExpMinusOne.into()
    }

    pub fn linear() -> Self {
        YoungFamily::Linear.into()
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        let phi: Self = YoungFamily::Tabulated { knots }.into();
        phi.check_parameters()?;
        Ok(phi)
    }

    pub fn with_domain_cap(mut self, cap: f64) -> Self {
        self.domain_cap = Some(cap);
        self
    }

    /// `t ↦ Φ(t^{1/q})`. Convexity of the result is not guaranteed.
    pub fn power_compose(&self, q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Argument(format!("q must be positive, got {q}")));
        }
        Ok(YoungFamily::PowerComposed { base: Box::new(self.clone()), q }.into())
    }

    /// Checks family parameters, without any convexity test.
    pub fn check_parameters(&self) -> Result<()> {
        if let Some(cap) = self.domain_cap {
            if !(cap > 0.0) {
                return Err(Error::Argument("domain_cap must be positive".into()));
            }
        }
        match &self.family {
            YoungFamily::Power { p } if !(*p > 0.0 && p.is_finite()) => {
                Err(Error::Argument(format!("power exponent must be positive, got {p}")))
            }
            YoungFamily::PowerComposed { base, q } => {
                if !(*q > 0.0 && q.is_finite()) {
                    return Err(Error::Argument(format!("q must be positive, got {q}")));
                }
                base.check_parameters()
            }
            YoungFamily::Tabulated { knots } => {
                if knots.is_empty() {
                    return Err(Error::Argument("tabulated function needs knots".into()));
                }
                if knots.iter().any(|(t, v)| !(t.is_finite() && v.is_finite() && *t >= 0.0)) {
                    return Err(Error::Argument("knots must be finite with t >= 0".into()));
                }
                if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::Argument("knots must be strictly increasing in t".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn capped(&self, t: f64) -> bool {
        matches!(self.domain_cap, Some(cap) if t > cap)
    }

    /// `t^{1/q}` with exact square roots and squares for `q = 2` and `q = 1/2`.
    fn root(t: f64, q: f64) -> f64 {
        if q == 1.0 {
            t
        } else if q == 2.0 {
            t.sqrt()
        } else if q == 0.5 {
            t * t
        } else {
            t.powf(q.recip())
        }
    }

    /// `Φ(t)`, checked.
    pub fn eval(&self, t: f64) -> Result<f64> {
        domain(t, "eval")?;
        Ok(self.value(t))
    }

    /// `Φ(t)` for `t >= 0`.
    pub fn value(&self, t: f64) -> f64 {
        if self.capped(t) {
            return f64::INFINITY;
        }
        match &self.family {
            YoungFamily::Power { p } => {
                if t == 0.0 {
                    0.0
                } else if *p == 1.0 {
                    t
                } else if *p == 2.0 {
                    t * t
                } else {
                    t.powf(*p)
                }
            }
            YoungFamily::LLogL => t * (3.0 + t).ln(),
            YoungFamily::ExpMinusOne => t.exp_m1(),
            YoungFamily::Linear => t,
            YoungFamily::PowerComposed { base, q } => base.value(Self::root(t, *q)),
            YoungFamily::Tabulated { knots } => {
                let (t0, v0, t1, v1) = tab_segment(knots, t);
                if t == t1 {
                    v1
                } else {
                    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }

    /// `log Φ(t)`, accurate where `Φ(t)` itself would overflow.
    pub fn ln_value(&self, t: f64) -> f64 {
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.capped(t) {
            return f64::INFINITY;
        }
        match &self.family {
            YoungFamily::Power { p } => p * t.ln(),
            YoungFamily::LLogL => t.ln() + (3.0 + t).ln().ln(),
            YoungFamily::ExpMinusOne => {
                if t > 1.0 {
                    t + (-(-t).exp()).ln_1p()
                } else {
                    t.exp_m1().ln()
                }
            }
            YoungFamily::Linear => t.ln(),
            YoungFamily::PowerComposed { base, q } => base.ln_value(Self::root(t, *q)),
            YoungFamily::Tabulated { .. } => self.value(t).ln(),
        }
    }

    /// `log Φ(e^s)`, also where `e^s` underflows or overflows.
    pub fn ln_value_exp(&self, s: f64) -> f64 {
        let t = s.exp();
        if t > 0.0 && t.is_finite() {
            return self.ln_value(t);
        }
        if s == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        if self.capped(t) {
            return f64::INFINITY;
        }
        match &self.family {
            YoungFamily::Power { p } => p * s,
            YoungFamily::LLogL if t == 0.0 => s + 3f64.ln().ln(),
            YoungFamily::LLogL => s + s.ln(),
            YoungFamily::ExpMinusOne if t == 0.0 => s,
            YoungFamily::ExpMinusOne => f64::INFINITY,
            YoungFamily::Linear => s,
            YoungFamily::PowerComposed { base, q } => base.ln_value_exp(s / q),
            YoungFamily::Tabulated { knots } => {
                let (t0, v0, t1, v1) = tab_segment(knots, if t == 0.0 { f64::MIN_POSITIVE } else { f64::MAX });
                let slope = (v1 - v0) / (t1 - t0);
                if t == 0.0 && v0 > 0.0 {
                    v0.ln()
                } else {
                    slope.ln() + s
                }
            }
        }
    }

    /// Left derivative `φ(t)`, checked; `t` must be positive.
    pub fn left_derivative(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Domain(format!("left derivative requires t > 0, got {t}")));
        }
        Ok(self.slope(t))
    }

    /// Left derivative `φ(t)` for `t > 0`; at `t = 0` the right limit.
    pub fn slope(&self, t: f64) -> f64 {
        if self.capped(t) {
            return f64::INFINITY;
        }
        match &self.family {
            YoungFamily::Power { p } => {
                if *p == 1.0 {
                    1.0
                } else if t == 0.0 {
                    if *p < 1.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            YoungFamily::LLogL => (3.0 + t).ln() + t / (3.0 + t),
            YoungFamily::ExpMinusOne => t.exp(),
            YoungFamily::Linear => 1.0,
            YoungFamily::PowerComposed { .. } => {
                let t = if t == 0.0 { f64::MIN_POSITIVE } else { t };
                self.ln_slope(t.ln()).exp()
            }
            YoungFamily::Tabulated { knots } => {
                let (t0, v0, t1, v1) = if t == 0.0 {
                    tab_segment(knots, f64::MIN_POSITIVE)
                } else {
                    tab_segment(knots, t)
                };
                (v1 - v0) / (t1 - t0)
            }
        }
    }

    /// `log φ(e^s)`.
    pub fn ln_slope(&self, s: f64) -> f64 {
        let t = s.exp();
        if self.capped(t) {
            return f64::INFINITY;
        }
        match &self.family {
            YoungFamily::Power { p } => {
                if *p == 1.0 {
                    0.0
                } else {
                    p.ln() + (p - 1.0) * s
                }
            }
            YoungFamily::ExpMinusOne => t,
            YoungFamily::Linear => 0.0,
            YoungFamily::PowerComposed { base, q } => {
                let u = s / q;
                base.ln_slope(u) + u - q.ln() - s
            }
            YoungFamily::LLogL | YoungFamily::Tabulated { .. } => self.slope(t).ln(),
        }
    }

    /// Backward-difference left derivative with two Richardson steps.
    pub fn numeric_left_derivative(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Domain(format!("left derivative requires t > 0, got {t}")));
        }
        let h = (t * 1e-6).max(1e-12).min(0.5 * t);
        let ft = self.value(t);
        let d = |h: f64| (ft - self.value(t - h)) / h;
        let (d1, d2, d4) = (d(h), d(h / 2.0), d(h / 4.0));
        let r1 = 2.0 * d2 - d1;
        let r2 = 2.0 * d4 - d2;
        Ok((4.0 * r2 - r1) / 3.0)
    }

    /// Exponent `σ` with `Φ(t) ≈ c·t^σ` as `t → 0` (`∞` when `Φ` vanishes near 0).
    pub fn index_at_zero(&self) -> f64 {
        match &self.family {
            YoungFamily::Power { p } => *p,
            YoungFamily::LLogL | YoungFamily::ExpMinusOne | YoungFamily::Linear => 1.0,
            YoungFamily::PowerComposed { base, q } => base.index_at_zero() / q,
            YoungFamily::Tabulated { knots } => {
                let (_, v0, t1, v1) = tab_segment(knots, f64::MIN_POSITIVE);
                if v0 > 0.0 {
                    0.0
                } else if v1 > 0.0 && t1 > 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Polynomial growth order at infinity (`∞` for exponential growth).
    pub fn growth_index_at_infinity(&self) -> f64 {
        if self.domain_cap.is_some() {
            return f64::INFINITY;
        }
        match &self.family {
            YoungFamily::Power { p } => *p,
            YoungFamily::LLogL | YoungFamily::Linear | YoungFamily::Tabulated { .. } => 1.0,
            YoungFamily::ExpMinusOne => f64::INFINITY,
            YoungFamily::PowerComposed { base, q } => base.growth_index_at_infinity() / q,
        }
    }

    /// Complementary function `Φ̃(t) = sup_{s >= 0} (s·t − Φ(s))`.
    pub fn complementary(&self, t: f64) -> Result<f64> {
        domain(t, "complementary")?;
        if t == 0.0 {
            return Ok(0.0);
        }
        if let Some(cap) = self.domain_cap {
            return Ok(legendre_bounded(|s| self.value(s), t, cap));
        }
        Ok(match &self.family {
            YoungFamily::Power { p } if *p > 1.0 => (p - 1.0) * (t / p).powf(p / (p - 1.0)),
            YoungFamily::Power { p } if *p < 1.0 => f64::INFINITY,
            YoungFamily::Power { .. } | YoungFamily::Linear => {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            YoungFamily::ExpMinusOne => {
                if t <= 1.0 {
                    0.0
                } else {
                    t * t.ln() - t + 1.0
                }
            }
            YoungFamily::Tabulated { knots } => {
                if t > self.slope(f64::MAX) {
                    f64::INFINITY
                } else {
                    let origin = if knots[0].0 > 0.0 { 0.0 } else { f64::NEG_INFINITY };
                    knots.iter().map(|(s, v)| s * t - v).fold(origin, f64::max)
                }
            }
            _ => legendre(|s| self.value(s), t),
        })
    }

    /// Generalized inverse `inf { s >= 0 : Φ(s) > t }`.
    pub fn generalized_inverse(&self, t: f64) -> Result<f64> {
        domain(t, "generalized inverse")?;
        Ok(self.inverse(t))
    }

    /// Generalized inverse for `t >= 0`.
    pub fn inverse(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return self.domain_cap.unwrap_or(f64::INFINITY);
        }
        let raw = match &self.family {
            YoungFamily::Power { p } => {
                if t == 0.0 {
                    0.0
                } else if *p == 1.0 {
                    t
                } else if *p == 2.0 {
                    t.sqrt()
                } else {
                    t.powf(p.recip())
                }
            }
            YoungFamily::Linear => t,
            YoungFamily::ExpMinusOne => t.ln_1p(),
            YoungFamily::PowerComposed { base, q } => {
                let u = base.inverse(t);
                if *q == 1.0 {
                    u
                } else if *q == 2.0 {
                    u * u
                } else {
                    u.powf(*q)
                }
            }
            YoungFamily::Tabulated { knots } => tab_inverse(knots, t),
            YoungFamily::LLogL => search::generalized_inverse(|s| self.value(s), t),
        };
        match self.domain_cap {
            Some(cap) => raw.min(cap),
            None => raw,
        }
    }

    /// Generalized inverse of the complementary function.
    pub fn conjugate_inverse(&self, t: f64) -> Result<f64> {
        domain(t, "conjugate inverse")?;
        if self.domain_cap.is_none() {
            match &self.family {
                YoungFamily::Power { p } if *p > 1.0 => {
                    return Ok(p * (t / (p - 1.0)).powf((p - 1.0) / p));
                }
                YoungFamily::Power { p } if *p == 1.0 => return Ok(1.0),
                YoungFamily::Linear => return Ok(1.0),
                _ => {}
            }
        }
        Ok(search::generalized_inverse(
            |s| self.complementary(s).unwrap_or(f64::INFINITY),
            t,
        ))
    }
}

fn tab_inverse(knots: &[(f64, f64)], t: f64) -> f64 {
    let origin = knots[0].0 > 0.0;
    let pts = origin
        .then_some((0.0, 0.0))
        .into_iter()
        .chain(knots.iter().copied());
    let mut prev: Option<(f64, f64)> = None;
    for (s, v) in pts {
        if v > t {
            return match prev {
                None => s,
                Some((s0, v0)) => s0 + (t - v0) * (s - s0) / (v - v0),
            };
        }
        prev = Some((s, v));
    }
    let (t0, v0, t1, v1) = tab_segment(knots, f64::MAX);
    let m = (v1 - v0) / (t1 - t0);
    if m <= 0.0 {
        f64::INFINITY
    } else {
        t1 + (t - v1) / m
    }
}

fn legendre(phi: impl Fn(f64) -> f64, t: f64) -> f64 {
    let g = |s: f64| s * t - phi(s);
    let (mut before, mut prev) = (0.0, 0.0);
    let mut g_prev = 0.0;
    let mut s = 1.0;
    loop {
        let gs = g(s);
        if !(gs >= g_prev) {
            break;
        }
        before = prev;
        prev = s;
        g_prev = gs;
        s *= 2.0;
        if s > search::SEARCH_CAP {
            return f64::INFINITY;
        }
    }
    let (_, best) = search::golden_max(g, before, s, 1e-12);
    best.max(g_prev).max(0.0)
}

fn legendre_bounded(phi: impl Fn(f64) -> f64, t: f64, cap: f64) -> f64 {
    let g = |s: f64| s * t - phi(s);
    let (_, best) = search::golden_max(g, 0.0, cap, 1e-12);
    best.max(g(cap)).max(0.0)
}

#[cfg(test)]
mod tests;
