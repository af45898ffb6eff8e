use std::fmt;

use serde::{Deserialize, Serialize};

use super::{measure_of, IntegerSet, IntervalSet, MeasurableSet, MeasureSpace};
use crate::composition::TauMap;
use crate::{Error, Result};

/// Superlevel sets with more points than this are not enumerated exactly.
const MAX_EXACT_RADIUS: f64 = 4.503_599_627_370_496e15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplePiece {
    pub set: MeasurableSet,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// Finite sum of `value·χ_set` over pairwise disjoint sets.
    Simple { pieces: Vec<SimplePiece> },
    /// `(1 + |x|)^{-1/p} · log(3 + |x|)^{-1/r}`
    PowerLogDecay { p: f64, r: f64 },
    /// `|x|^{-γ}` on `|x| < radius`, zero elsewhere.
    RadialPower { gamma: f64, radius: f64 },
    Indicator { set: MeasurableSet },
    /// `inner ∘ τ`
    Composed { tau: TauMap, inner: Box<FunctionSpec> },
}

/// `log f(x)` for `x >= 0`.
fn pld_ln(p: f64, r: f64, x: f64) -> f64 {
    -x.ln_1p() / p - (3.0 + x).ln().ln() / r
}

/// `log f` as a function of `u = log(1 + x)`.
fn pld_ln_u(p: f64, r: f64, u: f64) -> f64 {
    -u / p - (u + (2.0 * (-u).exp()).ln_1p()).ln() / r
}

/// `u*` with `{f > e^{ln_t}} = {log(1 + |x|) < u*}`.
fn pld_threshold(p: f64, r: f64, ln_t: f64) -> f64 {
    if ln_t >= pld_ln_u(p, r, 0.0) {
        return 0.0;
    }
    if ln_t == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while pld_ln_u(p, r, hi) > ln_t {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pld_ln_u(p, r, mid) > ln_t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `log(e^u - 1)`.
fn ln_expm1(u: f64) -> f64 {
    if u > 1.0 {
        u + (-(-u).exp()).ln_1p()
    } else {
        u.exp_m1().ln()
    }
}

/// Largest `n >= 0` with `f(n) > t` (or `>=`), `-1` if none, `None` if huge.
fn pld_count_radius(p: f64, r: f64, ln_t: f64, strict: bool) -> Option<i64> {
    let radius = pld_threshold(p, r, ln_t).exp_m1();
    if radius > MAX_EXACT_RADIUS {
        return None;
    }
    let cond = |n: i64| {
        let v = pld_ln(p, r, n as f64);
        if strict {
            v > ln_t
        } else {
            v >= ln_t
        }
    };
    let mut n = (radius.ceil() as i64 - 1).max(-1);
    while cond(n + 1) {
        n += 1;
    }
    while n >= 0 && !cond(n) {
        n -= 1;
    }
    Some(n)
}

fn above(v: f64, t: f64, strict: bool) -> bool {
    if strict {
        v > t
    } else {
        v >= t
    }
}

impl FunctionSpec {
    pub fn simple(pieces: impl IntoIterator<Item = (MeasurableSet, f64)>) -> Result<Self> {
        let pieces: Vec<SimplePiece> =
            pieces.into_iter().map(|(set, value)| SimplePiece { set, value }).collect();
        let f = FunctionSpec::Simple { pieces };
        f.check_pieces()?;
        Ok(f)
    }

    pub fn indicator(set: MeasurableSet) -> Self {
        FunctionSpec::Indicator { set }
    }

    pub fn power_log_decay(p: f64, r: f64) -> Result<Self> {
        let f = FunctionSpec::PowerLogDecay { p, r };
        f.check_parameters()?;
        Ok(f)
    }

    pub fn radial_power(gamma: f64, radius: f64) -> Result<Self> {
        let f = FunctionSpec::RadialPower { gamma, radius };
        f.check_parameters()?;
        Ok(f)
    }

    pub fn composed(tau: TauMap, inner: FunctionSpec) -> Self {
        FunctionSpec::Composed { tau, inner: Box::new(inner) }
    }

    fn check_pieces(&self) -> Result<()> {
        if let FunctionSpec::Simple { pieces } = self {
            for (i, a) in pieces.iter().enumerate() {
                if !a.value.is_finite() {
                    return Err(Error::Argument(format!("simple value {} is not finite", a.value)));
                }
                for b in &pieces[i + 1..] {
                    if !a.set.intersect(&b.set)?.is_empty() {
                        return Err(Error::Argument(format!(
                            "simple pieces {} and {} overlap",
                            a.set, b.set
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_parameters(&self) -> Result<()> {
        match self {
            FunctionSpec::PowerLogDecay { p, r } => {
                if !(*p > 0.0 && p.is_finite() && *r > 0.0 && r.is_finite()) {
                    return Err(Error::Argument(format!(
                        "power_log_decay needs positive finite p, r; got p={p}, r={r}"
                    )));
                }
            }
            FunctionSpec::RadialPower { gamma, radius } => {
                if !(gamma.is_finite() && *radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Argument(format!(
                        "radial_power needs finite gamma and positive radius; got {gamma}, {radius}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Checks parameters and that the function lives on `space`.
    pub fn validate(&self, space: &MeasureSpace) -> Result<()> {
        space.validate()?;
        self.check_parameters()?;
        match self {
            FunctionSpec::Simple { pieces } => {
                for piece in pieces {
                    space.check_set(&piece.set)?;
                }
                self.check_pieces()
            }
            FunctionSpec::Indicator { set } => space.check_set(set),
            FunctionSpec::RadialPower { .. } if *space != MeasureSpace::LebesgueLine => Err(
                Error::Argument("radial_power is defined on the real line only".into()),
            ),
            FunctionSpec::Composed { tau, inner } => {
                tau.validate()?;
                if *space != tau.domain() {
                    return Err(Error::Argument(format!(
                        "composed function lives on {:?}, not {space:?}",
                        tau.domain()
                    )));
                }
                inner.validate(&tau.codomain())
            }
            _ => Ok(()),
        }
    }

    /// True when `|f|` takes finitely many values.
    pub fn has_finite_range(&self) -> bool {
        match self {
            FunctionSpec::Simple { .. } | FunctionSpec::Indicator { .. } => true,
            FunctionSpec::Composed { inner, .. } => inner.has_finite_range(),
            _ => false,
        }
    }

    pub fn value_at(&self, x: f64) -> f64 {
        match self {
            FunctionSpec::Simple { pieces } => pieces
                .iter()
                .find(|pc| pc.set.contains(x))
                .map_or(0.0, |pc| pc.value),
            FunctionSpec::Indicator { set } => {
                if set.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
            FunctionSpec::PowerLogDecay { p, r } => pld_ln(*p, *r, x.abs()).exp(),
            FunctionSpec::RadialPower { gamma, radius } => {
                let a = x.abs();
                if a >= *radius {
                    0.0
                } else if a == 0.0 {
                    if *gamma > 0.0 {
                        f64::INFINITY
                    } else if *gamma == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    a.powf(-gamma)
                }
            }
            FunctionSpec::Composed { tau, inner } => inner.value_at(tau.apply(x)),
        }
    }

    /// Upper bound for the essential supremum of `|f|` (exact except for
    /// compositions with closed-form inner functions).
    pub fn sup_abs(&self, space: &MeasureSpace) -> Result<f64> {
        Ok(match self {
            FunctionSpec::Simple { pieces } => {
                let mut m: f64 = 0.0;
                for pc in pieces {
                    if measure_of(space, &pc.set)? > 0.0 {
                        m = m.max(pc.value.abs());
                    }
                }
                m
            }
            FunctionSpec::Indicator { set } => {
                if measure_of(space, set)? > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FunctionSpec::PowerLogDecay { p, r } => match space {
                MeasureSpace::CountingFinite(_) => pld_ln(*p, *r, 1.0).exp(),
                _ => pld_ln(*p, *r, 0.0).exp(),
            },
            FunctionSpec::RadialPower { gamma, radius } => {
                if *gamma > 0.0 {
                    f64::INFINITY
                } else {
                    radius.powf(-gamma)
                }
            }
            FunctionSpec::Composed { tau, inner } => inner.sup_abs(&tau.codomain())?,
        })
    }

    /// Values of `|f|` at which the distribution function jumps or kinks.
    pub fn jump_levels(&self, space: &MeasureSpace) -> Result<Vec<f64>> {
        let mut v = match self {
            FunctionSpec::Simple { pieces } => {
                let mut out = Vec::new();
                for pc in pieces {
                    if pc.value != 0.0 && measure_of(space, &pc.set)? > 0.0 {
                        out.push(pc.value.abs());
                    }
                }
                out
            }
            FunctionSpec::Indicator { set } => {
                if measure_of(space, set)? > 0.0 {
                    vec![1.0]
                } else {
                    vec![]
                }
            }
            FunctionSpec::PowerLogDecay { p, r } => match space {
                MeasureSpace::LebesgueLine => vec![pld_ln(*p, *r, 0.0).exp()],
                MeasureSpace::CountingIntegers => {
                    (0..=64).map(|n| pld_ln(*p, *r, n as f64).exp()).collect()
                }
                MeasureSpace::CountingFinite(k) => {
                    (1..=(*k).min(65)).map(|n| pld_ln(*p, *r, n as f64).exp()).collect()
                }
            },
            FunctionSpec::RadialPower { gamma, radius } => {
                let level = radius.powf(-gamma);
                if level.is_finite() && level > 0.0 {
                    vec![level]
                } else {
                    vec![]
                }
            }
            FunctionSpec::Composed { tau, inner } => inner.jump_levels(&tau.codomain())?,
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }

    /// `{|f| > t}` (or `{|f| >= t}` when `strict` is false).
    pub fn superlevel_set(&self, space: &MeasureSpace, t: f64, strict: bool) -> Result<MeasurableSet> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("superlevel needs t >= 0, got {t}")));
        }
        let empty: MeasurableSet = match space {
            MeasureSpace::LebesgueLine => IntervalSet::empty().into(),
            _ => IntegerSet::default().into(),
        };
        match self {
            FunctionSpec::Simple { pieces } => {
                let mut acc = empty;
                for pc in pieces.iter().filter(|pc| above(pc.value.abs(), t, strict)) {
                    acc = acc.union(&pc.set)?;
                }
                Ok(acc)
            }
            FunctionSpec::Indicator { set } => {
                Ok(if above(1.0, t, strict) { set.clone() } else { empty })
            }
            FunctionSpec::PowerLogDecay { p, r } => match space {
                MeasureSpace::LebesgueLine => {
                    let radius = pld_threshold(*p, *r, t.ln()).exp_m1();
                    MeasurableSet::interval(-radius, radius)
                }
                MeasureSpace::CountingIntegers => {
                    let n = pld_count_radius(*p, *r, t.ln(), strict).ok_or_else(too_large)?;
                    Ok(IntegerSet::block(-n, n + 1).into())
                }
                MeasureSpace::CountingFinite(k) => {
                    let n = pld_count_radius(*p, *r, t.ln(), strict).ok_or_else(too_large)?;
                    let top = (n as i128).min(*k as i128) as i64;
                    Ok(IntegerSet::block(1, top + 1).into())
                }
            },
            FunctionSpec::RadialPower { gamma, radius } => {
                let (g, rho) = (*gamma, *radius);
                if g > 0.0 {
                    let edge = if t == 0.0 { rho } else { (-t.ln() / g).exp().min(rho) };
                    MeasurableSet::interval(-edge, edge)
                } else if g == 0.0 {
                    if above(1.0, t, strict) {
                        MeasurableSet::interval(-rho, rho)
                    } else {
                        Ok(empty)
                    }
                } else {
                    let s = if t == 0.0 { 0.0 } else { (t.ln() / -g).exp() };
                    if s >= rho {
                        Ok(empty)
                    } else {
                        MeasurableSet::intervals([(-rho, -s), (s, rho)])
                    }
                }
            }
            FunctionSpec::Composed { tau, inner } => {
                let inner_set = inner.superlevel_set(&tau.codomain(), t, strict)?;
                tau.preimage(&inner_set)
            }
        }
    }

    /// `μ({|f| > t})`.
    pub fn distribution(&self, space: &MeasureSpace, t: f64) -> Result<f64> {
        self.dist(space, t, true)
    }

    /// `μ({|f| >= t})`, the left limit of the distribution function at `t`.
    pub fn distribution_at_least(&self, space: &MeasureSpace, t: f64) -> Result<f64> {
        self.dist(space, t, false)
    }

    fn dist(&self, space: &MeasureSpace, t: f64, strict: bool) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("distribution needs t >= 0, got {t}")));
        }
        match self {
            FunctionSpec::Simple { pieces } => {
                let mut m = 0.0;
                for pc in pieces.iter().filter(|pc| above(pc.value.abs(), t, strict)) {
                    m += measure_of(space, &pc.set)?;
                }
                Ok(m)
            }
            FunctionSpec::Indicator { set } => {
                if above(1.0, t, strict) {
                    measure_of(space, set)
                } else {
                    Ok(0.0)
                }
            }
            FunctionSpec::PowerLogDecay { p, r } => {
                let ln_t = t.ln();
                match space {
                    MeasureSpace::LebesgueLine => Ok(2.0 * pld_threshold(*p, *r, ln_t).exp_m1()),
                    MeasureSpace::CountingIntegers => {
                        Ok(match pld_count_radius(*p, *r, ln_t, strict) {
                            Some(n) => (2 * n + 1) as f64,
                            None => 2.0 * pld_threshold(*p, *r, ln_t).exp_m1(),
                        })
                    }
                    MeasureSpace::CountingFinite(k) => {
                        Ok(match pld_count_radius(*p, *r, ln_t, strict) {
                            Some(n) => (n.max(0) as f64).min(*k as f64),
                            None => *k as f64,
                        })
                    }
                }
            }
            _ => measure_of(space, &self.superlevel_set(space, t, strict)?),
        }
    }

    /// `log μ({|f| > e^{ln_t}})`, accurate where the measure overflows.
    pub fn ln_distribution(&self, space: &MeasureSpace, ln_t: f64) -> Result<f64> {
        match (self, space) {
            (FunctionSpec::PowerLogDecay { p, r }, MeasureSpace::LebesgueLine) => {
                let u = pld_threshold(*p, *r, ln_t);
                Ok(if u == 0.0 { f64::NEG_INFINITY } else { 2f64.ln() + ln_expm1(u) })
            }
            (FunctionSpec::PowerLogDecay { p, r }, MeasureSpace::CountingIntegers) => {
                match pld_count_radius(*p, *r, ln_t, true) {
                    Some(n) => Ok(((2 * n + 1) as f64).ln()),
                    None => Ok(2f64.ln() + ln_expm1(pld_threshold(*p, *r, ln_t))),
                }
            }
            (FunctionSpec::RadialPower { gamma, radius }, MeasureSpace::LebesgueLine)
                if *gamma > 0.0 =>
            {
                Ok(2f64.ln() + radius.ln().min(-ln_t / gamma))
            }
            _ => Ok(self.distribution(space, ln_t.exp())?.ln()),
        }
    }

    /// `log |f(a + e^w)|` for `a >= 0`, stable for large `w` on the decaying families.
    pub fn ln_abs_shifted(&self, a: f64, w: f64) -> f64 {
        match self {
            FunctionSpec::PowerLogDecay { p, r } => {
                let u = if w > 0.0 { w + ((1.0 + a) * (-w).exp()).ln_1p() } else { (a + w.exp()).ln_1p() };
                pld_ln_u(*p, *r, u)
            }
            FunctionSpec::RadialPower { gamma, radius } if a == 0.0 => {
                if w.exp() < *radius {
                    -gamma * w
                } else {
                    f64::NEG_INFINITY
                }
            }
            _ => self.value_at(a + w.exp()).abs().ln(),
        }
    }

    /// `|f|^q`, kept in closed form.
    pub fn abs_pow(&self, q: f64) -> Result<FunctionSpec> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Argument(format!("exponent must be positive, got {q}")));
        }
        Ok(match self {
            FunctionSpec::Simple { pieces } => FunctionSpec::Simple {
                pieces: pieces
                    .iter()
                    .map(|pc| SimplePiece { set: pc.set.clone(), value: pc.value.abs().powf(q) })
                    .collect(),
            },
            FunctionSpec::Indicator { set } => FunctionSpec::Indicator { set: set.clone() },
            FunctionSpec::PowerLogDecay { p, r } => FunctionSpec::PowerLogDecay { p: p / q, r: r / q },
            FunctionSpec::RadialPower { gamma, radius } => {
                FunctionSpec::RadialPower { gamma: gamma * q, radius: *radius }
            }
            FunctionSpec::Composed { tau, inner } => {
                FunctionSpec::Composed { tau: tau.clone(), inner: Box::new(inner.abs_pow(q)?) }
            }
        })
    }

    /// `c·f` for functions with finitely many values.
    pub fn scaled(&self, c: f64) -> Result<FunctionSpec> {
        if !c.is_finite() {
            return Err(Error::Argument(format!("scale {c} is not finite")));
        }
        Ok(match self {
            FunctionSpec::Simple { pieces } => FunctionSpec::Simple {
                pieces: pieces
                    .iter()
                    .map(|pc| SimplePiece { set: pc.set.clone(), value: pc.value * c })
                    .collect(),
            },
            FunctionSpec::Indicator { set } => {
                FunctionSpec::Simple { pieces: vec![SimplePiece { set: set.clone(), value: c }] }
            }
            FunctionSpec::Composed { tau, inner } => {
                FunctionSpec::Composed { tau: tau.clone(), inner: Box::new(inner.scaled(c)?) }
            }
            _ => {
                return Err(Error::Argument(
                    "only functions with finitely many values can be rescaled".into(),
                ))
            }
        })
    }
}

fn too_large() -> Error {
    Error::Evaluation("superlevel set too large to enumerate".into())
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Simple { pieces } => write!(f, "Simple({} pieces)", pieces.len()),
            FunctionSpec::PowerLogDecay { p, r } => write!(f, "PowerLogDecay(p={p}, r={r})"),
            FunctionSpec::RadialPower { gamma, radius } => {
                write!(f, "RadialPower(gamma={gamma}, radius={radius})")
            }
            FunctionSpec::Indicator { set } => write!(f, "Indicator({set})"),
            FunctionSpec::Composed { tau, inner } => write!(f, "{inner} ∘ {tau}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEB: MeasureSpace = MeasureSpace::LebesgueLine;

    #[test]
    fn indicator_distribution() {
        let f = FunctionSpec::indicator(MeasurableSet::interval(0.0, 2.0).unwrap());
        assert_eq!(f.distribution(&LEB, 0.5).unwrap(), 2.0);
        assert_eq!(f.distribution(&LEB, 1.0).unwrap(), 0.0);
        assert_eq!(f.distribution_at_least(&LEB, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn simple_distribution() {
        let f = FunctionSpec::simple([
            (MeasurableSet::interval(0.0, 1.0).unwrap(), 3.0),
            (MeasurableSet::interval(1.0, 2.0).unwrap(), 1.0),
        ])
        .unwrap();
        assert_eq!(f.distribution(&LEB, 2.0).unwrap(), 1.0);
        assert_eq!(f.distribution(&LEB, 0.0).unwrap(), 2.0);
        assert_eq!(f.value_at(0.5), 3.0);
        assert_eq!(f.value_at(2.0), 0.0);
    }

    #[test]
    fn overlapping_simple_rejected() {
        let r = FunctionSpec::simple([
            (MeasurableSet::interval(0.0, 2.0).unwrap(), 3.0),
            (MeasurableSet::interval(1.0, 3.0).unwrap(), 1.0),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn power_log_decay_superlevel_is_symmetric_interval() {
        let f = FunctionSpec::power_log_decay(1.0, 1.0).unwrap();
        let t = f.value_at(10.0);
        let m = f.distribution(&LEB, t).unwrap();
        assert!((m - 20.0).abs() < 1e-12, "{m}");
        let grid: f64 = (0..210_000)
            .map(|i| -10.5 + (i as f64 + 0.5) * 1e-4)
            .filter(|&x| f.value_at(x) > t)
            .count() as f64
            * 1e-4;
        assert!((grid - 20.0).abs() < 1e-3);
    }

    #[test]
    fn power_log_decay_log_distribution_extremes() {
        let f = FunctionSpec::power_log_decay(0.5, 0.5).unwrap();
        for ln_t in [-1.0, -10.0, -100.0] {
            let a = f.ln_distribution(&LEB, ln_t).unwrap();
            let b = f.distribution(&LEB, ln_t.exp()).unwrap().ln();
            assert!((a - b).abs() < 1e-10, "{ln_t}: {a} vs {b}");
        }
        let deep = f.ln_distribution(&LEB, -1e5).unwrap();
        assert!(deep.is_finite() && deep > 1e4);
        assert_eq!(f.ln_distribution(&LEB, 0.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn power_log_decay_on_integers_counts() {
        let z = MeasureSpace::CountingIntegers;
        let f = FunctionSpec::power_log_decay(2.0, 1.0).unwrap();
        let t = f.value_at(5.0);
        assert_eq!(f.distribution(&z, t).unwrap(), 9.0);
        assert_eq!(f.distribution_at_least(&z, t).unwrap(), 11.0);
        let brute = (-100..=100).filter(|&n| f.value_at(n as f64) > 0.3).count() as f64;
        assert_eq!(f.distribution(&z, 0.3).unwrap(), brute);
        let k = MeasureSpace::CountingFinite(3);
        assert_eq!(f.distribution(&k, t).unwrap(), 3.0);
        assert_eq!(f.distribution(&k, 10.0).unwrap(), 0.0);
    }

    #[test]
    fn radial_power_distribution() {
        let f = FunctionSpec::radial_power(0.25, 1.0).unwrap();
        assert_eq!(f.distribution(&LEB, 0.5).unwrap(), 2.0);
        let m = f.distribution(&LEB, 16.0).unwrap();
        assert!((m - 2.0 * 16f64.powf(-4.0)).abs() < 1e-18);
        let g = FunctionSpec::radial_power(-1.0, 2.0).unwrap();
        assert!((g.distribution(&LEB, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(FunctionSpec::radial_power(0.5, 0.0).is_err());
    }

    #[test]
    fn abs_pow_and_scaling() {
        let f = FunctionSpec::power_log_decay(3.0, 3.0).unwrap();
        let g = f.abs_pow(2.0).unwrap();
        assert!((g.value_at(7.0) - f.value_at(7.0).powi(2)).abs() < 1e-15);
        let s = FunctionSpec::indicator(MeasurableSet::interval(0.0, 1.0).unwrap())
            .scaled(-2.0)
            .unwrap();
        assert_eq!(s.value_at(0.5), -2.0);
        assert_eq!(s.distribution(&LEB, 1.5).unwrap(), 1.0);
        assert!(f.scaled(2.0).is_err());
    }

    #[test]
    fn validation_checks_space() {
        let f = FunctionSpec::indicator(MeasurableSet::integers([1, 2]));
        assert!(f.validate(&LEB).is_err());
        assert!(f.validate(&MeasureSpace::CountingIntegers).is_ok());
        let r = FunctionSpec::radial_power(0.2, 1.0).unwrap();
        assert!(r.validate(&MeasureSpace::CountingIntegers).is_err());
    }

    #[test]
    fn serde_shapes() {
        let f: FunctionSpec =
            serde_json::from_str(r#"{"family":"indicator","set":{"intervals":[[0,4]]}}"#).unwrap();
        assert_eq!(f, FunctionSpec::indicator(MeasurableSet::interval(0.0, 4.0).unwrap()));
        let g: FunctionSpec =
            serde_json::from_str(r#"{"family":"power_log_decay","p":0.5,"r":0.5}"#).unwrap();
        assert_eq!(g, FunctionSpec::PowerLogDecay { p: 0.5, r: 0.5 });
        let s: FunctionSpec = serde_json::from_str(
            r#"{"family":"simple","pieces":[{"set":{"integers":[1,2]},"value":3.0}]}"#,
        )
        .unwrap();
        assert!(matches!(s, FunctionSpec::Simple { .. }));
    }
}
