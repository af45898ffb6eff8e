//! Composition maps with exact preimages, volume-condition certificates and
//! the divergence demonstrations built on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::measure::{IntervalSet, MeasurableSet, MeasureSpace};
use crate::young::YoungFunction;
use crate::{Error, Result};

mod certify;
mod demos;

pub use certify::{
    blocks, check_volume_condition, certify_min_d, dyadic_intervals, finite_subsets,
    indicator_sharpness_check, modular_bound_check, normalize_for_bound, random_sets,
    singletons, CertificationReport, FamilyKind, ModularBound, SetFamily, SetMargin,
    SharpnessReport, VolumeCondition, GROWTH_SLOPE_LIMIT, VOLUME_RTOL,
};
pub use demos::{
    continuity_obstruction_demo, counterexample_suite, holder_bound_check, holder_quantity,
    ContinuityReport, CounterexampleKind, DivergenceEvidence, HolderPoint, HolderReport,
    LadderRung, LADDER,
};

/// A nonsingular map `τ: ℝ → X` with closed-form preimages.
///
/// The integer-valued maps have the form `τ(y) = ⌊g(|y|)⌋` for an increasing
/// `g`, so `τ⁻¹({k})` is `{ g⁻¹(k) <= |y| < g⁻¹(k + 1) }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum TauMap {
    Identity,
    /// `⌊|y|^{p/q}⌋`
    GaussPower { p: f64, q: f64 },
    /// `⌊Φ⁻¹(1/|y|)^{-p}⌋`
    OrliczInverse { phi: YoungFunction, p: f64 },
    /// `⌊log(1 + 1/|y|)^{-p}⌋`
    LogMap { p: f64 },
    /// `base` viewed as a map into `{1, ..., k}`.
    FiniteRestriction { base: Box<TauMap>, k: u64 },
}

impl fmt::Display for TauMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauMap::Identity => write!(f, "Identity"),
            TauMap::GaussPower { p, q } => write!(f, "GaussPower(p={p}, q={q})"),
            TauMap::OrliczInverse { phi, p } => write!(f, "OrliczInverse({phi}, p={p})"),
            TauMap::LogMap { p } => write!(f, "LogMap(p={p})"),
            TauMap::FiniteRestriction { base, k } => write!(f, "FiniteRestriction({base}, k={k})"),
        }
    }
}

impl TauMap {
    pub fn validate(&self) -> Result<()> {
        match self {
            TauMap::Identity => Ok(()),
            TauMap::GaussPower { p, q } => {
                if p.is_finite() && q.is_finite() && *p > 0.0 && *q > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Argument(format!("gauss_power needs p, q > 0; got {p}, {q}")))
                }
            }
            TauMap::OrliczInverse { phi, p } => {
                phi.check_parameters()?;
                if *p >= 1.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Argument(format!("orlicz_inverse needs p >= 1, got {p}")))
                }
            }
            TauMap::LogMap { p } => {
                if *p >= 1.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Argument(format!("log_map needs p >= 1, got {p}")))
                }
            }
            TauMap::FiniteRestriction { base, k } => {
                if *k == 0 {
                    return Err(Error::Argument("finite_restriction needs k >= 1".into()));
                }
                if base.codomain() != MeasureSpace::CountingIntegers {
                    return Err(Error::Argument(
                        "finite_restriction needs an integer-valued base map".into(),
                    ));
                }
                base.validate()
            }
        }
    }

    pub fn domain(&self) -> MeasureSpace {
        MeasureSpace::LebesgueLine
    }

    pub fn codomain(&self) -> MeasureSpace {
        match self {
            TauMap::Identity => MeasureSpace::LebesgueLine,
            TauMap::FiniteRestriction { k, .. } => MeasureSpace::CountingFinite(*k),
            _ => MeasureSpace::CountingIntegers,
        }
    }

    /// Whether the canonical integer families for this map start at 0.
    pub fn zero_in_default_family(&self) -> bool {
        matches!(self, TauMap::GaussPower { .. })
    }

    /// `g⁻¹(k)`: the smallest `|y|` with `τ(y) >= k`, for `k >= 0`.
    pub fn threshold(&self, k: i64) -> f64 {
        if k <= 0 {
            return 0.0;
        }
        let kf = k as f64;
        match self {
            TauMap::Identity => kf,
            TauMap::GaussPower { p, q } => {
                let e = q / p;
                if e == 1.0 {
                    kf
                } else if e == 0.5 {
                    kf.sqrt()
                } else if e == 2.0 {
                    kf * kf
                } else {
                    kf.powf(e)
                }
            }
            TauMap::OrliczInverse { phi, p } => phi.value(kf.powf(-p.recip())).recip(),
            TauMap::LogMap { p } => kf.powf(-p.recip()).exp_m1().recip(),
            TauMap::FiniteRestriction { base, .. } => base.threshold(k),
        }
    }

    /// `τ(y)`; integer-valued maps return an integral float.
    pub fn apply(&self, y: f64) -> f64 {
        let a = y.abs();
        match self {
            TauMap::Identity => y,
            TauMap::GaussPower { p, q } => a.powf(p / q).floor(),
            TauMap::OrliczInverse { phi, p } => {
                if a == 0.0 {
                    0.0
                } else {
                    phi.inverse(a.recip()).powf(-p).floor()
                }
            }
            TauMap::LogMap { p } => {
                if a == 0.0 {
                    0.0
                } else {
                    a.recip().ln_1p().powf(-p).floor()
                }
            }
            TauMap::FiniteRestriction { base, .. } => base.apply(y),
        }
    }

    /// Exact preimage `τ⁻¹(e)` as a normalized union of half-open intervals.
    pub fn preimage(&self, e: &MeasurableSet) -> Result<MeasurableSet> {
        self.codomain().check_set(e)?;
        match (self, e) {
            (TauMap::Identity, MeasurableSet::Intervals(_)) => Ok(e.clone()),
            (_, MeasurableSet::Integers(s)) => {
                let mut pieces = Vec::with_capacity(2 * s.runs().len());
                for &(a, b) in s.runs() {
                    if b < 0 {
                        continue;
                    }
                    let lo = self.threshold(a.max(0));
                    let hi = self.threshold(b.saturating_add(1));
                    pieces.push((-hi, -lo));
                    pieces.push((lo, hi));
                }
                Ok(IntervalSet::new(pieces)?.into())
            }
            _ => Err(Error::Argument(format!("set {e} is not in the codomain of {self}"))),
        }
    }
}
