//! Measure spaces, measurable sets, evaluable functions and their
//! distribution functions `μ_f(t) = μ({|f| > t})`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub mod corpus;
mod function;
mod sets;

pub use function::{FunctionSpec, SimplePiece};
pub use sets::{IntegerSet, IntervalSet, MeasurableSet, SetKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSpace {
    /// `ℝ` with Lebesgue measure.
    LebesgueLine,
    /// `ℤ` with counting measure.
    CountingIntegers,
    /// `{1, ..., k}` with counting measure.
    CountingFinite(u64),
}

impl MeasureSpace {
    pub fn set_kind(&self) -> SetKind {
        match self {
            MeasureSpace::LebesgueLine => SetKind::Intervals,
            _ => SetKind::Integers,
        }
    }

    pub fn is_counting(&self) -> bool {
        !matches!(self, MeasureSpace::LebesgueLine)
    }

    /// Checks that `e` is a set of this space.
    pub fn check_set(&self, e: &MeasurableSet) -> Result<()> {
        if e.kind() != self.set_kind() {
            return Err(Error::Argument(format!(
                "set {e} is not a measurable set of {self:?}"
            )));
        }
        if let (MeasureSpace::CountingFinite(k), MeasurableSet::Integers(s)) = (self, e) {
            if let (Some(lo), Some(hi)) = (s.min(), s.max()) {
                if lo < 1 || hi as i128 > *k as i128 {
                    return Err(Error::Argument(format!("set {e} is not contained in 1..={k}")));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasureSpace::CountingFinite(0) = self {
            return Err(Error::Argument("finite counting space needs k >= 1".into()));
        }
        Ok(())
    }
}

pub fn measure_of(space: &MeasureSpace, e: &MeasurableSet) -> Result<f64> {
    space.check_set(e)?;
    Ok(match e {
        MeasurableSet::Intervals(s) => s.measure(),
        MeasurableSet::Integers(s) => s.cardinality() as f64,
    })
}

pub fn set_union(a: &MeasurableSet, b: &MeasurableSet) -> Result<MeasurableSet> {
    a.union(b)
}

pub fn set_intersect(a: &MeasurableSet, b: &MeasurableSet) -> Result<MeasurableSet> {
    a.intersect(b)
}

/// Normalizes a raw list of half-open intervals.
pub fn set_normalize(raw: &[(f64, f64)]) -> Result<MeasurableSet> {
    MeasurableSet::intervals(raw.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_examples() {
        let s = MeasurableSet::intervals([(0.0, 2.0), (3.0, 4.0)]).unwrap();
        assert_eq!(measure_of(&MeasureSpace::LebesgueLine, &s).unwrap(), 3.0);
        let z = MeasurableSet::integers([1, 5, 7]);
        assert_eq!(measure_of(&MeasureSpace::CountingIntegers, &z).unwrap(), 3.0);
        let e = MeasurableSet::intervals([]).unwrap();
        assert_eq!(measure_of(&MeasureSpace::LebesgueLine, &e).unwrap(), 0.0);
        assert!(measure_of(&MeasureSpace::LebesgueLine, &z).is_err());
        assert!(measure_of(&MeasureSpace::CountingFinite(6), &z).is_err());
        assert_eq!(measure_of(&MeasureSpace::CountingFinite(7), &z).unwrap(), 3.0);
    }

    #[test]
    fn space_serde() {
        let j = serde_json::to_string(&MeasureSpace::LebesgueLine).unwrap();
        assert_eq!(j, "\"lebesgue_line\"");
        let k: MeasureSpace = serde_json::from_str(r#"{"counting_finite":5}"#).unwrap();
        assert_eq!(k, MeasureSpace::CountingFinite(5));
    }
}
