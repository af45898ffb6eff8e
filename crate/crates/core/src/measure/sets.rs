use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Normalized finite union of disjoint half-open intervals `[a, b)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(raw: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v = Vec::new();
        for (a, b) in raw {
            if a.is_nan() || b.is_nan() || a > b {
                return Err(Error::Argument(format!("invalid interval [{a}, {b})")));
            }
            if a < b {
                v.push((a, b));
            }
        }
        Ok(Self::normalized(v))
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new([(a, b)])
    }

    pub fn empty() -> Self {
        Self::default()
    }

    fn normalized(mut v: Vec<(f64, f64)>) -> Self {
        v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|iv| iv.1 <= x);
        i < self.intervals.len() && self.intervals[i].0 <= x
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        Self::normalized(v)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let (a, b) = (a1.max(a2), b1.min(b2));
            if a < b {
                out.push((a, b));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Largest `|x|` over the closure of the set.
    pub fn sup_abs(&self) -> f64 {
        self.intervals
            .iter()
            .map(|(a, b)| a.abs().max(b.abs()))
            .fold(0.0, f64::max)
    }
}

/// Normalized finite set of integers, stored as disjoint inclusive runs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegerSet {
    runs: Vec<(i64, i64)>,
}

impl IntegerSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Self {
        Self::from_runs_unchecked(elements.into_iter().map(|n| (n, n)).collect())
    }

    pub fn from_runs(runs: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let v: Vec<_> = runs.into_iter().collect();
        if let Some((a, b)) = v.iter().find(|(a, b)| a > b) {
            return Err(Error::Argument(format!("invalid integer run {a}..={b}")));
        }
        Ok(Self::from_runs_unchecked(v))
    }

    /// `{n, ..., m - 1}`; empty when `m <= n`.
    pub fn block(n: i64, m: i64) -> Self {
        if m <= n {
            Self::default()
        } else {
            IntegerSet { runs: vec![(n, m - 1)] }
        }
    }

    fn from_runs_unchecked(mut v: Vec<(i64, i64)>) -> Self {
        v.sort_unstable();
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntegerSet { runs: out }
    }

    pub fn runs(&self) -> &[(i64, i64)] {
        &self.runs
    }

    pub fn elements(&self) -> impl Iterator<Item = i64> + '_ {
        self.runs.iter().flat_map(|&(a, b)| a..=b)
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn cardinality(&self) -> u64 {
        self.runs
            .iter()
            .map(|&(a, b)| (b as i128 - a as i128 + 1) as u64)
            .sum()
    }

    pub fn contains(&self, n: i64) -> bool {
        let i = self.runs.partition_point(|r| r.1 < n);
        i < self.runs.len() && self.runs[i].0 <= n
    }

    pub fn min(&self) -> Option<i64> {
        self.runs.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<i64> {
        self.runs.last().map(|r| r.1)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.runs.clone();
        v.extend_from_slice(&other.runs);
        Self::from_runs_unchecked(v)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.runs.len() && j < other.runs.len() {
            let (a1, b1) = self.runs[i];
            let (a2, b2) = other.runs[j];
            let (a, b) = (a1.max(a2), b1.min(b2));
            if a <= b {
                out.push((a, b));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntegerSet { runs: out }
    }

    pub fn sup_abs(&self) -> u64 {
        self.runs
            .iter()
            .map(|&(a, b)| a.unsigned_abs().max(b.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Intervals,
    Integers,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetDoc", into = "SetDoc")]
pub enum MeasurableSet {
    Intervals(IntervalSet),
    Integers(IntegerSet),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum SetDoc {
    Intervals(Vec<(f64, f64)>),
    Integers(Vec<i64>),
}

impl TryFrom<SetDoc> for MeasurableSet {
    type Error = Error;

    fn try_from(doc: SetDoc) -> Result<Self> {
        Ok(match doc {
            SetDoc::Intervals(v) => MeasurableSet::Intervals(IntervalSet::new(v)?),
            SetDoc::Integers(v) => MeasurableSet::Integers(IntegerSet::new(v)),
        })
    }
}

impl From<MeasurableSet> for SetDoc {
    fn from(set: MeasurableSet) -> Self {
        match set {
            MeasurableSet::Intervals(s) => SetDoc::Intervals(s.intervals),
            MeasurableSet::Integers(s) => SetDoc::Integers(s.elements().collect()),
        }
    }
}

impl From<IntervalSet> for MeasurableSet {
    fn from(s: IntervalSet) -> Self {
        MeasurableSet::Intervals(s)
    }
}

impl From<IntegerSet> for MeasurableSet {
    fn from(s: IntegerSet) -> Self {
        MeasurableSet::Integers(s)
    }
}

impl MeasurableSet {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Ok(IntervalSet::interval(a, b)?.into())
    }

    pub fn intervals(raw: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Ok(IntervalSet::new(raw)?.into())
    }

    pub fn integers(elements: impl IntoIterator<Item = i64>) -> Self {
        IntegerSet::new(elements).into()
    }

    pub fn block(n: i64, m: i64) -> Self {
        IntegerSet::block(n, m).into()
    }

    pub fn kind(&self) -> SetKind {
        match self {
            MeasurableSet::Intervals(_) => SetKind::Intervals,
            MeasurableSet::Integers(_) => SetKind::Integers,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MeasurableSet::Intervals(s) => s.is_empty(),
            MeasurableSet::Integers(s) => s.is_empty(),
        }
    }

    pub fn empty_like(&self) -> Self {
        match self {
            MeasurableSet::Intervals(_) => IntervalSet::empty().into(),
            MeasurableSet::Integers(_) => IntegerSet::default().into(),
        }
    }

    pub fn as_intervals(&self) -> Option<&IntervalSet> {
        match self {
            MeasurableSet::Intervals(s) => Some(s),
            MeasurableSet::Integers(_) => None,
        }
    }

    pub fn as_integers(&self) -> Option<&IntegerSet> {
        match self {
            MeasurableSet::Integers(s) => Some(s),
            MeasurableSet::Intervals(_) => None,
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (MeasurableSet::Intervals(a), MeasurableSet::Intervals(b)) => Ok(a.union(b).into()),
            (MeasurableSet::Integers(a), MeasurableSet::Integers(b)) => Ok(a.union(b).into()),
            _ => Err(kind_mismatch()),
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (MeasurableSet::Intervals(a), MeasurableSet::Intervals(b)) => {
                Ok(a.intersect(b).into())
            }
            (MeasurableSet::Integers(a), MeasurableSet::Integers(b)) => Ok(a.intersect(b).into()),
            _ => Err(kind_mismatch()),
        }
    }

    /// Point membership; integer sets contain only integral `x`.
    pub fn contains(&self, x: f64) -> bool {
        match self {
            MeasurableSet::Intervals(s) => s.contains(x),
            MeasurableSet::Integers(s) => {
                x.fract() == 0.0 && x.abs() < 9.2e18 && s.contains(x as i64)
            }
        }
    }
}

fn kind_mismatch() -> Error {
    Error::Argument("set kinds differ (intervals vs integers)".into())
}

impl fmt::Display for MeasurableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurableSet::Intervals(s) => {
                if s.is_empty() {
                    return write!(f, "∅");
                }
                let parts: Vec<String> =
                    s.intervals().iter().map(|(a, b)| format!("[{a}, {b})")).collect();
                write!(f, "{}", parts.join(" ∪ "))
            }
            MeasurableSet::Integers(s) => {
                let parts: Vec<String> = s
                    .runs()
                    .iter()
                    .map(|&(a, b)| if a == b { a.to_string() } else { format!("{a}..={b}") })
                    .collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}
