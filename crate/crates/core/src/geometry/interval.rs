use crate::num::CompensatedSum;
use crate::{LabError, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt::Write as _;

/// Gaps at or below this width are merged by [`normalize_intervals`].
pub const MERGE_TOL: f64 = 1e-12;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(LabError::input(format!("non-finite interval endpoint ({lo}, {hi})")));
        }
        if lo >= hi {
            return Err(LabError::input(format!("interval needs lo < hi, got ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn translate(&self, t: f64) -> Interval {
        Interval { lo: self.lo + t, hi: self.hi + t }
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = LabError;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.lo, iv.hi)
    }
}

/// Finite disjoint union of closed intervals, sorted, with gaps wider than
/// [`MERGE_TOL`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        normalize_intervals(&[(lo, hi)])
    }

    /// Wraps intervals already known to be sorted and separated.
    pub(crate) fn from_sorted_unchecked(intervals: Vec<Interval>) -> Self {
        debug_assert!(intervals.windows(2).all(|w| w[0].hi < w[1].lo));
        Self { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure, accumulated with compensation.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).collect::<CompensatedSum>().value()
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    /// Smallest interval containing the set, if non-empty.
    pub fn hull(&self) -> Option<Interval> {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(a), Some(b)) => Some(Interval { lo: a.lo, hi: b.hi }),
            _ => None,
        }
    }

    pub fn diameter(&self) -> f64 {
        self.hull().map_or(0.0, |h| h.len())
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect()
    }

    /// CSV with a `lo,hi` header and one row per interval.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi\n");
        for iv in &self.intervals {
            let _ = writeln!(out, "{:.16e},{:.16e}", iv.lo, iv.hi);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("lo")) {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(LabError::input(format!("line {}: expected `lo,hi`", lineno + 1)));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| LabError::input(format!("line {}: bad number `{s}`", lineno + 1)))
            };
            raw.push((parse(a)?, parse(b)?));
        }
        normalize_intervals(&raw)
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(f64, f64)>::deserialize(deserializer)?;
        normalize_intervals(&raw).map_err(serde::de::Error::custom)
    }
}

/// Sorts, merges and validates a raw list of `(lo, hi)` pairs.
///
/// Zero-length pairs are dropped; pairs separated by at most [`MERGE_TOL`]
/// (including touching endpoints) are merged.
pub fn normalize_intervals(raw: &[(f64, f64)]) -> Result<IntervalSet> {
    let mut pieces = Vec::with_capacity(raw.len());
    for &(lo, hi) in raw {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(LabError::input(format!("non-finite interval endpoint ({lo}, {hi})")));
        }
        if lo > hi {
            return Err(LabError::input(format!("interval with lo > hi: ({lo}, {hi})")));
        }
        if lo < hi {
            pieces.push(Interval { lo, hi });
        }
    }
    pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut merged: Vec<Interval> = Vec::with_capacity(pieces.len());
    for iv in pieces {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi + MERGE_TOL => last.hi = last.hi.max(iv.hi),
            _ => merged.push(iv),
        }
    }
    Ok(IntervalSet { intervals: merged })
}

pub fn translate_set(set: &IntervalSet, t: f64) -> IntervalSet {
    IntervalSet { intervals: set.intervals.iter().map(|iv| iv.translate(t)).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BooleanOp {
    Intersect,
    Subtract,
    Union,
}

/// Exact set algebra on normalized interval sets.
pub fn set_boolean(s: &IntervalSet, t: &IntervalSet, op: BooleanOp) -> IntervalSet {
    let raw: Vec<(f64, f64)> = match op {
        BooleanOp::Union => s.pairs().into_iter().chain(t.pairs()).collect(),
        BooleanOp::Intersect => intersect_pairs(&s.intervals, &t.intervals),
        BooleanOp::Subtract => subtract_pairs(&s.intervals, &t.intervals),
    };
    // Inputs are valid, so normalization only drops degenerate pieces.
    normalize_intervals(&raw).expect("set algebra on valid sets yields valid pairs")
}

fn intersect_pairs(a: &[Interval], b: &[Interval]) -> Vec<(f64, f64)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = a[i].lo.max(b[j].lo);
        let hi = a[i].hi.min(b[j].hi);
        if lo < hi {
            out.push((lo, hi));
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn subtract_pairs(a: &[Interval], b: &[Interval]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut j = 0;
    for iv in a {
        let mut cursor = iv.lo;
        while j < b.len() && b[j].hi <= iv.lo {
            j += 1;
        }
        let mut k = j;
        while k < b.len() && b[k].lo < iv.hi {
            if b[k].lo > cursor {
                out.push((cursor, b[k].lo));
            }
            cursor = cursor.max(b[k].hi);
            k += 1;
        }
        if cursor < iv.hi {
            out.push((cursor, iv.hi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(raw: &[(f64, f64)]) -> IntervalSet {
        normalize_intervals(raw).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let s = set(&[(2.0, 3.0), (0.0, 1.0)]);
        assert_eq!(s.pairs(), vec![(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(s.measure(), 2.0);

        assert_eq!(set(&[(0.0, 1.0), (0.5, 2.0)]).pairs(), vec![(0.0, 2.0)]);

        let empty = set(&[]);
        assert!(empty.is_empty());
        assert_eq!(empty.measure(), 0.0);
    }

    #[test]
    fn normalize_drops_zero_length_and_merges_touching() {
        let s = set(&[(0.0, 0.0), (0.0, 1.0), (1.0, 2.0), (5.0, 5.0)]);
        assert_eq!(s.pairs(), vec![(0.0, 2.0)]);
        let s = set(&[(0.0, 1.0), (1.0 + 0.5e-12, 2.0)]);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert!(normalize_intervals(&[(0.0, f64::NAN)]).is_err());
        assert!(normalize_intervals(&[(f64::NEG_INFINITY, 0.0)]).is_err());
        assert!(normalize_intervals(&[(1.0, 0.0)]).is_err());
        assert!(Interval::new(1.0, 1.0).is_err());
    }

    #[test]
    fn translate_examples() {
        let s = translate_set(&set(&[(0.0, 0.1)]), 0.9);
        let iv = s.intervals()[0];
        assert!((iv.lo() - 0.9).abs() < 1e-15 && (iv.hi() - 1.0).abs() < 1e-15);

        let s = translate_set(&set(&[(0.0, 1.0), (2.0, 3.0)]), -2.0);
        assert_eq!(s.pairs(), vec![(-2.0, -1.0), (0.0, 1.0)]);
    }

    #[test]
    fn boolean_examples() {
        let a = set(&[(0.0, 1.0)]);
        let b = set(&[(0.5, 1.0)]);
        assert_eq!(set_boolean(&a, &b, BooleanOp::Subtract).pairs(), vec![(0.0, 0.5)]);

        let c = set(&[(2.0, 3.0)]);
        let u = set_boolean(&a, &c, BooleanOp::Union);
        assert_eq!(u.measure(), a.measure() + c.measure());
        assert!(set_boolean(&a, &c, BooleanOp::Intersect).is_empty());
    }

    #[test]
    fn subtract_handles_interior_holes() {
        let a = set(&[(0.0, 10.0)]);
        let holes = set(&[(1.0, 2.0), (3.0, 4.0), (9.5, 12.0)]);
        let d = set_boolean(&a, &holes, BooleanOp::Subtract);
        assert_eq!(d.pairs(), vec![(0.0, 1.0), (2.0, 3.0), (4.0, 9.5)]);
    }

    #[test]
    fn contains_and_csv_roundtrip() {
        let s = set(&[(0.0, 1.0), (2.0, 3.0)]);
        assert!(s.contains(0.5) && s.contains(2.0) && !s.contains(1.5) && !s.contains(3.5));
        assert_eq!(IntervalSet::from_csv(&s.to_csv()).unwrap(), s);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[[0.0,1.0],[2.0,3.0]]");
        assert_eq!(serde_json::from_str::<IntervalSet>(&json).unwrap(), s);
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((-10.0f64..10.0, 0.0f64..3.0), 0..8)
            .prop_map(|v| set(&v.into_iter().map(|(a, l)| (a, a + l)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn inclusion_exclusion(s in arb_set(), t in arb_set()) {
            let u = set_boolean(&s, &t, BooleanOp::Union).measure();
            let i = set_boolean(&s, &t, BooleanOp::Intersect).measure();
            prop_assert!((u + i - s.measure() - t.measure()).abs() < 1e-9);
        }

        #[test]
        fn subtract_complements_intersect(s in arb_set(), t in arb_set()) {
            let d = set_boolean(&s, &t, BooleanOp::Subtract).measure();
            let i = set_boolean(&s, &t, BooleanOp::Intersect).measure();
            prop_assert!((d - (s.measure() - i)).abs() < 1e-9);
        }

        #[test]
        fn translation_preserves_measure(s in arb_set(), t in -100.0f64..100.0) {
            prop_assert!((translate_set(&s, t).measure() - s.measure()).abs() < 1e-9);
        }

        #[test]
        fn normalized_sets_are_sorted_and_separated(s in arb_set()) {
            for w in s.intervals().windows(2) {
                prop_assert!(w[1].lo() > w[0].hi() + MERGE_TOL);
            }
        }
    }
}
