//! The iterated interval family `S_1 ⊇ S_2 ⊇ …`.
//!
//! `S_1 = [0,1] ∪ [2,3]`. At stage `k ≥ 2` the rightmost interval of
//! `S_{k-1}` (the continuation) is cut into `N_k + 1` equal pieces and only the
//! left `1/k` of each piece is kept. Kept pieces have a common length `ε_k`
//! and consecutive gaps `(k-1)·ε_k`. The first `N_k` kept pieces are the usable
//! intervals `I_i`; the last one is the continuation for stage `k + 1`.

use super::interval::{normalize_intervals, Interval, IntervalSet};
use crate::{LabError, Result};
use serde::{Deserialize, Serialize};

/// Smallest kept length accepted; below this the set would collapse under the
/// merge tolerance.
const MIN_KEPT_LENGTH: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageInfo {
    pub stage: usize,
    /// `N_k`: number of pieces minus one.
    pub split_count: u64,
    pub keep_fraction: f64,
    /// Common length `ε_k` of the kept pieces.
    pub eps: f64,
    /// Gap between consecutive kept pieces, `(k-1)·ε_k`.
    pub gap: f64,
    /// Interval of `S_{k-1}` that was split.
    pub parent: Interval,
    /// The `N_k` usable intervals `I_i`.
    pub usable: Vec<Interval>,
    pub continuation: Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperSetStages {
    pub stages: usize,
    /// `N_2, …, N_n`.
    pub split_counts: Vec<u64>,
    /// `S_n`.
    pub set: IntervalSet,
    pub measure: f64,
    /// `S_1, …, S_n`.
    pub history: Vec<IntervalSet>,
    /// Metadata for stages `2..=n`.
    pub stage_info: Vec<StageInfo>,
}

impl PaperSetStages {
    /// Metadata of the final stage, `None` when `n = 1`.
    pub fn last_stage(&self) -> Option<&StageInfo> {
        self.stage_info.last()
    }

    /// Kept length `ε_n` of the final stage.
    pub fn eps(&self) -> Option<f64> {
        self.last_stage().map(|s| s.eps)
    }

    pub fn usable_intervals(&self) -> &[Interval] {
        self.last_stage().map_or(&[], |s| s.usable.as_slice())
    }

    /// `S_k` for `1 ≤ k ≤ n`.
    pub fn stage_set(&self, k: usize) -> Option<&IntervalSet> {
        k.checked_sub(1).and_then(|i| self.history.get(i))
    }
}

/// Default desk-scale split counts `N_k = 3^k` for `k = 2..=n`.
pub fn default_split_counts(n: usize) -> Vec<u64> {
    (2..=n).map(|k| 3u64.pow(k as u32)).collect()
}

pub fn build_paper_set(n: usize, split_counts: &[u64]) -> Result<PaperSetStages> {
    if n < 1 {
        return Err(LabError::input("stage count must be at least 1"));
    }
    if split_counts.len() != n - 1 {
        return Err(LabError::input(format!(
            "stage count {n} needs {} split counts, got {}",
            n - 1,
            split_counts.len()
        )));
    }
    if let Some(pos) = split_counts.iter().position(|&c| c == 0) {
        return Err(LabError::input(format!("split count for stage {} must be positive", pos + 2)));
    }

    let mut intervals = vec![Interval::new(0.0, 1.0)?, Interval::new(2.0, 3.0)?];
    let mut history = vec![IntervalSet::from_sorted_unchecked(intervals.clone())];
    let mut stage_info = Vec::with_capacity(n.saturating_sub(1));

    for (idx, &count) in split_counts.iter().enumerate() {
        let k = idx + 2;
        let parent = intervals.pop().expect("continuation is always the last interval");
        let pieces = count as f64 + 1.0;
        let piece = parent.len() / pieces;
        let eps = piece / k as f64;
        if eps < MIN_KEPT_LENGTH {
            return Err(LabError::input(format!(
                "stage {k}: kept length {eps:e} is below desk scale ({MIN_KEPT_LENGTH:e})"
            )));
        }
        let mut kept = Vec::with_capacity(count as usize + 1);
        for j in 0..=count {
            let lo = parent.lo() + j as f64 * piece;
            kept.push(Interval::new(lo, lo + eps)?);
        }
        let continuation = *kept.last().expect("at least two kept pieces");
        intervals.extend_from_slice(&kept);
        history.push(IntervalSet::from_sorted_unchecked(intervals.clone()));
        kept.pop();
        stage_info.push(StageInfo {
            stage: k,
            split_count: count,
            keep_fraction: 1.0 / k as f64,
            eps,
            gap: piece - eps,
            parent,
            usable: kept,
            continuation,
        });
    }

    let set = history.last().expect("history holds S_1").clone();
    Ok(PaperSetStages { stages: n, split_counts: split_counts.to_vec(), measure: set.measure(), set, history, stage_info })
}

/// The left-edge region `A = ⋃ [a_i − nε, a_i + ε]` over intervals `[a_i, b_i]`
/// of a set that are strictly longer than `ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRegion {
    pub region: IntervalSet,
    /// Number `e` of intervals longer than `ε`.
    pub long_count: usize,
    /// `e·(n+1)·ε`, the measure when the edge windows are disjoint.
    pub nominal_measure: f64,
    /// Edge windows overlapped and were merged.
    pub overlapping: bool,
}

/// Builds `A` for the final stage of `stages`, checking that `n` and `eps` match it.
pub fn left_edge_region(stages: &PaperSetStages, n: usize, eps: f64) -> Result<EdgeRegion> {
    if n != stages.stages {
        return Err(LabError::input(format!("stage mismatch: set has {} stages, asked for {n}", stages.stages)));
    }
    let Some(stage_eps) = stages.eps() else {
        return Err(LabError::input("stage 1 has no kept length; the edge region needs n ≥ 2"));
    };
    if (eps - stage_eps).abs() > 1e-9 * stage_eps {
        return Err(LabError::input(format!("eps {eps:e} does not match the stage-{n} kept length {stage_eps:e}")));
    }
    left_edge_region_for(&stages.set, n, eps)
}

/// Builds `A` for an arbitrary set, window multiplier `n` and length `eps`.
pub fn left_edge_region_for(set: &IntervalSet, n: usize, eps: f64) -> Result<EdgeRegion> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(LabError::input(format!("eps must be positive and finite, got {eps}")));
    }
    let threshold = eps * (1.0 + 1e-9);
    let windows: Vec<(f64, f64)> = set
        .intervals()
        .iter()
        .filter(|iv| iv.len() > threshold)
        .map(|iv| (iv.lo() - n as f64 * eps, iv.lo() + eps))
        .collect();
    let long_count = windows.len();
    let region = normalize_intervals(&windows)?;
    let nominal_measure = long_count as f64 * (n as f64 + 1.0) * eps;
    let overlapping = region.measure() < nominal_measure * (1.0 - 1e-12);
    Ok(EdgeRegion { region, long_count, nominal_measure, overlapping })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{set_boolean, BooleanOp};

    #[test]
    fn stage_one_is_two_unit_intervals() {
        let s = build_paper_set(1, &[]).unwrap();
        assert_eq!(s.set.pairs(), vec![(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(s.measure, 2.0);
        assert!(s.eps().is_none());
    }

    #[test]
    fn stage_two_with_three_splits() {
        let s = build_paper_set(2, &[3]).unwrap();
        // 1 + 4 kept pieces of length 1/8
        let expected = 1.0 + 4.0 * (1.0 / 8.0);
        assert!((s.measure - expected).abs() < 1e-15);
        assert!((s.measure - 1.5).abs() < 1e-15);
        let info = s.last_stage().unwrap();
        assert_eq!(info.usable.len(), 3);
        assert!((info.eps - 0.125).abs() < 1e-15);
        assert!((info.continuation.lo() - 2.75).abs() < 1e-15);
    }

    #[test]
    fn stage_two_measure_is_independent_of_splits() {
        for n2 in [1, 2, 7, 9, 40] {
            let s = build_paper_set(2, &[n2]).unwrap();
            assert!((s.measure - 1.5).abs() < 1e-12, "N2 = {n2}");
        }
    }

    #[test]
    fn stage_three_spacing() {
        let s = build_paper_set(3, &[3, 2]).unwrap();
        let info = s.last_stage().unwrap();
        let kept: Vec<Interval> = info.usable.iter().copied().chain([info.continuation]).collect();
        assert_eq!(kept.len(), 3);
        for w in kept.windows(2) {
            assert!((w[0].len() - info.eps).abs() < 1e-15);
            let gap = w[1].lo() - w[0].hi();
            assert!((gap - 2.0 * info.eps).abs() < 1e-14, "gap {gap} vs 2ε {}", 2.0 * info.eps);
        }
        assert!((info.gap - 2.0 * info.eps).abs() < 1e-15);
    }

    #[test]
    fn stages_are_nested() {
        let s = build_paper_set(4, &default_split_counts(4)).unwrap();
        for k in 2..=4 {
            let inner = s.stage_set(k).unwrap();
            let outer = s.stage_set(k - 1).unwrap();
            let meet = set_boolean(inner, outer, BooleanOp::Intersect);
            assert!((meet.measure() - inner.measure()).abs() < 1e-12);
            assert_eq!(meet.len(), inner.len());
        }
        // separately built stages agree with the history
        let s2 = build_paper_set(2, &[9]).unwrap();
        let s1 = build_paper_set(1, &[]).unwrap();
        assert_eq!(set_boolean(&s2.set, &s1.set, BooleanOp::Intersect), s2.set);
    }

    #[test]
    fn every_stage_has_expected_counts() {
        let counts = default_split_counts(4);
        assert_eq!(counts, vec![9, 27, 81]);
        let s = build_paper_set(4, &counts).unwrap();
        for info in &s.stage_info {
            assert_eq!(info.usable.len() as u64, info.split_count);
            assert!((info.keep_fraction - 1.0 / info.stage as f64).abs() < 1e-15);
            assert!((info.gap - (info.stage as f64 - 1.0) * info.eps).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(build_paper_set(0, &[]).is_err());
        assert!(build_paper_set(2, &[]).is_err());
        assert!(build_paper_set(3, &[3, 0]).is_err());
        assert!(build_paper_set(3, &[u64::MAX / 2, 3]).is_err());
    }

    #[test]
    fn edge_region_stage_two() {
        let s = build_paper_set(2, &[3]).unwrap();
        let eps = s.eps().unwrap();
        let a = left_edge_region(&s, 2, eps).unwrap();
        assert_eq!(a.long_count, 1);
        assert_eq!(a.region.pairs(), vec![(-2.0 * eps, eps)]);
        assert!((a.region.measure() - a.nominal_measure).abs() < 1e-15);
        assert!((a.nominal_measure - 3.0 * eps).abs() < 1e-15);
        assert!(!a.overlapping);
    }

    #[test]
    fn edge_region_measure_formula() {
        let s = build_paper_set(3, &[9, 27]).unwrap();
        let eps = s.eps().unwrap();
        let a = left_edge_region(&s, 3, eps).unwrap();
        assert_eq!(a.long_count, 1 + 9);
        assert!(!a.overlapping);
        let expected = a.long_count as f64 * 4.0 * eps;
        assert!((a.region.measure() - expected).abs() < 1e-12);
    }

    #[test]
    fn edge_region_merges_and_flags_overlap() {
        // windows of width (n+1)ε = 0.5 around left edges 0 and 0.3 overlap
        let set = normalize_intervals(&[(0.0, 0.2), (0.3, 0.5)]).unwrap();
        let a = left_edge_region_for(&set, 4, 0.1).unwrap();
        assert_eq!(a.long_count, 2);
        assert!(a.overlapping);
        assert!(a.region.measure() < a.nominal_measure);
    }

    #[test]
    fn edge_region_empty_when_eps_dominates() {
        let s = build_paper_set(2, &[3]).unwrap();
        let a = left_edge_region_for(&s.set, 2, 5.0).unwrap();
        assert!(a.region.is_empty());
        assert_eq!(a.long_count, 0);
    }

    #[test]
    fn edge_region_stage_mismatch() {
        let s = build_paper_set(2, &[3]).unwrap();
        assert!(left_edge_region(&s, 3, s.eps().unwrap()).is_err());
        assert!(left_edge_region(&s, 2, 0.3).is_err());
        let s1 = build_paper_set(1, &[]).unwrap();
        assert!(left_edge_region(&s1, 1, 0.1).is_err());
    }

    #[test]
    fn json_carries_stage_metadata() {
        let s = build_paper_set(3, &[3, 2]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["stage_info"][1]["usable"].as_array().unwrap().len(), 2);
        assert!(v["stage_info"][1]["continuation"].is_array());
        let back: PaperSetStages = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
