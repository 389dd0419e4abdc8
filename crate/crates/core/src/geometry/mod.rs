//! Exact one-dimensional interval-set algebra, the iterated interval family
//! and disk geometry in the plane.

mod disk;
mod interval;
mod paper_set;

pub use disk::{disk_lune_area, ray_chord, Disk, RadialSet, RegionKind, TwoDiskRegion};
pub use interval::{normalize_intervals, set_boolean, translate_set, BooleanOp, Interval, IntervalSet, MERGE_TOL};
pub use paper_set::{build_paper_set, default_split_counts, left_edge_region, left_edge_region_for, EdgeRegion, PaperSetStages, StageInfo};
