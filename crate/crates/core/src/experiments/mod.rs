mod disk;
mod pigeonhole;
mod theorem2;
mod threshold;
mod translation;

pub use pigeonhole::{sector_pigeonhole_select, sector_sum_lowerbound, PigeonholeResult, SampledFamily};
pub use threshold::golden_threshold;
pub use translation::{
    implied_k_from_ratio, translate_coefficients, translation_diagnostic, weighted_scan, ScanRow, TranslationReport, TruncationRule,
    WeightedScan,
};
pub use theorem2::{
    k_hat_nondecreasing, theorem2_run, theorem2_trend, Chain, ExtensionRule, IntervalExpansion, InvariantCheck, MSource, Theorem2Outcome,
    Theorem2Params, Theorem2Report, TranslationRow, K_HAT_LABEL, SCALE_NOTE,
};
pub use disk::{default_theta_count, disk_run, disk_run_with, DiskParams, DiskReport, DiskThetaRow};
