//! Finite-section Riesz bounds, least-squares expansions and the
//! perturbation experiment.

mod bounds;
mod eigen;
mod expand;
mod kadec;

pub use bounds::{
    describe_truncation, riesz_bounds, riesz_bounds_from_gram, BoundsOutcome, Fingerprints, NormalizedBounds, RieszBounds, SINGULAR_RATIO,
};
pub use eigen::{extreme_eigenvalues, extreme_eigenvalues_dense, DENSE_LIMIT, MAX_DIMENSION};
pub use expand::{expand_function, expansion_from_parts, solve_normal_equations, suggested_ridge, ExpansionResult};
pub use kadec::{alternating_perturbation, kadec_experiment, kadec_lower_bound};
