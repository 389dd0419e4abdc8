//! Numerical laboratory for exponential systems `E(Λ) = {e(⟨λ, x⟩) : λ ∈ Λ}` on
//! bounded sets of the line and the plane, with `e(x) = exp(2πix)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: exact interval-set algebra, the iterated interval family
//!   and the area-one disk with its lune regions.
//! * [`harmonic`]: closed-form indicator transforms, Gram matrices, moment
//!   vectors and an independent quadrature oracle.
//! * [`riesz`]: extreme Gram eigenvalues, finite-section Riesz bounds,
//!   least-squares expansions and the perturbation experiment.
//! * [`experiments`]: the translation diagnostics, the sector pigeonhole
//!   selector, the interval-family inequality chain and the disk lune run.
//! * [`report`]: fingerprints and deterministic JSON/CSV emission.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod harmonic;
pub mod num;
pub mod report;
pub mod riesz;

pub use error::{LabError, Result};
pub use num_complex::Complex64;
