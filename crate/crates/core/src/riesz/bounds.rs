//! Finite-section Riesz bounds.

use super::eigen::extreme_eigenvalues;
use crate::harmonic::{gram_matrix, Domain, ExponentialSystem, GramMatrix, Structure, WeightSpec};
use crate::report::fingerprint;
use crate::Result;
use serde::{Deserialize, Serialize};

/// A section whose smallest eigenvalue is below this fraction of the largest
/// is treated as singular: the gap is within eigenvalue round-off.
pub const SINGULAR_RATIO: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsOutcome {
    Bounded,
    NumericallySingular,
}

/// Bounds divided by the (weighted) measure of the domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedBounds {
    pub lower: f64,
    pub upper: f64,
    pub constant: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fingerprints {
    pub system: String,
    pub domain: String,
    pub weight: Option<String>,
}

impl Fingerprints {
    pub fn of(system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>) -> Self {
        Fingerprints { system: fingerprint(system), domain: fingerprint(domain), weight: weight.map(fingerprint) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    /// Smallest Gram eigenvalue.
    pub lower: f64,
    /// Largest Gram eigenvalue.
    pub upper: f64,
    /// `max(upper, 1/lower)`; `None` for a numerically singular section.
    pub constant: Option<f64>,
    pub outcome: BoundsOutcome,
    pub dimension: usize,
    pub truncation: String,
    /// `∫_domain w`.
    pub measure: f64,
    /// Present when the measure differs from one.
    pub normalized: Option<NormalizedBounds>,
    pub fingerprints: Fingerprints,
}

impl RieszBounds {
    pub fn is_singular(&self) -> bool {
        self.outcome == BoundsOutcome::NumericallySingular
    }

    /// `upper/lower`, if finite.
    pub fn conditioning(&self) -> Option<f64> {
        (!self.is_singular()).then(|| self.upper / self.lower)
    }
}

fn constant_of(lower: f64, upper: f64) -> (Option<f64>, BoundsOutcome) {
    if lower <= SINGULAR_RATIO * upper.abs() {
        (None, BoundsOutcome::NumericallySingular)
    } else {
        (Some(upper.max(1.0 / lower)), BoundsOutcome::Bounded)
    }
}

pub fn describe_truncation(system: &ExponentialSystem) -> String {
    let n = system.len();
    match (system.structure(), system.line_freqs()) {
        (Structure::Progression { start, step }, _) => {
            format!("{n} frequencies {start} + k·{step}, k = 0..{}", n - 1)
        }
        (_, Some(f)) => {
            let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            format!("{n} frequencies in [{lo}, {hi}], separation {}", system.separation())
        }
        (_, None) => format!("{n} planar frequencies, separation {}", system.separation()),
    }
}

/// Bounds from an already assembled Gram matrix.
pub fn riesz_bounds_from_gram(g: &GramMatrix, system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>) -> Result<RieszBounds> {
    let (lower, upper) = extreme_eigenvalues(g)?;
    let (constant, outcome) = constant_of(lower, upper);
    let measure = domain.weighted_measure(weight)?;
    let normalized = ((measure - 1.0).abs() > 1e-12).then(|| {
        let (lo, hi) = (lower / measure, upper / measure);
        NormalizedBounds { lower: lo, upper: hi, constant: constant_of(lo, hi).0 }
    });
    Ok(RieszBounds {
        lower,
        upper,
        constant,
        outcome,
        dimension: g.dim(),
        truncation: describe_truncation(system),
        measure,
        normalized,
        fingerprints: Fingerprints::of(system, domain, weight),
    })
}

pub fn riesz_bounds(system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>) -> Result<RieszBounds> {
    let g = gram_matrix(system, domain, weight)?;
    riesz_bounds_from_gram(&g, system, domain, weight)
}
