//! Stability of the integer system under bounded perturbations.

use super::bounds::{riesz_bounds, RieszBounds};
use crate::geometry::IntervalSet;
use crate::harmonic::{Domain, ExponentialSystem};
use crate::{LabError, Result};

/// The classical lower Riesz bound `(cos πδ − sin πδ)²` for frequencies
/// `k + δ_k` with `|δ_k| ≤ δ < 1/4` on `[0, 1]`.
pub fn kadec_lower_bound(delta: f64) -> f64 {
    let (s, c) = (std::f64::consts::PI * delta).sin_cos();
    (c - s).powi(2)
}

/// Frequencies `k + (−1)^k·δ` for `k ∈ [−n, n]`.
pub fn alternating_perturbation(delta: f64, n: usize) -> Result<ExponentialSystem> {
    if !(0.0..0.5).contains(&delta) {
        return Err(LabError::input(format!("perturbation must satisfy 0 ≤ δ < 1/2, got {delta}")));
    }
    if n < 1 {
        return Err(LabError::input("truncation must be at least 1"));
    }
    let n = n as i64;
    ExponentialSystem::line((-n..=n).map(|k| k as f64 + if k.rem_euclid(2) == 0 { delta } else { -delta }).collect())
}

/// Finite-section bounds of the alternating perturbation on `[0, 1]`.
pub fn kadec_experiment(delta: f64, n: usize) -> Result<RieszBounds> {
    let sys = alternating_perturbation(delta, n)?;
    riesz_bounds(&sys, &Domain::Intervals(IntervalSet::single(0.0, 1.0)?), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_is_orthonormal() {
        let b = kadec_experiment(0.0, 16).unwrap();
        assert!((b.constant.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_large_perturbations() {
        assert!(kadec_experiment(0.5, 4).is_err());
        assert!(kadec_experiment(-0.1, 4).is_err());
        assert!(kadec_experiment(0.1, 0).is_err());
    }

    #[test]
    fn lower_bound_respects_classical_estimate() {
        for delta in [0.05, 0.1, 0.2] {
            let b = kadec_experiment(delta, 24).unwrap();
            assert!(b.lower >= kadec_lower_bound(delta) - 1e-6, "δ = {delta}: {} < {}", b.lower, kadec_lower_bound(delta));
        }
    }
}
