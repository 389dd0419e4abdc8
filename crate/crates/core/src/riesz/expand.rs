//! Least-squares expansion of a function in `E(Λ)` via the normal equations.

use super::bounds::Fingerprints;
use super::eigen::{extreme_eigenvalues, MAX_DIMENSION};
use crate::harmonic::{function_energy, gram_matrix, moment_vector, Coefficients, Domain, ExponentialSystem, FunctionSpec, GramMatrix, GramStorage, WeightSpec};
use crate::{Complex64, LabError, Result};
use nalgebra::{Cholesky, DVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub coefficients: Coefficients,
    /// `‖f − P‖²`, clamped at zero.
    pub residual_energy: f64,
    /// `‖f‖²`.
    pub function_energy: f64,
    /// `‖(G + ridge·I)c − b‖_∞ / ‖b‖_∞`.
    pub normal_equation_error: f64,
    /// Upper/lower Gram eigenvalue ratio; omitted above the eigenvalue size
    /// limit or for singular sections.
    pub conditioning: Option<f64>,
    pub ridge: f64,
    pub fingerprints: Fingerprints,
}

/// Ridge suggested when the factorization fails.
pub fn suggested_ridge(g: &GramMatrix) -> f64 {
    1e-12 * g.trace() / g.dim() as f64
}

/// Solves `(G + ridge·I)c = b`.
pub fn solve_normal_equations(g: &GramMatrix, b: &[Complex64], ridge: f64) -> Result<Vec<Complex64>> {
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(LabError::input(format!("ridge must be finite and nonnegative, got {ridge}")));
    }
    if b.len() != g.dim() {
        return Err(LabError::input(format!("{} moments for a {}-dimensional Gram", b.len(), g.dim())));
    }
    let singular = || LabError::SingularGram { suggested_ridge: suggested_ridge(g) };
    match g.storage() {
        GramStorage::Toeplitz(t) => t.solve(b, ridge).map_err(|e| match e {
            LabError::SingularGram { .. } => singular(),
            other => other,
        }),
        GramStorage::Dense(m) => {
            let mut a = m.clone();
            for j in 0..a.nrows() {
                a[(j, j)] += ridge;
            }
            let chol = Cholesky::new(a).ok_or_else(singular)?;
            let x = chol.solve(&DVector::from_column_slice(b));
            if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(singular());
            }
            Ok(x.iter().copied().collect())
        }
    }
}

/// Assembles the expansion from precomputed pieces.
pub fn expansion_from_parts(
    g: &GramMatrix,
    b: &[Complex64],
    f_energy: f64,
    ridge: f64,
    fingerprints: Fingerprints,
    with_conditioning: bool,
) -> Result<ExpansionResult> {
    let c = solve_normal_equations(g, b, ridge)?;
    let gc = g.matvec(&c);
    let bc: Complex64 = b.iter().zip(&c).map(|(x, y)| x.conj() * y).sum();
    let cgc: f64 = c.iter().zip(&gc).map(|(x, y)| (x.conj() * y).re).sum();
    let residual_energy = (f_energy - 2.0 * bc.re + cgc).max(0.0);
    let bmax = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let err = gc.iter().zip(&c).zip(b).map(|((u, x), v)| (u + x * ridge - v).norm()).fold(0.0, f64::max);
    let normal_equation_error = if bmax > 0.0 { err / bmax } else { err };
    let conditioning = if with_conditioning && g.dim() <= MAX_DIMENSION {
        let (lo, hi) = extreme_eigenvalues(g)?;
        (lo > super::bounds::SINGULAR_RATIO * hi).then(|| hi / lo)
    } else {
        None
    };
    Ok(ExpansionResult {
        coefficients: Coefficients::new(c),
        residual_energy,
        function_energy: f_energy,
        normal_equation_error,
        conditioning,
        ridge,
        fingerprints,
    })
}

pub fn expand_function(f: &FunctionSpec, system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>, ridge: f64) -> Result<ExpansionResult> {
    let g = gram_matrix(system, domain, weight)?;
    let b = moment_vector(f, system, domain, weight)?;
    let f_energy = function_energy(f, domain, weight)?;
    expansion_from_parts(&g, &b, f_energy, ridge, Fingerprints::of(system, domain, weight), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::IntervalSet;
    use crate::harmonic::{Frequency, Region};
    use crate::riesz::riesz_bounds;

    fn unit() -> Domain {
        Domain::Intervals(IntervalSet::single(0.0, 1.0).unwrap())
    }

    #[test]
    fn single_exponential_is_reproduced() {
        let sys = ExponentialSystem::integer_range(0, 15).unwrap();
        let f = FunctionSpec::Exponential { freq: Frequency::Line(5.0) };
        let r = expand_function(&f, &sys, &unit(), None, 0.0).unwrap();
        for (j, c) in r.coefficients.values().iter().enumerate() {
            let expected = if j == 5 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-12);
        }
        assert!(r.residual_energy < 1e-12);
    }

    #[test]
    fn residual_decreases_with_truncation() {
        let eps = 0.1;
        let f = FunctionSpec::normalized_indicator(Region::Intervals(IntervalSet::single(0.0, eps).unwrap())).unwrap();
        let mut prev = f64::INFINITY;
        for n in [8, 16, 32, 64] {
            let sys = ExponentialSystem::integer_range(-n, n).unwrap();
            let r = expand_function(&f, &sys, &unit(), None, 0.0).unwrap();
            assert!(r.residual_energy < prev, "F = {n}");
            assert!(r.normal_equation_error < 1e-8);
            // Parseval: residual equals ‖f‖² − Σ|c|² for an orthonormal system
            assert!((r.residual_energy - (1.0 - r.coefficients.norm_sq())).abs() < 1e-10);
            prev = r.residual_energy;
        }
    }

    #[test]
    fn conditioning_matches_bounds() {
        let set = crate::geometry::normalize_intervals(&[(0.0, 0.4), (0.6, 1.2)]).unwrap();
        let domain = Domain::Intervals(set);
        let sys = ExponentialSystem::line(vec![0.0, 0.7, 1.5, 2.1, -0.8]).unwrap();
        let f = FunctionSpec::normalized_indicator(Region::Intervals(IntervalSet::single(0.1, 0.3).unwrap())).unwrap();
        let r = expand_function(&f, &sys, &domain, None, 0.0).unwrap();
        let b = riesz_bounds(&sys, &domain, None).unwrap();
        assert!((r.conditioning.unwrap() - b.conditioning().unwrap()).abs() < 1e-9 * b.conditioning().unwrap());
        // normal equations pin the residual: ‖f‖² − b*c
        let g = gram_matrix(&sys, &domain, None).unwrap();
        let bvec = moment_vector(&f, &sys, &domain, None).unwrap();
        let bc: Complex64 = bvec.iter().zip(r.coefficients.values()).map(|(x, y)| x.conj() * y).sum();
        assert!((r.residual_energy - (r.function_energy - bc.re)).abs() < 1e-8);
        assert!(g.dim() == 5);
    }

    #[test]
    fn singular_gram_suggests_ridge() {
        let sys = ExponentialSystem::line(vec![0.0, 1e-9, 1.0]).unwrap();
        let f = FunctionSpec::Exponential { freq: Frequency::Line(0.5) };
        let sys_dense = ExponentialSystem::line(vec![1.0, 0.0, 1e-9]).unwrap();
        for s in [&sys, &sys_dense] {
            match expand_function(&f, s, &unit(), None, 0.0) {
                Err(LabError::SingularGram { suggested_ridge }) => assert!((suggested_ridge - 1e-12).abs() < 1e-20),
                other => panic!("expected a singular Gram, got {other:?}"),
            }
            assert!(expand_function(&f, s, &unit(), None, 1e-6).is_ok());
        }
    }

    #[test]
    fn toeplitz_and_dense_expansions_agree() {
        let eps = 0.2;
        let f = FunctionSpec::normalized_indicator(Region::Intervals(IntervalSet::single(0.0, eps).unwrap())).unwrap();
        let domain = Domain::Intervals(crate::geometry::normalize_intervals(&[(0.0, 0.5), (0.7, 1.3)]).unwrap());
        let prog = ExponentialSystem::progression(-3.0, 0.5, 13).unwrap();
        let mut fs = prog.line_freqs().unwrap().to_vec();
        fs.reverse();
        let rev = ExponentialSystem::line(fs).unwrap();
        let a = expand_function(&f, &prog, &domain, None, 0.0).unwrap();
        let b = expand_function(&f, &rev, &domain, None, 0.0).unwrap();
        assert!((a.residual_energy - b.residual_energy).abs() < 1e-10);
        for j in 0..13 {
            assert!((a.coefficients.0[j] - b.coefficients.0[12 - j]).norm() < 1e-8);
        }
    }
}
