//! Extreme eigenvalues of Hermitian Gram matrices.

use crate::harmonic::{GramMatrix, GramStorage};
use crate::{Complex64, LabError, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Largest dense problem handled by full symmetric reduction.
pub const DENSE_LIMIT: usize = 2048;
/// Largest problem accepted at all.
pub const MAX_DIMENSION: usize = 4096;
const ASYMMETRY_TOL: f64 = 1e-8;
const LANCZOS_MAX_STEPS: usize = 400;

/// `(λ_min, λ_max)` of a Hermitian matrix.
///
/// Dense symmetric reduction up to [`DENSE_LIMIT`]; beyond that, Lanczos with
/// full reorthogonalisation from a fixed start vector.
pub fn extreme_eigenvalues(g: &GramMatrix) -> Result<(f64, f64)> {
    let n = g.dim();
    if n > MAX_DIMENSION {
        return Err(LabError::input(format!("dimension {n} exceeds the eigenvalue limit {MAX_DIMENSION}")));
    }
    let asym = g.max_asymmetry();
    if asym > ASYMMETRY_TOL {
        return Err(LabError::NotHermitian { asymmetry: asym });
    }
    if n <= DENSE_LIMIT {
        Ok(dense_extremes(g.to_dense()))
    } else {
        Ok(lanczos_extremes(g))
    }
}

/// Same as [`extreme_eigenvalues`] for a plain dense matrix.
pub fn extreme_eigenvalues_dense(m: &DMatrix<Complex64>) -> Result<(f64, f64)> {
    let g = crate::harmonic::GramMatrix::from_dense(m.clone(), crate::harmonic::DomainTag::IntervalSet)?;
    extreme_eigenvalues(&g)
}

fn dense_extremes(mut m: DMatrix<Complex64>) -> (f64, f64) {
    // symmetrise exactly so the reduction sees a Hermitian matrix
    let n = m.nrows();
    for j in 0..n {
        m[(j, j)].im = 0.0;
        for k in j + 1..n {
            let avg = 0.5 * (m[(j, k)] + m[(k, j)].conj());
            m[(j, k)] = avg;
            m[(k, j)] = avg.conj();
        }
    }
    let ev = m.symmetric_eigenvalues();
    (ev.min(), ev.max())
}

fn lanczos_extremes(g: &GramMatrix) -> (f64, f64) {
    let n = g.dim();
    let steps = LANCZOS_MAX_STEPS.min(n);
    let start: Vec<Complex64> = (0..n)
        .map(|j| {
            let a = (j as f64 * 0.618_033_988_749_894_9).fract() - 0.5;
            let b = (j as f64 * 0.414_213_562_373_095_1).fract() - 0.5;
            Complex64::new(a + 0.1, b)
        })
        .collect();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut v = normalized(start);
    let scale = match g.storage() {
        GramStorage::Toeplitz(t) => t.first_row()[0].re.abs(),
        GramStorage::Dense(m) => m.diagonal().iter().map(|z| z.re.abs()).fold(0.0, f64::max),
    }
    .max(f64::MIN_POSITIVE);
    let mut last = (f64::NAN, f64::NAN);
    for step in 0..steps {
        let mut w = g.matvec(&v);
        let a: f64 = v.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
        alpha.push(a);
        basis.push(v.clone());
        // two passes of classical Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let proj: Complex64 = q.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let b = norm(&w);
        let done = b <= 1e-13 * scale;
        if step % 10 == 9 || done || step + 1 == steps {
            let (lo, hi, res_lo, res_hi) = tridiagonal_extremes(&alpha, &beta, b);
            let tol = 1e-11 * hi.abs().max(scale * 1e-3);
            let converged = res_lo <= tol && res_hi <= tol;
            let stalled = (lo - last.0).abs() <= 1e-14 * hi.abs() && (hi - last.1).abs() <= 1e-14 * hi.abs();
            last = (lo, hi);
            if done || converged || stalled {
                break;
            }
        }
        beta.push(b);
        v = w.into_iter().map(|z| z / b).collect();
    }
    last
}

/// Extreme Ritz values of the tridiagonal matrix and their residual bounds
/// `|β_m s_{m,i}|`.
fn tridiagonal_extremes(alpha: &[f64], beta: &[f64], next_beta: f64) -> (f64, f64, f64, f64) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (mut imin, mut imax) = (0, 0);
    for i in 0..m {
        if eig.eigenvalues[i] < eig.eigenvalues[imin] {
            imin = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[imax] {
            imax = i;
        }
    }
    let res = |i: usize| (next_beta * eig.eigenvectors[(m - 1, i)]).abs();
    (eig.eigenvalues[imin], eig.eigenvalues[imax], res(imin), res(imax))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let s = norm(&v);
    v.into_iter().map(|z| z / s).collect()
}
