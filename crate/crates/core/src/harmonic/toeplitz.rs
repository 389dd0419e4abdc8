//! Hermitian Toeplitz matrices `T_{jk} = r_{k−j}` with `r_{−m} = conj(r_m)`:
//! FFT matrix–vector products and the Levinson solver.

use crate::{Complex64, LabError, Result};
use nalgebra::DMatrix;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianToeplitz {
    /// `r_0, …, r_{n−1}`, the first row.
    first_row: Vec<Complex64>,
}

impl HermitianToeplitz {
    pub fn new(first_row: Vec<Complex64>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(LabError::input("Toeplitz matrix needs at least one entry"));
        }
        if first_row[0].im.abs() > 1e-12 * first_row[0].norm().max(1.0) {
            return Err(LabError::NotHermitian { asymmetry: first_row[0].im.abs() });
        }
        Ok(HermitianToeplitz { first_row })
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        if k >= j {
            self.first_row[k - j]
        } else {
            self.first_row[j - k].conj()
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |j, k| self.entry(j, k))
    }

    /// `T·x` via circulant embedding.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match the matrix");
        if n <= 64 {
            return (0..n).map(|j| (0..n).map(|k| self.entry(j, k) * x[k]).sum()).collect();
        }
        let size = (2 * n).next_power_of_two();
        let zero = Complex64::new(0.0, 0.0);
        // circulant first column: c_m = conj(r_m), c_{N−m} = r_m
        let mut col = vec![zero; size];
        col[0] = self.first_row[0];
        for m in 1..n {
            col[m] = self.first_row[m].conj();
            col[size - m] = self.first_row[m];
        }
        let mut padded = vec![zero; size];
        padded[..n].copy_from_slice(x);
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        fwd.process(&mut col);
        fwd.process(&mut padded);
        for (p, c) in padded.iter_mut().zip(&col) {
            *p *= c;
        }
        inv.process(&mut padded);
        let scale = 1.0 / size as f64;
        padded[..n].iter().map(|z| z * scale).collect()
    }

    /// Solves `(T + ridge·I)x = b` by the Levinson recursion.
    ///
    /// Fails with [`LabError::SingularGram`] when a prediction error stops
    /// being positive, i.e. when the leading sections are not numerically
    /// positive definite.
    pub fn solve(&self, b: &[Complex64], ridge: f64) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(LabError::input(format!("right-hand side has {} entries for dimension {n}", b.len())));
        }
        let r0 = self.first_row[0].re + ridge;
        let singular = || LabError::SingularGram { suggested_ridge: 1e-12 * self.first_row[0].re.abs().max(f64::MIN_POSITIVE) };
        if !(r0 > 0.0) {
            return Err(singular());
        }
        let r = |m: usize| if m == 0 { Complex64::new(r0, 0.0) } else { self.first_row[m] };
        // forward vector f solves T_k f = e_1; the backward vector is J·conj(f)
        let mut f = Vec::with_capacity(n);
        let mut x = Vec::with_capacity(n);
        f.push(Complex64::new(1.0 / r0, 0.0));
        x.push(b[0] / r0);
        let mut prediction_error = r0;
        for k in 1..n {
            let mut eps_f = Complex64::new(0.0, 0.0);
            let mut eps_x = Complex64::new(0.0, 0.0);
            for j in 0..k {
                let rc = r(k - j).conj();
                eps_f += rc * f[j];
                eps_x += rc * x[j];
            }
            let shrink = 1.0 - eps_f.norm_sqr();
            prediction_error *= shrink;
            if !(shrink > 0.0) || !(prediction_error > 1e-15 * r0) || !prediction_error.is_finite() {
                return Err(singular());
            }
            let alpha = 1.0 / shrink;
            f.push(Complex64::new(0.0, 0.0));
            // f'_i = α(f_i − ε_f·conj(f_{k−i})), updated pairwise in place
            let (mut lo, mut hi) = (0usize, k);
            while lo <= hi {
                let (fl, fh) = (f[lo], f[hi]);
                f[lo] = alpha * (fl - eps_f * fh.conj());
                if lo != hi {
                    f[hi] = alpha * (fh - eps_f * fl.conj());
                }
                lo += 1;
                if hi == 0 {
                    break;
                }
                hi -= 1;
            }
            let gain = b[k] - eps_x;
            x.push(Complex64::new(0.0, 0.0));
            for j in 0..=k {
                x[j] += gain * f[k - j].conj();
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pd(n: usize, seed: u64) -> HermitianToeplitz {
        // Fourier coefficients of a positive trigonometric-like symbol
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut row = vec![Complex64::new(2.0 * n as f64, 0.0)];
        for m in 1..n {
            let decay = 1.0 / (1.0 + m as f64);
            row.push(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay);
        }
        HermitianToeplitz::new(row).unwrap()
    }

    fn random_vec(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    #[test]
    fn fft_matvec_matches_dense() {
        for n in [1, 5, 64, 65, 300] {
            let t = random_pd(n, n as u64);
            let x = random_vec(n, 99);
            let fast = t.matvec(&x);
            let dense = t.to_dense() * nalgebra::DVector::from_vec(x.clone());
            for j in 0..n {
                assert!((fast[j] - dense[j]).norm() < 1e-10 * n as f64, "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn levinson_solves_random_systems() {
        for n in [1, 2, 3, 10, 200] {
            let t = random_pd(n, 7 + n as u64);
            let b = random_vec(n, 3);
            let x = t.solve(&b, 0.0).unwrap();
            let back = t.matvec(&x);
            let err = back.iter().zip(&b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "n = {n}: {err}");
        }
    }

    #[test]
    fn levinson_with_ridge() {
        let t = random_pd(20, 1);
        let b = random_vec(20, 2);
        let x = t.solve(&b, 0.5).unwrap();
        let back = t.matvec(&x);
        for j in 0..20 {
            assert!((back[j] + x[j] * 0.5 - b[j]).norm() < 1e-11);
        }
    }

    #[test]
    fn levinson_reports_singular() {
        // rank-one: all ones
        let t = HermitianToeplitz::new(vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        let b = random_vec(4, 5);
        assert!(matches!(t.solve(&b, 0.0), Err(LabError::SingularGram { .. })));
        assert!(t.solve(&b, 1e-3).is_ok());
    }
}
