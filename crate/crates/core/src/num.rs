//! Small numeric helpers shared across modules.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `e(x) = exp(2πix)`, with the argument reduced modulo 1 before the trig call.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let frac = x - x.round();
    let (s, c) = (2.0 * PI * frac).sin_cos();
    Complex64::new(c, s)
}

/// `sin(x)/x`, continuous at zero.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Neumaier-compensated accumulator for real sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated accumulator for complex sums (componentwise Neumaier).
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for CompensatedComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = CompensatedComplexSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule on `[a, b]` after the substitution `s = 3u² − 2u³`,
/// which absorbs square-root endpoint singularities of the integrand.
pub fn smoothed_gauss_legendre(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let len = b - a;
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| {
            let u = 0.5 * (xi + 1.0);
            let s = u * u * (3.0 - 2.0 * u);
            let ds = 6.0 * u * (1.0 - u);
            (a + len * s, 0.5 * wi * ds * len)
        })
        .collect()
}

/// Plain Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).map(|(&xi, &wi)| (mid + half * xi, half * wi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_reduces_argument() {
        let z = e(1e6 + 0.25);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-9);
        assert!((e(0.5) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn sinc_branches_agree() {
        for &x in &[0.0, 1e-6, 9.9e-5, 1.01e-4, 0.3, 2.0] {
            let direct = if x == 0.0 { 1.0 } else { f64::sin(x) / x };
            assert!((sinc(x) - direct).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 64, 257] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}");
            // degree 2n-1 monomial x^(2m) integrates to 2/(2m+1)
            let m = n.saturating_sub(1).min(20);
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(2 * m as i32)).sum();
            assert!((q - 2.0 / (2 * m + 1) as f64).abs() < 1e-13, "n = {n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn smoothed_rule_handles_sqrt_endpoint() {
        let rule = smoothed_gauss_legendre(0.0, 1.0, 40);
        let q: f64 = rule.iter().map(|(s, w)| w * (s * (1.0 - s)).sqrt()).sum();
        assert!((q - PI / 8.0).abs() < 1e-9, "{q}");
        let plain = gauss_legendre_on(2.0, 5.0, 8);
        let q: f64 = plain.iter().map(|(s, w)| w * s * s).sum();
        assert!((q - 39.0).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-12).abs() < 1e-24);
    }
}
