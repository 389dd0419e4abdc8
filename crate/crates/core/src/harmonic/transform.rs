//! Closed-form Fourier transforms of indicators, with the convention
//! `∫ 1_S(x) e(+tx) dx`.

use crate::geometry::{Disk, IntervalSet};
use crate::num::{e, sinc, CompensatedComplexSum};
use crate::Complex64;
use std::f64::consts::PI;

/// `∫_S e(tx) dx`.
///
/// Each interval contributes `len·sinc(π t len)·e(t·mid)`, which is exact,
/// continuous at `t = 0` and free of the cancellation in
/// `(e(tb) − e(ta))/(2πit)` for small `t`.
pub fn indicator_ft_1d(set: &IntervalSet, t: f64) -> Complex64 {
    set.intervals()
        .iter()
        .map(|iv| {
            let len = iv.len();
            e(t * iv.midpoint()) * (len * sinc(PI * t * len))
        })
        .collect::<CompensatedComplexSum>()
        .value()
}

/// Bessel function of the first kind, order one.
///
/// Power series for `|x| ≤ 12`, Hankel's asymptotic expansion (truncated at
/// its smallest term) beyond.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= 12.0 { j1_series(ax) } else { j1_asymptotic(ax) };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

fn j1_series(x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half;
    let mut sum = term;
    for m in 1..60 {
        term *= q / (m as f64 * (m + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn j1_asymptotic(x: f64) -> f64 {
    // a_k = Π_{i=1..k} (4 − (2i−1)²) / (k!·8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    let mut xpow = 1.0;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (4.0 - odd * odd) / (k as f64 * 8.0);
            xpow *= x;
        }
        let term = a / xpow;
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
    }
    let chi = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `∫_{|x| ≤ r} e(⟨ξ, x⟩) dx` as a function of `|ξ|`: `r·J₁(2πr|ξ|)/|ξ|`,
/// and `πr²` at zero.
pub fn indicator_ft_disk(r: f64, xi_norm: f64) -> f64 {
    let x = 2.0 * PI * r * xi_norm;
    if x < 1e-4 {
        // 2πr²·J₁(x)/x
        let x2 = x * x;
        return 2.0 * PI * r * r * (0.5 - x2 / 16.0 + x2 * x2 / 384.0);
    }
    r * bessel_j1(x) / xi_norm
}

/// `∫_D e(⟨ξ, x⟩) dx` for a disk with arbitrary center.
pub fn disk_ft(disk: &Disk, xi: [f64; 2]) -> Complex64 {
    let c = disk.center();
    e(xi[0] * c[0] + xi[1] * c[1]) * indicator_ft_disk(disk.radius(), xi[0].hypot(xi[1]))
}

/// Transform of the mollifier `(4/ε)·1_{[−ε/8, ε/8]}`: `sinc(πλε/4)`.
pub fn mollifier_ft(eps: f64, lam: f64) -> f64 {
    sinc(PI * lam * eps / 4.0)
}
