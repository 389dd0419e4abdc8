//! Independent numerical integrators, used as oracles for the closed forms
//! and for the few integrals that have none.

use super::gram::Domain;
use crate::geometry::{Disk, IntervalSet};
use crate::{Complex64, LabError, Result};
use std::f64::consts::TAU;

/// Composite Simpson rule on `[a, b]` with `nodes` subintervals (rounded up
/// to even).
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, nodes: usize) -> Complex64 {
    let n = nodes.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Polar tensor grid over a disk: composite Simpson in the radius (with the
/// `ρ` Jacobian) and the trapezoid rule in the angle.
pub fn polar_grid<F: Fn([f64; 2]) -> Complex64>(f: F, disk: &Disk, radial: usize, angular: usize) -> Complex64 {
    let [cx, cy] = disk.center();
    let r = disk.radius();
    let m = angular.max(1);
    let dphi = TAU / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let (s, c) = (k as f64 * dphi).sin_cos();
        acc += simpson(|rho| f([cx + rho * c, cy + rho * s]) * rho, 0.0, r, radial);
    }
    acc * dphi
}

/// Integrand for [`quadrature_oracle`].
pub enum Integrand<'a> {
    Line(&'a dyn Fn(f64) -> Complex64),
    Plane(&'a dyn Fn([f64; 2]) -> Complex64),
}

/// Integrates over a domain with `nodes` Simpson subintervals per interval
/// (1-D) or a `nodes × nodes` polar grid (disk).
pub fn quadrature_oracle(integrand: Integrand<'_>, domain: &Domain, nodes: usize) -> Result<Complex64> {
    if nodes < 2 {
        return Err(LabError::input(format!("quadrature needs at least 2 nodes, got {nodes}")));
    }
    match (integrand, domain) {
        (Integrand::Line(f), Domain::Intervals(set)) => Ok(simpson_on_set(f, set, nodes)),
        (Integrand::Plane(f), Domain::Disk(disk)) => Ok(polar_grid(f, disk, nodes, nodes)),
        _ => Err(LabError::input("integrand dimension does not match the domain")),
    }
}

pub fn simpson_on_set(f: &dyn Fn(f64) -> Complex64, set: &IntervalSet, nodes: usize) -> Complex64 {
    set.intervals().iter().map(|iv| simpson(f, iv.lo(), iv.hi(), nodes)).sum()
}

// Kronrod 15-point nodes/weights and the embedded Gauss 7-point weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive Gauss–Kronrod (7/15) integration to absolute tolerance `tol`.
pub fn adaptive_gauss_kronrod<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn recurse<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth == 0 || (b - a).abs() < 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            return value;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth - 1) + recurse(f, m, b, 0.5 * tol, depth - 1)
    }
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    recurse(&f, a, b, tol, 50)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::normalize_intervals;
    use crate::num::e;

    fn unit() -> Domain {
        Domain::Intervals(normalize_intervals(&[(0.0, 1.0)]).unwrap())
    }

    #[test]
    fn constant_and_orthogonality() {
        let one = |_: f64| Complex64::new(1.0, 0.0);
        let q = quadrature_oracle(Integrand::Line(&one), &unit(), 2).unwrap();
        assert!((q - 1.0).norm() < 1e-15);
        let osc = |x: f64| e(x);
        let q = quadrature_oracle(Integrand::Line(&osc), &unit(), 1000).unwrap();
        assert!(q.norm() < 1e-10);
    }

    #[test]
    fn rejects_too_few_nodes() {
        let one = |_: f64| Complex64::new(1.0, 0.0);
        assert!(quadrature_oracle(Integrand::Line(&one), &unit(), 1).is_err());
        assert!(quadrature_oracle(Integrand::Line(&one), &unit(), 0).is_err());
        let plane = |_: [f64; 2]| Complex64::new(1.0, 0.0);
        assert!(quadrature_oracle(Integrand::Plane(&plane), &unit(), 10).is_err());
    }

    #[test]
    fn simpson_fourth_order() {
        let f = |x: f64| Complex64::new((3.0 * x).exp(), 0.0);
        let exact = ((3.0f64).exp() - 1.0) / 3.0;
        let err = |n: usize| (simpson(f, 0.0, 1.0, n).re - exact).abs();
        for n in [8, 16, 32] {
            let ratio = err(n) / err(2 * n);
            assert!((ratio - 16.0).abs() < 1.0, "n = {n}: ratio {ratio}");
        }
    }

    #[test]
    fn disk_area_by_polar_grid() {
        let d = Domain::Disk(Disk::unit_area());
        let one = |_: [f64; 2]| Complex64::new(1.0, 0.0);
        let q = quadrature_oracle(Integrand::Plane(&one), &d, 64).unwrap();
        assert!((q.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_kronrod_handles_endpoint_singularity() {
        let f = |x: f64| Complex64::new(x.sqrt(), 0.0);
        let q = adaptive_gauss_kronrod(f, 0.0, 1.0, 1e-12);
        assert!((q.re - 2.0 / 3.0).abs() < 1e-11);
        let g = |x: f64| e(7.3 * x) * x.powf(0.5);
        let fine = simpson(g, 0.0, 1.0, 2_000_000);
        let q = adaptive_gauss_kronrod(g, 0.0, 1.0, 1e-12);
        assert!((q - fine).norm() < 1e-8);
    }
}
