//! Weights `w` for the spaces `L²(S, w)` and the weighted transforms
//! `∫_S w(x) e(tx) dx`.

use super::quadrature::adaptive_gauss_kronrod;
use super::transform::indicator_ft_1d;
use crate::geometry::{normalize_intervals, set_boolean, BooleanOp, Interval, IntervalSet};
use crate::num::{e, CompensatedComplexSum};
use crate::{Complex64, LabError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Per-entry absolute tolerance for weights without a closed form.
const ADAPTIVE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightSpec {
    /// `w = value` on each listed interval and `0` elsewhere.
    PiecewiseConstant { pieces: Vec<(Interval, f64)> },
    /// `w(x) = x^α` for `x ≥ 0`.
    Power { alpha: f64 },
}

impl WeightSpec {
    pub fn piecewise(pieces: Vec<(Interval, f64)>) -> Result<Self> {
        if let Some((_, v)) = pieces.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(LabError::input(format!("weight values must be finite and nonnegative, got {v}")));
        }
        let mut sorted = pieces.clone();
        sorted.sort_by(|a, b| a.0.lo().total_cmp(&b.0.lo()));
        if sorted.windows(2).any(|w| w[1].0.lo() < w[0].0.hi()) {
            return Err(LabError::input("weight pieces overlap"));
        }
        Ok(WeightSpec::PiecewiseConstant { pieces: sorted })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(LabError::input(format!("power weight needs α > −1 for a finite integral, got {alpha}")));
        }
        Ok(WeightSpec::Power { alpha })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightSpec::PiecewiseConstant { pieces } => pieces.iter().find(|(iv, _)| iv.contains(x)).map_or(0.0, |(_, v)| *v),
            WeightSpec::Power { alpha } => {
                if x >= 0.0 {
                    x.powf(*alpha)
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether `w` is nondecreasing on `[0, 1]`.
    pub fn is_increasing_on_unit(&self) -> bool {
        match self {
            WeightSpec::Power { alpha } => *alpha >= 0.0,
            WeightSpec::PiecewiseConstant { pieces } => {
                let unit = Interval::new(0.0, 1.0).expect("valid");
                let vals: Vec<f64> = pieces.iter().filter(|(iv, _)| iv.hi() > unit.lo() && iv.lo() < unit.hi()).map(|(_, v)| *v).collect();
                vals.windows(2).all(|w| w[0] <= w[1])
            }
        }
    }

    /// Checks that `set` lies where the weight is defined.
    pub(crate) fn check_domain(&self, set: &IntervalSet) -> Result<()> {
        if let WeightSpec::Power { .. } = self {
            if set.intervals().first().is_some_and(|iv| iv.lo() < 0.0) {
                return Err(LabError::input("power weight is only defined on [0, ∞)"));
            }
        }
        Ok(())
    }

    /// `∫_S w(x) e(tx) dx`.
    pub fn transform(&self, set: &IntervalSet, t: f64) -> Complex64 {
        match self {
            WeightSpec::PiecewiseConstant { pieces } => pieces
                .iter()
                .filter(|(_, v)| *v != 0.0)
                .map(|(iv, v)| {
                    let piece = IntervalSet::single(iv.lo(), iv.hi()).expect("valid interval");
                    indicator_ft_1d(&set_boolean(set, &piece, BooleanOp::Intersect), t) * *v
                })
                .collect::<CompensatedComplexSum>()
                .value(),
            WeightSpec::Power { alpha } => {
                let clipped = clip_nonnegative(set);
                let alpha = *alpha;
                if alpha.fract() == 0.0 && (0.0..=16.0).contains(&alpha) {
                    let m = alpha as usize;
                    clipped.intervals().iter().map(|iv| monomial_ft(m, iv.lo(), iv.hi(), t)).collect::<CompensatedComplexSum>().value()
                } else {
                    clipped.intervals().iter().map(|iv| power_ft_adaptive(alpha, iv.lo(), iv.hi(), t)).sum()
                }
            }
        }
    }

    /// `∫_S w(x) dx`.
    pub fn mass(&self, set: &IntervalSet) -> f64 {
        self.transform(set, 0.0).re
    }
}

fn clip_nonnegative(set: &IntervalSet) -> IntervalSet {
    let raw: Vec<(f64, f64)> = set.pairs().into_iter().filter(|&(_, hi)| hi > 0.0).map(|(lo, hi)| (lo.max(0.0), hi)).collect();
    normalize_intervals(&raw).expect("clipped intervals are valid")
}

/// `∫_a^b x^m e(tx) dx` in closed form, expanded about the midpoint.
pub(crate) fn monomial_ft(m: usize, a: f64, b: f64, t: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let omega = 2.0 * PI * t;
    let moments = symmetric_moments(m, h, omega);
    // (c + y)^m = Σ_j C(m, j) c^{m−j} y^j
    let mut acc = CompensatedComplexSum::new();
    let mut binom = 1.0;
    for (j, mom) in moments.iter().enumerate() {
        if j > 0 {
            binom *= (m - j + 1) as f64 / j as f64;
        }
        acc.add(*mom * (binom * c.powi((m - j) as i32)));
    }
    e(t * c) * acc.value()
}

/// `J_j = ∫_{−h}^{h} y^j e^{iωy} dy` for `j = 0..=m`.
fn symmetric_moments(m: usize, h: f64, omega: f64) -> Vec<Complex64> {
    // J_j = 2∫_0^h y^j cos(ωy) for even j, 2i∫_0^h y^j sin(ωy) for odd j
    let (cos_int, sin_int) = if (omega * h).abs() <= 8.0 { half_moments_series(m, h, omega) } else { half_moments_recursive(m, h, omega) };
    (0..=m)
        .map(|j| if j % 2 == 0 { Complex64::new(2.0 * cos_int[j], 0.0) } else { Complex64::new(0.0, 2.0 * sin_int[j]) })
        .collect()
}

/// `(∫_0^h y^j cos ωy, ∫_0^h y^j sin ωy)` by Taylor series in `ωy`.
fn half_moments_series(m: usize, h: f64, omega: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cos_int = vec![0.0; m + 1];
    let mut sin_int = vec![0.0; m + 1];
    for j in 0..=m {
        // Σ_k (−1)^k ω^{2k} h^{2k+j+1} / ((2k)!(2k+j+1)) and the odd analogue
        let mut coef = h.powi(j as i32 + 1);
        let (mut c_acc, mut s_acc) = (0.0, 0.0);
        for n in 0..80usize {
            let term = coef / (n + j + 1) as f64;
            if n % 2 == 0 {
                if (n / 2) % 2 == 0 {
                    c_acc += term;
                } else {
                    c_acc -= term;
                }
            } else if (n / 2) % 2 == 0 {
                s_acc += term;
            } else {
                s_acc -= term;
            }
            coef *= omega * h / (n + 1) as f64;
            if coef.abs() < 1e-18 * (c_acc.abs() + s_acc.abs()) && n > 4 {
                break;
            }
        }
        cos_int[j] = c_acc;
        sin_int[j] = s_acc;
    }
    (cos_int, sin_int)
}

/// Same integrals by integration by parts, stable once `ωh` exceeds `m`.
fn half_moments_recursive(m: usize, h: f64, omega: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = (omega * h).sin_cos();
    let mut cos_int = vec![0.0; m + 1];
    let mut sin_int = vec![0.0; m + 1];
    cos_int[0] = s / omega;
    sin_int[0] = (1.0 - c) / omega;
    let mut hp = 1.0;
    for j in 1..=m {
        hp *= h;
        let jf = j as f64;
        cos_int[j] = hp * s / omega - jf / omega * sin_int[j - 1];
        sin_int[j] = -hp * c / omega + jf / omega * cos_int[j - 1];
    }
    (cos_int, sin_int)
}

fn power_ft_adaptive(alpha: f64, a: f64, b: f64, t: f64) -> Complex64 {
    if alpha >= 0.0 {
        return adaptive_gauss_kronrod(|x| e(t * x) * x.powf(alpha), a, b, ADAPTIVE_TOL);
    }
    // x = u^β with β = 1/(α+1) removes the singularity at the origin:
    // ∫ x^α g(x) dx = β ∫ g(u^β) du over [a^{α+1}, b^{α+1}]
    let beta = 1.0 / (alpha + 1.0);
    let ua = a.powf(alpha + 1.0);
    let ub = b.powf(alpha + 1.0);
    adaptive_gauss_kronrod(|u| e(t * u.powf(beta)), ua, ub, ADAPTIVE_TOL) * beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::quadrature::simpson;

    fn oracle(w: &WeightSpec, a: f64, b: f64, t: f64) -> Complex64 {
        simpson(|x| e(t * x) * w.eval(x), a, b, 200_000)
    }

    #[test]
    fn monomial_matches_quadrature_in_both_regimes() {
        for m in 0..=5 {
            for &t in &[0.0, 0.3, 2.0, 17.5, -250.0, 4000.0] {
                let w = WeightSpec::power(m as f64).unwrap();
                let closed = monomial_ft(m, 0.2, 0.9, t);
                let q = oracle(&w, 0.2, 0.9, t);
                assert!((closed - q).norm() < 1e-10, "m = {m}, t = {t}: {closed} vs {q}");
            }
        }
    }

    #[test]
    fn linear_weight_closed_form() {
        // ∫_0^1 x e(kx) dx = 1/(2πik) for integer k ≠ 0
        let w = WeightSpec::power(1.0).unwrap();
        let unit = IntervalSet::single(0.0, 1.0).unwrap();
        for k in [1.0, -3.0, 20000.0, 40000.0] {
            let expected = Complex64::new(0.0, -1.0 / (2.0 * PI * k));
            assert!((w.transform(&unit, k) - expected).norm() < 1e-14, "k = {k}");
        }
        assert!((w.mass(&unit) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fractional_powers() {
        for alpha in [0.5, -0.5, 2.3] {
            let w = WeightSpec::power(alpha).unwrap();
            let set = IntervalSet::single(0.0, 1.0).unwrap();
            let t = 3.7;
            let q = w.transform(&set, t);
            let reference = if alpha < 0.0 {
                // substitute x = u² to remove the singularity for the oracle
                simpson(|u| e(t * u * u) * 2.0 * u.powf(2.0 * alpha + 1.0), 0.0, 1.0, 200_000)
            } else {
                oracle(&w, 0.0, 1.0, t)
            };
            assert!((q - reference).norm() < 1e-9, "α = {alpha}: {q} vs {reference}");
        }
        assert!(WeightSpec::power(-1.0).is_err());
    }

    #[test]
    fn piecewise_constant() {
        let w = WeightSpec::piecewise(vec![(Interval::new(0.5, 1.0).unwrap(), 2.0), (Interval::new(0.0, 0.5).unwrap(), 1.0)]).unwrap();
        assert!(w.is_increasing_on_unit());
        let set = IntervalSet::single(0.0, 1.0).unwrap();
        assert!((w.mass(&set) - 1.5).abs() < 1e-15);
        // Simpson on each side of the jump
        let q = simpson(|x| e(1.3 * x), 0.0, 0.5, 2000) + simpson(|x| e(1.3 * x) * 2.0, 0.5, 1.0, 2000);
        assert!((w.transform(&set, 1.3) - q).norm() < 1e-8);
        assert!(WeightSpec::piecewise(vec![(Interval::new(0.0, 1.0).unwrap(), -1.0)]).is_err());
        assert!(WeightSpec::piecewise(vec![(Interval::new(0.0, 1.0).unwrap(), 1.0), (Interval::new(0.5, 2.0).unwrap(), 1.0)]).is_err());
    }

    #[test]
    fn power_weight_rejects_negative_domain() {
        let w = WeightSpec::power(1.0).unwrap();
        assert!(w.check_domain(&IntervalSet::single(-1.0, 1.0).unwrap()).is_err());
        assert!(w.check_domain(&IntervalSet::single(0.0, 1.0).unwrap()).is_ok());
    }
}
