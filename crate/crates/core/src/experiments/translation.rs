//! Coefficient translation: expand `f`, multiply the coefficients by
//! `e(−⟨λ, t⟩)` and measure the energy of the translated synthesis.

use crate::geometry::{IntervalSet, Interval};
use crate::harmonic::{function_energy, gram_matrix, moment_vector, Coefficients, Domain, ExponentialSystem, FunctionSpec, Region, WeightSpec};
use crate::riesz::{expansion_from_parts, Fingerprints};
use crate::{LabError, Result};
use serde::{Deserialize, Serialize};

/// `d_λ = c_λ·e(−⟨λ, t⟩)`; `t` has one entry per dimension of the system.
pub fn translate_coefficients(c: &Coefficients, system: &ExponentialSystem, t: &[f64]) -> Result<Coefficients> {
    c.check_aligned(system)?;
    if t.len() != system.dimension() {
        return Err(LabError::input(format!("shift has {} components for a {}-D system", t.len(), system.dimension())));
    }
    if t.iter().any(|x| !x.is_finite()) {
        return Err(LabError::input("shift must be finite"));
    }
    let shift = [-t[0], t.get(1).map_or(0.0, |y| -y)];
    Ok(Coefficients::new(c.values().iter().enumerate().map(|(j, z)| z * system.phase(j, shift)).collect()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub shift: Vec<f64>,
    /// `Σ|c_λ|²`.
    pub coeff_energy: f64,
    /// `‖f‖²_{L²(S,w)}`.
    pub f_energy: f64,
    /// `‖g_t‖²_{L²(S,w)}` for `g_t = Σ d_λ e(λx)`.
    pub g_energy: f64,
    /// `g_energy / f_energy`.
    pub ratio: f64,
    /// `√max(r, 1/r)`.
    pub implied_k: f64,
    /// `‖f − P‖²` of the expansion that produced the coefficients.
    pub residual_energy: f64,
    pub dimension: usize,
    pub fingerprints: Fingerprints,
}

pub fn implied_k_from_ratio(r: f64) -> f64 {
    r.max(1.0 / r).sqrt()
}

pub fn translation_diagnostic(domain: &Domain, weight: Option<&WeightSpec>, system: &ExponentialSystem, f: &FunctionSpec, t: &[f64]) -> Result<TranslationReport> {
    let g = gram_matrix(system, domain, weight)?;
    let b = moment_vector(f, system, domain, weight)?;
    let f_energy = function_energy(f, domain, weight)?;
    let fingerprints = Fingerprints::of(system, domain, weight);
    let expansion = expansion_from_parts(&g, &b, f_energy, 0.0, fingerprints.clone(), false)?;
    let d = translate_coefficients(&expansion.coefficients, system, t)?;
    let g_energy = g.quadratic_form(d.values());
    if !(f_energy > 0.0) {
        return Err(LabError::input("target function has zero energy"));
    }
    let ratio = g_energy / f_energy;
    Ok(TranslationReport {
        shift: t.to_vec(),
        coeff_energy: expansion.coefficients.norm_sq(),
        f_energy,
        g_energy,
        ratio,
        implied_k: implied_k_from_ratio(ratio),
        residual_energy: expansion.residual_energy,
        dimension: system.len(),
        fingerprints,
    })
}

/// How the frequency set is chosen for each row of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRule {
    /// Lattice spacing of `Λ`.
    pub step: f64,
    /// `Λ = step·ℤ ∩ [−bound, bound]`.
    pub bound: f64,
}

impl TruncationRule {
    pub fn integers(bound: f64) -> Self {
        TruncationRule { step: 1.0, bound }
    }

    pub fn system(&self) -> Result<ExponentialSystem> {
        ExponentialSystem::symmetric_lattice(self.step, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub eps: f64,
    pub region: Interval,
    pub shift: f64,
    pub implied_k: f64,
    pub ratio: f64,
    /// `‖f(·−t)‖²_w / ‖f‖²_w` computed directly, before truncation loss.
    pub exact_ratio: f64,
    pub exact_implied_k: f64,
    pub f_energy: f64,
    pub g_energy: f64,
    pub coeff_energy: f64,
    pub residual_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedScan {
    pub weight: WeightSpec,
    pub rule: TruncationRule,
    pub dimension: usize,
    pub increasing_weight: bool,
    pub rows: Vec<ScanRow>,
    /// `implied_k` strictly increases along the rows.
    pub strictly_increasing: bool,
}

/// Runs the translation diagnostic on `[0, 1]` for each `ε`: the normalized
/// indicator of `A(ε)` is moved by `t(ε)` towards the end where the weight is
/// larger.
pub fn weighted_scan(weight: &WeightSpec, eps_grid: &[f64], rule: TruncationRule) -> Result<WeightedScan> {
    if eps_grid.is_empty() {
        return Err(LabError::input("ε grid is empty"));
    }
    if let Some(bad) = eps_grid.iter().find(|e| !(**e > 0.0 && **e < 0.5)) {
        return Err(LabError::input(format!("every ε must lie in (0, 1/2), got {bad}")));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(LabError::input("ε grid must be strictly decreasing"));
    }
    let increasing = weight.is_increasing_on_unit();
    let decreasing = match weight {
        WeightSpec::Power { alpha } => *alpha <= 0.0,
        WeightSpec::PiecewiseConstant { pieces } => {
            let vals: Vec<f64> = pieces.iter().filter(|(iv, _)| iv.hi() > 0.0 && iv.lo() < 1.0).map(|(_, v)| *v).collect();
            vals.windows(2).all(|w| w[0] >= w[1])
        }
    };
    if !increasing && !decreasing {
        return Err(LabError::input("the scan needs a monotone weight on [0, 1]"));
    }
    let unit = IntervalSet::single(0.0, 1.0)?;
    let domain = Domain::Intervals(unit);
    let system = rule.system()?;
    let g = gram_matrix(&system, &domain, Some(weight))?;
    let fingerprints = Fingerprints::of(&system, &domain, Some(weight));
    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let (region, shift) = if increasing { (Interval::new(0.0, eps)?, 1.0 - 2.0 * eps) } else { (Interval::new(1.0 - 2.0 * eps, 1.0 - eps)?, -(1.0 - 2.0 * eps)) };
        let set = IntervalSet::single(region.lo(), region.hi())?;
        let f = FunctionSpec::normalized_indicator(Region::Intervals(set.clone()))?;
        let b = moment_vector(&f, &system, &domain, Some(weight))?;
        let f_energy = function_energy(&f, &domain, Some(weight))?;
        let expansion = expansion_from_parts(&g, &b, f_energy, 0.0, fingerprints.clone(), false)?;
        let d = translate_coefficients(&expansion.coefficients, &system, &[shift])?;
        let g_energy = g.quadratic_form(d.values());
        let ratio = g_energy / f_energy;
        let moved = IntervalSet::single(region.lo() + shift, region.hi() + shift)?;
        let exact_ratio = weight.mass(&moved) / weight.mass(&set);
        rows.push(ScanRow {
            eps,
            region,
            shift,
            implied_k: implied_k_from_ratio(ratio),
            ratio,
            exact_ratio,
            exact_implied_k: implied_k_from_ratio(exact_ratio),
            f_energy,
            g_energy,
            coeff_energy: expansion.coefficients.norm_sq(),
            residual_energy: expansion.residual_energy,
        });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].implied_k > w[0].implied_k);
    Ok(WeightedScan { weight: weight.clone(), rule, dimension: system.len(), increasing_weight: increasing, rows, strictly_increasing })
}
