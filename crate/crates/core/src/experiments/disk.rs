//! Lune energies of a translated, expanded small-disk indicator on the disk
//! of area one.

use super::threshold::golden_threshold;
use crate::geometry::{Disk, RegionKind, TwoDiskRegion};
use crate::harmonic::{gram_matrix, moment_vector, function_energy, Coefficients, Domain, ExponentialSystem, FunctionSpec, Region};
use crate::num::e;
use crate::riesz::{expansion_from_parts, riesz_bounds_from_gram, Fingerprints, RieszBounds};
use crate::{Complex64, LabError, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Largest lattice extent handled by the separable synthesizer.
const MAX_TABLE_EXTENT: i64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskParams {
    pub eps: f64,
    pub theta_count: usize,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl DiskParams {
    pub fn new(eps: f64, theta_count: usize) -> Self {
        DiskParams { eps, theta_count, radial_nodes: 256, angular_nodes: 512 }
    }
}

/// 64 angles when `Λ` is invariant under a quarter turn, 256 otherwise.
pub fn default_theta_count(system: &ExponentialSystem) -> usize {
    let Some(freqs) = system.plane_freqs() else { return 256 };
    let key = |p: [f64; 2]| ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64);
    let set: std::collections::HashSet<_> = freqs.iter().map(|&p| key(p)).collect();
    if freqs.iter().all(|&[x, y]| set.contains(&key([-y, x]))) {
        64
    } else {
        256
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskThetaRow {
    pub theta: f64,
    /// `U(θ) = ∫_{(D−t_θ)∖D} |f|²`.
    pub upper_lune: f64,
    /// `L(θ) = ∫_{(D−s_θ)∖D} |f|²`.
    pub lower_lune: f64,
    /// `∫_{(D−t_θ)∩D} |f|²`.
    pub lens: f64,
    /// `∫_{D−t_θ} |f|²` from the Gram quadratic form of the translated coefficients.
    pub translated_energy: f64,
    /// `|U + lens − translated_energy|`.
    pub partition_error: f64,
    /// `∫_{(D−s_θ)∖(D−t_θ)} |f|²`.
    pub crescent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskReport {
    pub params: DiskParams,
    pub dimension: usize,
    pub rows: Vec<DiskThetaRow>,
    /// Mean of the crescent energy over the θ grid.
    pub crescent_mean: f64,
    /// `∫_0^{2π}` of the crescent energy, `2π` times the mean.
    pub crescent_integral: f64,
    pub threshold: f64,
    /// `max_θ max(√(U + 1), 1/√L)`.
    pub implied_k_lower: f64,
    pub max_upper_lune: f64,
    pub min_lower_lune: f64,
    pub max_partition_error: f64,
    /// `Σ|c_λ|²`.
    pub coeff_energy: f64,
    /// `‖Σ c_λ e(⟨λ,·⟩)‖²_{L²(D)}`, which tends to one as the truncation grows.
    pub expansion_energy: f64,
    pub residual_energy: f64,
    pub bounds: RieszBounds,
    pub fingerprints: Fingerprints,
}

/// Evaluates `|Σ c_λ e(⟨λ, x⟩)|²`, using tables of powers when `Λ` lies on
/// the integer lattice.
struct Synthesizer<'a> {
    freqs: &'a [[f64; 2]],
    coeffs: &'a [Complex64],
    lattice: Option<(i64, i64, i64, i64, Vec<(usize, usize)>)>,
}

impl<'a> Synthesizer<'a> {
    fn new(freqs: &'a [[f64; 2]], coeffs: &'a [Complex64]) -> Self {
        let integral = freqs.iter().all(|p| p.iter().all(|v| (v - v.round()).abs() < 1e-12 && v.abs() <= MAX_TABLE_EXTENT as f64));
        let lattice = integral.then(|| {
            let xs = freqs.iter().map(|p| p[0].round() as i64);
            let ys = freqs.iter().map(|p| p[1].round() as i64);
            let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
            let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
            let idx = freqs.iter().map(|p| ((p[0].round() as i64 - x0) as usize, (p[1].round() as i64 - y0) as usize)).collect();
            (x0, x1, y0, y1, idx)
        });
        Synthesizer { freqs, coeffs, lattice }
    }

    /// `start·base^k` for `k = 0..count`.
    fn powers(base: Complex64, count: i64, start: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count as usize);
        let mut z = start;
        for _ in 0..count {
            out.push(z);
            z *= base;
        }
        out
    }

    fn energy_density(&self, p: [f64; 2]) -> f64 {
        let v: Complex64 = match &self.lattice {
            Some((x0, x1, y0, y1, idx)) => {
                let px = Self::powers(e(p[0]), x1 - x0 + 1, e(*x0 as f64 * p[0]));
                let py = Self::powers(e(p[1]), y1 - y0 + 1, e(*y0 as f64 * p[1]));
                idx.iter().zip(self.coeffs).map(|(&(i, j), c)| c * px[i] * py[j]).sum()
            }
            None => self.freqs.iter().zip(self.coeffs).map(|(l, c)| c * e(l[0] * p[0] + l[1] * p[1])).sum(),
        };
        v.norm_sqr()
    }

    fn integrate(&self, region: &TwoDiskRegion, radial: usize, angular: usize) -> f64 {
        region.quadrature_nodes(radial, angular).par_iter().map(|&(p, w)| w * self.energy_density(p)).sum()
    }
}

pub fn disk_run(system: &ExponentialSystem, eps: f64, theta_count: usize) -> Result<DiskReport> {
    disk_run_with(system, &DiskParams::new(eps, theta_count))
}

pub fn disk_run_with(system: &ExponentialSystem, params: &DiskParams) -> Result<DiskReport> {
    let eps = params.eps;
    let disk = Disk::unit_area();
    let r = disk.radius();
    if !(eps > 0.0 && eps < 0.5 * r) {
        return Err(LabError::input(format!("eps must lie in (0, 1/(2√π)), got {eps}")));
    }
    if params.theta_count < 8 {
        return Err(LabError::input(format!("need at least 8 angles, got {}", params.theta_count)));
    }
    if params.radial_nodes < 2 || params.angular_nodes < 8 {
        return Err(LabError::input("quadrature needs at least 2 radial and 8 angular nodes"));
    }
    let Some(freqs) = system.plane_freqs() else {
        return Err(LabError::input("the disk experiment needs a 2-D frequency set"));
    };
    let domain = Domain::Disk(disk);
    let g = gram_matrix(system, &domain, None)?;
    let bounds = riesz_bounds_from_gram(&g, system, &domain, None)?;
    let f = FunctionSpec::normalized_indicator(Region::Disk(Disk::new(eps, [0.0, 0.0])?))?;
    let b = moment_vector(&f, system, &domain, None)?;
    let f_energy = function_energy(&f, &domain, None)?;
    let fingerprints = Fingerprints::of(system, &domain, None);
    let expansion = expansion_from_parts(&g, &b, f_energy, 0.0, fingerprints.clone(), false)?;
    let c = expansion.coefficients.values();
    let synth = Synthesizer::new(freqs, c);
    let (nr, na) = (params.radial_nodes, params.angular_nodes);

    let rows: Vec<DiskThetaRow> = (0..params.theta_count)
        .map(|j| -> Result<DiskThetaRow> {
            let theta = TAU * j as f64 / params.theta_count as f64;
            let (sn, cs) = theta.sin_cos();
            let t = [(r - eps) * cs, (r - eps) * sn];
            let s = [(r + eps) * cs, (r + eps) * sn];
            let dt = disk.translate([-t[0], -t[1]]);
            let ds = disk.translate([-s[0], -s[1]]);
            let upper_lune = synth.integrate(&TwoDiskRegion::new(dt, disk, RegionKind::Lune), nr, na);
            let lower_lune = synth.integrate(&TwoDiskRegion::new(ds, disk, RegionKind::Lune), nr, na);
            let lens = synth.integrate(&TwoDiskRegion::new(dt, disk, RegionKind::Lens), nr, na);
            let crescent = synth.integrate(&TwoDiskRegion::new(ds, dt, RegionKind::Lune), nr, na);
            let shifted = Coefficients::new(c.iter().zip(freqs).map(|(z, l)| z * e(-(l[0] * t[0] + l[1] * t[1]))).collect());
            let translated_energy = g.quadratic_form(shifted.values());
            Ok(DiskThetaRow {
                theta,
                upper_lune,
                lower_lune,
                lens,
                translated_energy,
                partition_error: (upper_lune + lens - translated_energy).abs(),
                crescent,
            })
        })
        .collect::<Result<_>>()?;

    let crescent_mean = rows.iter().map(|x| x.crescent).sum::<f64>() / rows.len() as f64;
    let max_upper_lune = rows.iter().map(|x| x.upper_lune).fold(0.0, f64::max);
    let min_lower_lune = rows.iter().map(|x| x.lower_lune).fold(f64::INFINITY, f64::min);
    let implied_k_lower = rows.iter().map(|x| (x.upper_lune + 1.0).sqrt().max(1.0 / x.lower_lune.sqrt())).fold(1.0, f64::max);
    Ok(DiskReport {
        params: *params,
        dimension: system.len(),
        crescent_mean,
        crescent_integral: 2.0 * PI * crescent_mean,
        threshold: golden_threshold(),
        implied_k_lower,
        max_upper_lune,
        min_lower_lune,
        max_partition_error: rows.iter().map(|x| x.partition_error).fold(0.0, f64::max),
        rows,
        coeff_energy: expansion.coefficients.norm_sq(),
        expansion_energy: g.quadratic_form(c),
        residual_energy: expansion.residual_energy,
        bounds,
        fingerprints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params(theta_count: usize) -> DiskParams {
        DiskParams { eps: 0.1, theta_count, radial_nodes: 48, angular_nodes: 96 }
    }

    #[test]
    fn input_validation() {
        let sys = ExponentialSystem::square_lattice(1).unwrap();
        assert!(disk_run(&sys, 0.0, 16).is_err());
        assert!(disk_run(&sys, 0.3, 16).is_err());
        assert!(disk_run(&sys, 0.1, 4).is_err());
        let line = ExponentialSystem::integer_range(0, 3).unwrap();
        assert!(disk_run(&line, 0.1, 16).is_err());
    }

    #[test]
    fn theta_defaults() {
        assert_eq!(default_theta_count(&ExponentialSystem::square_lattice(2).unwrap()), 64);
        let skew = ExponentialSystem::plane(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(default_theta_count(&skew), 256);
    }

    #[test]
    fn separable_and_direct_synthesis_agree() {
        let freqs: Vec<[f64; 2]> = ExponentialSystem::square_lattice(3).unwrap().plane_freqs().unwrap().to_vec();
        let coeffs: Vec<Complex64> = (0..freqs.len()).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let fast = Synthesizer::new(&freqs, &coeffs);
        assert!(fast.lattice.is_some());
        let slow = Synthesizer { freqs: &freqs, coeffs: &coeffs, lattice: None };
        for p in [[0.1, -0.3], [0.77, 0.2], [-1.1, 0.05]] {
            let (a, b) = (fast.energy_density(p), slow.energy_density(p));
            assert!((a - b).abs() <= 1e-11 * b.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn energy_partition_and_symmetry() {
        let sys = ExponentialSystem::square_lattice(2).unwrap();
        let rep = disk_run_with(&sys, &small_params(16)).unwrap();
        assert!(rep.max_partition_error < 1e-6, "{}", rep.max_partition_error);
        for row in &rep.rows {
            assert!(row.upper_lune >= 0.0 && row.lower_lune >= 0.0 && row.lens >= 0.0 && row.crescent >= 0.0);
        }
        // quarter turns map the lattice to itself
        for j in 0..4 {
            let a = rep.rows[j].upper_lune;
            let b = rep.rows[j + 4].upper_lune;
            assert!((a - b).abs() < 1e-6 * a.max(1.0), "{a} vs {b}");
        }
        assert!((rep.threshold.powi(4) - rep.threshold.powi(2) - 1.0).abs() < 1e-12);
        assert!(rep.implied_k_lower >= 1.0);
    }
}
