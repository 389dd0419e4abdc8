//! The three-sector pigeonhole selection: among `N` functions whose subset
//! sums are bounded by `M√|U|` on `A`, one has `∫_A |g|² ≤ 6M²|A|/√N`.

use crate::{Complex64, LabError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const SECTOR_SLACK: f64 = 1e-12;

/// `(|Σ z|, Σ |z|)` for values confined to a sector of opening 120°.
pub fn sector_sum_lowerbound(values: &[Complex64]) -> Result<(f64, f64)> {
    let mut args: Vec<f64> = values.iter().filter(|z| z.norm() > 0.0).map(|z| z.arg().rem_euclid(TAU)).collect();
    if args.len() > 1 {
        args.sort_by(f64::total_cmp);
        let mut widest_gap = TAU - (args[args.len() - 1] - args[0]);
        for w in args.windows(2) {
            widest_gap = widest_gap.max(w[1] - w[0]);
        }
        let opening = TAU - widest_gap;
        if opening > TAU / 3.0 + SECTOR_SLACK {
            return Err(LabError::input(format!("values span {:.6} rad, more than a 120° sector", opening)));
        }
    }
    let sum: Complex64 = values.iter().sum();
    let total: f64 = values.iter().map(|z| z.norm()).sum();
    Ok((sum.norm(), total))
}

/// Samples `g_i(x)` of `N` functions on a quadrature grid over `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFamily {
    pub points: Vec<f64>,
    /// Quadrature weights; they sum to `|A|`.
    pub weights: Vec<f64>,
    /// `values[i][p] = g_i(points[p])`.
    pub values: Vec<Vec<Complex64>>,
}

impl SampledFamily {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(LabError::input("no sampled functions"));
        }
        if self.weights.len() != self.points.len() {
            return Err(LabError::input("grid points and weights differ in length"));
        }
        if self.values.iter().any(|row| row.len() != self.points.len()) {
            return Err(LabError::input("every function must be sampled on the full grid"));
        }
        Ok(())
    }

    /// `Σ_p w_p |g_i(x_p)|²`.
    pub fn grid_energy(&self, i: usize) -> f64 {
        self.values[i].iter().zip(&self.weights).map(|(z, w)| w * z.norm_sqr()).sum()
    }

    /// `max_x (Σ_i |g_i(x)|²)^{1/2}`: by Cauchy–Schwarz every subset sum
    /// satisfies `|Σ_U g_i(x)| ≤ M√|U|` on the grid with this `M`.
    pub fn cauchy_schwarz_bound(&self) -> f64 {
        (0..self.points.len()).map(|p| self.values.iter().map(|row| row[p].norm_sqr()).sum::<f64>()).fold(0.0, f64::max).sqrt()
    }

    /// Exact `max_{x, U ≠ ∅} |Σ_U g_i(x)| / √|U|` by enumerating subsets; only
    /// for small families.
    pub fn brute_force_subset_bound(&self) -> Result<f64> {
        let n = self.len();
        if n > 20 {
            return Err(LabError::input(format!("brute force over 2^{n} subsets is not supported")));
        }
        let mut best: f64 = 0.0;
        for p in 0..self.points.len() {
            for mask in 1u32..(1u32 << n) {
                let mut s = Complex64::new(0.0, 0.0);
                for (i, row) in self.values.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        s += row[p];
                    }
                }
                best = best.max(s.norm() / (mask.count_ones() as f64).sqrt());
            }
        }
        Ok(best)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PigeonholeResult {
    /// Index with the smallest grid energy over all functions.
    pub index: usize,
    /// `∫_A |g_index|²` on the grid.
    pub energy: f64,
    /// `6M²|A|/√N`.
    pub bound: f64,
    pub within_bound: bool,
    /// Heaviest sector `j ∈ {1, 2, 3}` at the witness point.
    pub sector: usize,
    pub sector_members: Vec<usize>,
    /// Smallest-energy index inside the heaviest sector.
    pub sector_index: usize,
    pub sector_energy: f64,
    /// Point maximizing `Σ_i |g_i(x)|²`.
    pub witness_point: f64,
    pub m: f64,
    pub n: usize,
    pub a_measure: f64,
    /// `|Σ_{U} g_i(x)| ≤ M√|U|` on every grid point for the sector set `U`.
    pub sector_hypothesis_holds: bool,
    /// Largest `|Σ_U g_i(x)| / (M√|U|)` over the grid for the sector set.
    pub sector_hypothesis_ratio: f64,
    /// `M` dominates the Cauchy–Schwarz bound, so the hypothesis holds for
    /// every subset.
    pub hypothesis_certified: bool,
}

pub fn sector_pigeonhole_select(samples: &SampledFamily, a_measure: f64, m: f64) -> Result<PigeonholeResult> {
    samples.validate()?;
    if !(m > 0.0 && m.is_finite()) {
        return Err(LabError::input(format!("M must be positive and finite, got {m}")));
    }
    if !(a_measure > 0.0) {
        return Err(LabError::input("A must have positive measure"));
    }
    let n = samples.len();
    let npts = samples.points.len();
    if npts == 0 {
        return Err(LabError::input("empty sampling grid"));
    }
    let mass = |p: usize| samples.values.iter().map(|row| row[p].norm_sqr()).sum::<f64>();
    let mut witness = 0;
    let mut best = mass(0);
    for p in 1..npts {
        let v = mass(p);
        if v > best {
            best = v;
            witness = p;
        }
    }
    let mut sectors: [Vec<usize>; 3] = Default::default();
    let mut weight = [0.0f64; 3];
    for (i, row) in samples.values.iter().enumerate() {
        let z = row[witness];
        let j = ((z.arg().rem_euclid(TAU) / (TAU / 3.0)).floor() as usize).min(2);
        sectors[j].push(i);
        weight[j] += z.norm();
    }
    let heaviest = (0..3).fold(0, |acc, j| if weight[j] > weight[acc] { j } else { acc });
    let members = sectors[heaviest].clone();

    let energies: Vec<f64> = (0..n).map(|i| samples.grid_energy(i)).collect();
    let argmin = |idx: &mut dyn Iterator<Item = usize>| idx.fold(None, |acc: Option<usize>, i| match acc {
        Some(a) if energies[a] <= energies[i] => Some(a),
        _ => Some(i),
    });
    let index = argmin(&mut (0..n)).expect("nonempty family");
    let sector_index = argmin(&mut members.iter().copied()).unwrap_or(index);

    let bound = 6.0 * m * m * a_measure / (n as f64).sqrt();
    let mut ratio: f64 = 0.0;
    if !members.is_empty() {
        let root = (members.len() as f64).sqrt();
        for p in 0..npts {
            let s: Complex64 = members.iter().map(|&i| samples.values[i][p]).sum();
            ratio = ratio.max(s.norm() / (m * root));
        }
    }
    Ok(PigeonholeResult {
        index,
        energy: energies[index],
        bound,
        within_bound: energies[index] <= bound,
        sector: heaviest + 1,
        sector_members: members,
        sector_index,
        sector_energy: energies[sector_index],
        witness_point: samples.points[witness],
        m,
        n,
        a_measure,
        sector_hypothesis_holds: ratio <= 1.0 + 1e-12,
        sector_hypothesis_ratio: ratio,
        hypothesis_certified: samples.cauchy_schwarz_bound() <= m * (1.0 + 1e-12),
    })
}
