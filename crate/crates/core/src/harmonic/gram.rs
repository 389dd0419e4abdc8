//! Gram matrices `G_{jk} = ∫ w(x) e(⟨λ_k − λ_j, x⟩) dx`, moment vectors and
//! exact quadratic-form energies.

use super::system::{Coefficients, ExponentialSystem, Frequencies, Frequency, Structure};
use super::toeplitz::HermitianToeplitz;
use super::transform::{disk_ft, indicator_ft_1d};
use super::weight::WeightSpec;
use crate::geometry::{set_boolean, BooleanOp, Disk, IntervalSet};
use crate::{Complex64, LabError, Result};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Integration domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Intervals(IntervalSet),
    Disk(Disk),
}

impl Domain {
    pub fn measure(&self) -> f64 {
        match self {
            Domain::Intervals(s) => s.measure(),
            Domain::Disk(d) => d.area(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Domain::Intervals(_) => 1,
            Domain::Disk(_) => 2,
        }
    }

    /// `∫_domain w(x) e(⟨t, x⟩) dx`.
    pub fn weighted_transform(&self, weight: Option<&WeightSpec>, t: Frequency) -> Result<Complex64> {
        match (self, t, weight) {
            (Domain::Intervals(s), Frequency::Line(t), None) => Ok(indicator_ft_1d(s, t)),
            (Domain::Intervals(s), Frequency::Line(t), Some(w)) => Ok(w.transform(s, t)),
            (Domain::Disk(d), Frequency::Plane(xi), None) => Ok(disk_ft(d, xi)),
            (Domain::Disk(_), _, Some(_)) => Err(LabError::input("weights are only supported on interval domains")),
            _ => Err(LabError::input("frequency dimension does not match the domain")),
        }
    }

    /// `∫_domain w`.
    pub fn weighted_measure(&self, weight: Option<&WeightSpec>) -> Result<f64> {
        let zero = match self {
            Domain::Intervals(_) => Frequency::Line(0.0),
            Domain::Disk(_) => Frequency::Plane([0.0, 0.0]),
        };
        Ok(self.weighted_transform(weight, zero)?.re)
    }

    fn check(&self, system: &ExponentialSystem, weight: Option<&WeightSpec>) -> Result<()> {
        if system.dimension() != self.dimension() {
            return Err(LabError::input(format!("{}-D frequencies on a {}-D domain", system.dimension(), self.dimension())));
        }
        match (self, weight) {
            (Domain::Disk(_), Some(_)) => Err(LabError::input("weights are only supported on interval domains")),
            (Domain::Intervals(s), Some(w)) => w.check_domain(s),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainTag {
    IntervalSet,
    Disk,
    Weighted,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GramStorage {
    Dense(DMatrix<Complex64>),
    /// Frequencies in arithmetic progression give a Toeplitz Gram.
    Toeplitz(HermitianToeplitz),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    storage: GramStorage,
    tag: DomainTag,
}

impl GramMatrix {
    pub fn from_dense(entries: DMatrix<Complex64>, tag: DomainTag) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(LabError::input("Gram matrix must be square and nonempty"));
        }
        Ok(GramMatrix { storage: GramStorage::Dense(entries), tag })
    }

    pub fn from_toeplitz(t: HermitianToeplitz, tag: DomainTag) -> Self {
        GramMatrix { storage: GramStorage::Toeplitz(t), tag }
    }

    pub fn storage(&self) -> &GramStorage {
        &self.storage
    }

    pub fn tag(&self) -> DomainTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            GramStorage::Dense(m) => m.nrows(),
            GramStorage::Toeplitz(t) => t.dim(),
        }
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        match &self.storage {
            GramStorage::Dense(m) => m[(j, k)],
            GramStorage::Toeplitz(t) => t.entry(j, k),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.storage {
            GramStorage::Dense(m) => m.clone(),
            GramStorage::Toeplitz(t) => t.to_dense(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.entry(j, j).re).sum()
    }

    /// Largest `|G_{jk} − conj(G_{kj})|`.
    pub fn max_asymmetry(&self) -> f64 {
        match &self.storage {
            GramStorage::Toeplitz(t) => t.first_row()[0].im.abs(),
            GramStorage::Dense(m) => {
                let n = m.nrows();
                (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).map(|(j, k)| (m[(j, k)] - m[(k, j)].conj()).norm()).fold(0.0, f64::max)
            }
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.storage {
            GramStorage::Dense(m) => {
                let n = m.nrows();
                (0..n).into_par_iter().map(|j| (0..n).map(|k| m[(j, k)] * x[k]).sum()).collect()
            }
            GramStorage::Toeplitz(t) => t.matvec(x),
        }
    }

    /// `c*Gc`, clamped at zero against rounding.
    pub fn quadratic_form(&self, c: &[Complex64]) -> f64 {
        let gc = self.matvec(c);
        c.iter().zip(&gc).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0)
    }

    /// Row-major CSV with interleaved real and imaginary columns.
    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut out = (0..n).map(|k| format!("re_{k},im_{k}")).collect::<Vec<_>>().join(",");
        out.push('\n');
        for j in 0..n {
            let row: Vec<String> = (0..n)
                .map(|k| {
                    let z = self.entry(j, k);
                    format!("{:.16e},{:.16e}", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.dim();
        let rows: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let z = self.entry(j, k);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "dim": n, "domain": self.tag, "entries": rows })
    }
}

/// Assembles the (weighted) Gram matrix of `system` on `domain`.
///
/// A 1-D progression gives a Toeplitz matrix, stored by its first row;
/// everything else is assembled densely in parallel over rows.
pub fn gram_matrix(system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>) -> Result<GramMatrix> {
    domain.check(system, weight)?;
    let tag = match (domain, weight) {
        (_, Some(_)) => DomainTag::Weighted,
        (Domain::Intervals(_), None) => DomainTag::IntervalSet,
        (Domain::Disk(_), None) => DomainTag::Disk,
    };
    let n = system.len();
    if let (Structure::Progression { step, .. }, Domain::Intervals(_)) = (system.structure(), domain) {
        let row: Vec<Complex64> =
            (0..n).into_par_iter().map(|m| domain.weighted_transform(weight, Frequency::Line(m as f64 * step))).collect::<Result<_>>()?;
        let mut row = row;
        row[0].im = 0.0;
        return Ok(GramMatrix::from_toeplitz(HermitianToeplitz::new(row)?, tag));
    }
    let diag = domain.weighted_measure(weight)?;
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (j + 1..n)
                .map(|k| domain.weighted_transform(weight, difference(system.frequencies(), k, j)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut m = DMatrix::from_element(n, n, Complex64::new(diag, 0.0));
    for (j, row) in rows.into_iter().enumerate() {
        for (off, z) in row.into_iter().enumerate() {
            let k = j + 1 + off;
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
        }
    }
    GramMatrix::from_dense(m, tag)
}

/// `λ_k − λ_j`.
fn difference(freqs: &Frequencies, k: usize, j: usize) -> Frequency {
    match freqs {
        Frequencies::Line(v) => Frequency::Line(v[k] - v[j]),
        Frequencies::Plane(v) => Frequency::Plane([v[k][0] - v[j][0], v[k][1] - v[j][1]]),
    }
}

/// Region carried by an indicator function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Intervals(IntervalSet),
    Disk(Disk),
}

impl Region {
    pub fn measure(&self) -> f64 {
        match self {
            Region::Intervals(s) => s.measure(),
            Region::Disk(d) => d.area(),
        }
    }
}

/// A target function on the domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FunctionSpec {
    /// `scale · 1_region`.
    Indicator { region: Region, scale: f64 },
    /// `e(⟨λ₀, x⟩)`.
    Exponential { freq: Frequency },
    /// `Σ c_μ e(⟨μ, x⟩)` over another system.
    Synthesis { system: ExponentialSystem, coefficients: Coefficients },
}

impl FunctionSpec {
    /// `|region|^{−1/2} · 1_region`, unit norm in unweighted `L²`.
    pub fn normalized_indicator(region: Region) -> Result<Self> {
        let m = region.measure();
        if !(m > 0.0) {
            return Err(LabError::input("indicator region has zero measure"));
        }
        Ok(FunctionSpec::Indicator { region, scale: 1.0 / m.sqrt() })
    }

    fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::Indicator { region, scale } => {
                if !(region.measure() > 0.0) {
                    return Err(LabError::input("indicator region has zero measure"));
                }
                if !scale.is_finite() {
                    return Err(LabError::input("indicator scale must be finite"));
                }
                Ok(())
            }
            FunctionSpec::Synthesis { system, coefficients } => coefficients.check_aligned(system),
            FunctionSpec::Exponential { .. } => Ok(()),
        }
    }
}

/// `b_j = ∫_domain f(x) w(x) e(−⟨λ_j, x⟩) dx`.
pub fn moment_vector(f: &FunctionSpec, system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>) -> Result<Vec<Complex64>> {
    f.validate()?;
    domain.check(system, weight)?;
    let n = system.len();
    let neg = |j: usize| match system.get(j) {
        Frequency::Line(x) => Frequency::Line(-x),
        Frequency::Plane(p) => Frequency::Plane([-p[0], -p[1]]),
    };
    match f {
        FunctionSpec::Indicator { region, scale } => {
            let support = restricted_domain(region, domain)?;
            (0..n).into_par_iter().map(|j| Ok(support.weighted_transform(weight, neg(j))? * *scale)).collect()
        }
        FunctionSpec::Exponential { freq } => {
            (0..n).into_par_iter().map(|j| domain.weighted_transform(weight, shift(*freq, neg(j))?)).collect()
        }
        FunctionSpec::Synthesis { system: other, coefficients } => {
            (0..n)
                .into_par_iter()
                .map(|j| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, c) in coefficients.values().iter().enumerate() {
                        acc += c * domain.weighted_transform(weight, shift(other.get(k), neg(j))?)?;
                    }
                    Ok(acc)
                })
                .collect()
        }
    }
}

fn shift(a: Frequency, b: Frequency) -> Result<Frequency> {
    match (a, b) {
        (Frequency::Line(x), Frequency::Line(y)) => Ok(Frequency::Line(x + y)),
        (Frequency::Plane(p), Frequency::Plane(q)) => Ok(Frequency::Plane([p[0] + q[0], p[1] + q[1]])),
        _ => Err(LabError::input("frequency dimension does not match the system")),
    }
}

/// `region ∩ domain` as a domain; a disk region must lie inside a disk domain.
fn restricted_domain(region: &Region, domain: &Domain) -> Result<Domain> {
    match (region, domain) {
        (Region::Intervals(r), Domain::Intervals(s)) => Ok(Domain::Intervals(set_boolean(r, s, BooleanOp::Intersect))),
        (Region::Disk(r), Domain::Disk(d)) => {
            let [rx, ry] = r.center();
            let [dx, dy] = d.center();
            if (rx - dx).hypot(ry - dy) + r.radius() > d.radius() * (1.0 + 1e-12) {
                return Err(LabError::input("disk indicator must lie inside the disk domain"));
            }
            Ok(Domain::Disk(*r))
        }
        _ => Err(LabError::input("indicator region dimension does not match the domain")),
    }
}

/// `‖f‖²_{L²(domain, w)}`.
pub fn function_energy(f: &FunctionSpec, domain: &Domain, weight: Option<&WeightSpec>) -> Result<f64> {
    f.validate()?;
    match f {
        FunctionSpec::Indicator { region, scale } => Ok(scale * scale * restricted_domain(region, domain)?.weighted_measure(weight)?),
        FunctionSpec::Exponential { .. } => domain.weighted_measure(weight),
        FunctionSpec::Synthesis { system, coefficients } => energy_quadratic_form(coefficients, system, domain, weight),
    }
}

/// `‖Σ c_λ e(⟨λ, x⟩)‖²_{L²(domain, w)} = c*Gc`.
pub fn energy_quadratic_form(c: &Coefficients, system: &ExponentialSystem, domain: &Domain, weight: Option<&WeightSpec>) -> Result<f64> {
    c.check_aligned(system)?;
    Ok(gram_matrix(system, domain, weight)?.quadratic_form(c.values()))
}
