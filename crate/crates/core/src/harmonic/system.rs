//! Frequency sets `Λ` and coefficient vectors indexed by them.

use crate::num::e;
use crate::{Complex64, LabError, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance for recognising equally spaced frequencies.
const PROGRESSION_TOL: f64 = 1e-12;

/// A single frequency in cycles per unit length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Frequency {
    Line(f64),
    Plane([f64; 2]),
}

/// The ordered frequency list of a system, in one or two dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frequencies {
    Line(Vec<f64>),
    Plane(Vec<[f64; 2]>),
}

/// Recognised arrangement of a frequency list.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// `start + k·step` for `k = 0..len`, in this order.
    Progression { start: f64, step: f64 },
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialSystem {
    freqs: Frequencies,
    separation: f64,
    structure: Structure,
}

impl ExponentialSystem {
    pub fn line(freqs: Vec<f64>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(LabError::input("frequency list is empty"));
        }
        if let Some(bad) = freqs.iter().find(|x| !x.is_finite()) {
            return Err(LabError::input(format!("non-finite frequency {bad}")));
        }
        let mut sorted = freqs.clone();
        sorted.sort_by(f64::total_cmp);
        let separation = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if separation == 0.0 {
            return Err(LabError::input("duplicate frequencies make the Gram matrix singular"));
        }
        let structure = detect_progression(&freqs);
        Ok(ExponentialSystem { freqs: Frequencies::Line(freqs), separation, structure })
    }

    pub fn plane(freqs: Vec<[f64; 2]>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(LabError::input("frequency list is empty"));
        }
        if let Some(bad) = freqs.iter().find(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(LabError::input(format!("non-finite frequency {bad:?}")));
        }
        let mut separation = f64::INFINITY;
        for (j, a) in freqs.iter().enumerate() {
            for b in &freqs[j + 1..] {
                separation = separation.min((a[0] - b[0]).hypot(a[1] - b[1]));
            }
        }
        if separation == 0.0 {
            return Err(LabError::input("duplicate frequencies make the Gram matrix singular"));
        }
        Ok(ExponentialSystem { freqs: Frequencies::Plane(freqs), separation, structure: Structure::General })
    }

    /// `start + k·step` for `k = 0..count`.
    pub fn progression(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || count == 0 {
            return Err(LabError::input(format!("progression needs step > 0 and count ≥ 1, got step = {step}, count = {count}")));
        }
        Self::line((0..count).map(|k| start + k as f64 * step).collect())
    }

    /// The integers `lo..=hi`.
    pub fn integer_range(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(LabError::input(format!("empty integer range {lo}..={hi}")));
        }
        Self::line((lo..=hi).map(|k| k as f64).collect())
    }

    /// `step·ℤ ∩ [−bound, bound]`, in increasing order.
    pub fn symmetric_lattice(step: f64, bound: f64) -> Result<Self> {
        if !(step > 0.0) || !(bound >= 0.0) || !bound.is_finite() {
            return Err(LabError::input(format!("lattice needs step > 0 and bound ≥ 0, got {step}, {bound}")));
        }
        let kmax = (bound / step * (1.0 + 1e-14)).floor() as i64;
        Self::line((-kmax..=kmax).map(|k| k as f64 * step).collect())
    }

    /// `ℤ² ∩ [−n, n]²`, row by row.
    pub fn square_lattice(n: i64) -> Result<Self> {
        if n < 0 {
            return Err(LabError::input("square lattice half-width must be nonnegative"));
        }
        let mut pts = Vec::with_capacity(((2 * n + 1) * (2 * n + 1)) as usize);
        for a in -n..=n {
            for b in -n..=n {
                pts.push([a as f64, b as f64]);
            }
        }
        Self::plane(pts)
    }

    /// Parses one frequency per line; a line holds one number (1-D) or two
    /// separated by a comma or whitespace (2-D). Blank lines and `#` comments
    /// are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut line_freqs = Vec::new();
        let mut plane_freqs = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|_| LabError::input(format!("line {}: cannot parse {s:?}", no + 1))))
                .collect::<Result<_>>()?;
            match fields.as_slice() {
                [x] => line_freqs.push(*x),
                [x, y] => plane_freqs.push([*x, *y]),
                _ => return Err(LabError::input(format!("line {}: expected 1 or 2 numbers", no + 1))),
            }
        }
        match (line_freqs.is_empty(), plane_freqs.is_empty()) {
            (false, true) => Self::line(line_freqs),
            (true, false) => Self::plane(plane_freqs),
            (true, true) => Err(LabError::input("no frequencies found")),
            (false, false) => Err(LabError::input("mixed 1-D and 2-D frequencies")),
        }
    }

    /// Parses a JSON array of numbers or of `[x, y]` pairs.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Line(Vec<f64>),
            Plane(Vec<[f64; 2]>),
        }
        match serde_json::from_str::<Raw>(text)? {
            Raw::Line(v) => Self::line(v),
            Raw::Plane(v) => Self::plane(v),
        }
    }

    pub fn len(&self) -> usize {
        match &self.freqs {
            Frequencies::Line(v) => v.len(),
            Frequencies::Plane(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        match self.freqs {
            Frequencies::Line(_) => 1,
            Frequencies::Plane(_) => 2,
        }
    }

    pub fn frequencies(&self) -> &Frequencies {
        &self.freqs
    }

    pub fn line_freqs(&self) -> Option<&[f64]> {
        match &self.freqs {
            Frequencies::Line(v) => Some(v),
            Frequencies::Plane(_) => None,
        }
    }

    pub fn plane_freqs(&self) -> Option<&[[f64; 2]]> {
        match &self.freqs {
            Frequencies::Plane(v) => Some(v),
            Frequencies::Line(_) => None,
        }
    }

    pub fn get(&self, j: usize) -> Frequency {
        match &self.freqs {
            Frequencies::Line(v) => Frequency::Line(v[j]),
            Frequencies::Plane(v) => Frequency::Plane(v[j]),
        }
    }

    /// Minimal pairwise distance (`∞` for a single frequency).
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// Frequencies shifted by `delta[j]` each (1-D only).
    pub fn perturbed(&self, delta: &[f64]) -> Result<Self> {
        let freqs = self.line_freqs().ok_or_else(|| LabError::input("perturbation needs a 1-D system"))?;
        if delta.len() != freqs.len() {
            return Err(LabError::input(format!("{} perturbations for {} frequencies", delta.len(), freqs.len())));
        }
        Self::line(freqs.iter().zip(delta).map(|(f, d)| f + d).collect())
    }

    /// Phase `e(⟨λ_j, t⟩)`; `t` is read as a scalar for 1-D systems.
    pub(crate) fn phase(&self, j: usize, t: [f64; 2]) -> Complex64 {
        match &self.freqs {
            Frequencies::Line(v) => e(v[j] * t[0]),
            Frequencies::Plane(v) => e(v[j][0] * t[0] + v[j][1] * t[1]),
        }
    }
}

fn detect_progression(freqs: &[f64]) -> Structure {
    if freqs.len() < 2 {
        return Structure::General;
    }
    let start = freqs[0];
    let step = (freqs[freqs.len() - 1] - start) / (freqs.len() - 1) as f64;
    if !(step > 0.0) {
        return Structure::General;
    }
    let scale = start.abs().max(freqs[freqs.len() - 1].abs()).max(step);
    let regular = freqs.iter().enumerate().all(|(k, &f)| (f - (start + k as f64 * step)).abs() <= PROGRESSION_TOL * scale);
    if regular {
        Structure::Progression { start, step }
    } else {
        Structure::General
    }
}

/// Complex coefficients aligned with an [`ExponentialSystem`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficients(pub Vec<Complex64>);

impl Coefficients {
    pub fn new(values: Vec<Complex64>) -> Self {
        Coefficients(values)
    }

    pub fn zeros(n: usize) -> Self {
        Coefficients(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ|c_λ|²`.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub(crate) fn check_aligned(&self, system: &ExponentialSystem) -> Result<()> {
        if self.len() != system.len() {
            return Err(LabError::input(format!("{} coefficients for {} frequencies", self.len(), system.len())));
        }
        Ok(())
    }

    /// Evaluates `Σ c_λ e(⟨λ, x⟩)` at a point (`x[1]` ignored for 1-D systems).
    pub fn synthesize(&self, system: &ExponentialSystem, x: [f64; 2]) -> Complex64 {
        self.0.iter().enumerate().map(|(j, c)| c * system.phase(j, x)).sum()
    }
}

impl From<Vec<Complex64>> for Coefficients {
    fn from(v: Vec<Complex64>) -> Self {
        Coefficients(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_and_duplicates() {
        let s = ExponentialSystem::line(vec![0.0, 2.0, 0.5, 1.0]).unwrap();
        assert_eq!(s.separation(), 0.5);
        assert_eq!(s.structure(), Structure::General);
        assert!(ExponentialSystem::line(vec![1.0, 2.0, 1.0]).is_err());
        assert!(ExponentialSystem::line(vec![]).is_err());
        assert!(ExponentialSystem::line(vec![f64::NAN]).is_err());
        assert!(ExponentialSystem::plane(vec![[0.0, 0.0], [0.0, 0.0]]).is_err());
    }

    #[test]
    fn lattices() {
        let s = ExponentialSystem::symmetric_lattice(0.25, 256.0).unwrap();
        assert_eq!(s.len(), 2049);
        assert!(matches!(s.structure(), Structure::Progression { step, .. } if (step - 0.25).abs() < 1e-15));
        let z = ExponentialSystem::integer_range(0, 63).unwrap();
        assert_eq!(z.len(), 64);
        assert_eq!(z.separation(), 1.0);
        let sq = ExponentialSystem::square_lattice(2).unwrap();
        assert_eq!(sq.len(), 25);
        assert_eq!(sq.separation(), 1.0);
        assert_eq!(sq.dimension(), 2);
    }

    #[test]
    fn perturbation_breaks_progression() {
        let z = ExponentialSystem::integer_range(-3, 3).unwrap();
        let d: Vec<f64> = (0..7).map(|k| if k % 2 == 0 { 0.1 } else { -0.1 }).collect();
        let p = z.perturbed(&d).unwrap();
        assert_eq!(p.structure(), Structure::General);
        assert!((p.separation() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn parsing() {
        let s = ExponentialSystem::from_text("0\n0.5 # half\n\n1.5\n").unwrap();
        assert_eq!(s.line_freqs().unwrap(), &[0.0, 0.5, 1.5]);
        let p = ExponentialSystem::from_text("0,0\n1 2\n").unwrap();
        assert_eq!(p.plane_freqs().unwrap(), &[[0.0, 0.0], [1.0, 2.0]]);
        assert!(ExponentialSystem::from_text("0\n1,2\n").is_err());
        let j = ExponentialSystem::from_json("[0, 0.25, 1]").unwrap();
        assert_eq!(j.len(), 3);
        let j2 = ExponentialSystem::from_json("[[0, 1], [1, 0]]").unwrap();
        assert_eq!(j2.dimension(), 2);
    }

    #[test]
    fn synthesis_of_unit_vector() {
        let s = ExponentialSystem::integer_range(0, 3).unwrap();
        let mut c = Coefficients::zeros(4);
        c.0[2] = Complex64::new(1.0, 0.0);
        let v = c.synthesize(&s, [0.125, 0.0]);
        assert!((v - e(0.25)).norm() < 1e-15);
    }
}
