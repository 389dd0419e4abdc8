//! The localization pipeline on the iterated interval family: expand the
//! normalized indicators of the usable intervals, mollify, pick a function
//! that is small on the left edges, and compare its translated energies with
//! its period energy.

use super::pigeonhole::{sector_pigeonhole_select, PigeonholeResult, SampledFamily};
use crate::geometry::{build_paper_set, default_split_counts, left_edge_region, normalize_intervals, Interval, IntervalSet, PaperSetStages};
use crate::harmonic::{gram_matrix, mollifier_ft, moment_vector, Domain, ExponentialSystem, FunctionSpec, GramMatrix, Region};
use crate::num::{e, gauss_legendre_on};
use crate::riesz::{expansion_from_parts, riesz_bounds_from_gram, Fingerprints};
use crate::{Complex64, LabError, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const PLATEAU_POINTS: usize = 512;
const PLATEAU_TOLERANCE: f64 = 0.05;

/// Label attached to `k_hat` in every report.
pub const K_HAT_LABEL: &str = "finite-section Riesz constant max(λ_max, 1/λ_min) of the truncated system, standing in for the constant of a hypothetical Riesz basis";

/// Label attached to every report about the split counts used.
pub const SCALE_NOTE: &str = "split counts are desk-scale stand-ins; the doubly-exponential counts 4^(4^k) needed for the asymptotic contradiction are out of desk scale, so finite runs only exhibit the mechanics of the chain";

/// How coefficients of each `f_i` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ExtensionRule {
    /// `c = b/ℓ`: the Fourier series on `[0, ℓ]` of the zero extension.
    CanonicalDual,
    /// Ridge-regularized least squares on `S`.
    RidgeLeastSquares { ridge: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Params {
    pub n: usize,
    /// `N_2, …, N_n`.
    pub split_counts: Vec<u64>,
    pub ell: u32,
    /// `Λ = (1/ℓ)ℤ ∩ [−F, F]`.
    pub truncation: f64,
    pub rule: ExtensionRule,
    /// Gauss–Legendre nodes per interval of the edge region.
    pub grid_per_interval: usize,
    /// Largest acceptable expansion residual `‖f_i − Σ c e‖²`.
    pub residual_limit: f64,
}

impl Theorem2Params {
    /// `N_k = 3^k`, `ℓ = 4`, `F = 256`.
    pub fn desk(n: usize) -> Self {
        Theorem2Params {
            n,
            split_counts: default_split_counts(n),
            ell: 4,
            truncation: 256.0,
            rule: ExtensionRule::CanonicalDual,
            grid_per_interval: 64,
            residual_limit: 0.1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.ell < 4 {
            return Err(LabError::input(format!("ℓ must be an integer ≥ 4, got {}", self.ell)));
        }
        if !(self.truncation > 0.0 && self.truncation.is_finite()) {
            return Err(LabError::input(format!("truncation F must be positive and finite, got {}", self.truncation)));
        }
        if self.grid_per_interval < 2 {
            return Err(LabError::input("need at least 2 grid nodes per interval"));
        }
        if !(self.residual_limit > 0.0) {
            return Err(LabError::input("residual limit must be positive"));
        }
        if let ExtensionRule::RidgeLeastSquares { ridge } = self.rule {
            if !(ridge >= 0.0 && ridge.is_finite()) {
                return Err(LabError::input(format!("ridge must be nonnegative and finite, got {ridge}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem2Outcome {
    Complete,
    /// Some expansion residual exceeds the limit; values are still reported.
    TruncationInsufficient,
    /// `n = 1`: there are no usable intervals and no translations.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MSource {
    /// `M = 2K̂/√ε`.
    RieszConstant,
    /// `M = max_x ‖g(x)‖₂` on the grid, used when `K̂` is infinite.
    CauchySchwarz,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalExpansion {
    pub index: usize,
    pub interval: Interval,
    /// `Σ|c_λ|²`.
    pub coeff_energy: f64,
    /// `‖f_i − Σ c_λ e(λ·)‖²_{L²(S)}`.
    pub residual_energy: f64,
    /// `Σ|c_λ ĥ(λ)|²`.
    pub hat_energy: f64,
    /// `∫_A |g_i|²` from the exact quadratic form.
    pub edge_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationRow {
    pub k: usize,
    /// `Σ|d_λ|²` of the translated coefficients.
    pub coeff_energy: f64,
    /// `∫_S |G_k|²`.
    pub s_energy: f64,
    /// `∫_I |G_k|²` over the intervals of length at most `ε`.
    pub short_energy: f64,
    /// `∫_{S∖I} |G_k|²`.
    pub long_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub i0: usize,
    pub m: f64,
    pub m_source: MSource,
    pub pigeonhole: PigeonholeResult,
    /// `Σ|c_λ|²` of `f_{i0}`.
    pub coeff_energy: f64,
    /// `Σ|c_λ ĥ(λ)|²`.
    pub hat_energy: f64,
    /// `∫_S |g_{i0}|²`.
    pub s_energy: f64,
    /// `1/(2K̂)` when `K̂` is finite.
    pub hat_lower_bound: Option<f64>,
    /// `ℓ Σ|c_λ ĥ(λ)|² = ∫_0^ℓ |g_{i0}|²`.
    pub period_energy: f64,
    /// `K̂²` when finite.
    pub period_bound: Option<f64>,
    pub translations: Vec<TranslationRow>,
    /// `∫_A |g_{i0}|²` from the exact quadratic form.
    pub leakage: f64,
    pub edge_measure: f64,
    /// `((n−1)(1/(2K̂²) − leakage), K̂²)` when `K̂` is finite.
    pub comparison: Option<(f64, f64)>,
    /// `(Σ_k ∫_I |G_k|², ℓ Σ|c ĥ|²)`: the measured left and right sides.
    pub measured_comparison: (f64, f64),
    /// Length of `{x ∈ I_{i0} : |g_{i0}(x) − ε^{−1/2}| ≤ 5% ε^{−1/2}}`.
    pub plateau_width: f64,
    /// `max(q, 1/q)` over the Rayleigh quotients `q` of the coefficient
    /// vectors of `f_{i0}` and `g_{i0}`; a lower bound on `K̂`.
    pub measured_k_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub holds: bool,
    pub value: f64,
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub params: Theorem2Params,
    pub stage: usize,
    pub eps: Option<f64>,
    pub ell: u32,
    pub truncation: f64,
    pub dimension: usize,
    pub set_measure: f64,
    pub interval_count: usize,
    pub k_hat: Option<f64>,
    pub k_hat_label: String,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub scale_note: String,
    pub outcome: Theorem2Outcome,
    pub max_residual: f64,
    pub expansions: Vec<IntervalExpansion>,
    pub chain: Option<Chain>,
    pub invariants: Vec<InvariantCheck>,
    pub fingerprints: Fingerprints,
}

impl Theorem2Report {
    pub fn invariants_hold(&self) -> bool {
        self.invariants.iter().all(|c| c.holds)
    }
}

fn check(name: &str, value: f64, limit: f64) -> InvariantCheck {
    InvariantCheck { name: name.to_string(), holds: value <= limit, value, limit }
}

fn intervals_domain(pairs: Vec<(f64, f64)>) -> Result<Domain> {
    Ok(Domain::Intervals(normalize_intervals(&pairs)?))
}

/// `Σ_λ v_λ e(λx)` at every point, sharing the exponentials across vectors.
fn synthesize_many(freqs: &[f64], vectors: &[Vec<Complex64>], points: &[f64]) -> Vec<Vec<Complex64>> {
    let by_point: Vec<Vec<Complex64>> = points
        .par_iter()
        .map(|&x| {
            let phases: Vec<Complex64> = freqs.iter().map(|&l| e(l * x)).collect();
            vectors.iter().map(|v| v.iter().zip(&phases).map(|(c, p)| c * p).sum()).collect()
        })
        .collect();
    (0..vectors.len()).map(|i| by_point.iter().map(|row| row[i]).collect()).collect()
}

fn rayleigh(g: &GramMatrix, v: &[Complex64]) -> f64 {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    g.quadratic_form(v) / norm
}

pub fn theorem2_run(params: &Theorem2Params) -> Result<Theorem2Report> {
    params.validate()?;
    let stages = build_paper_set(params.n, &params.split_counts)?;
    let ell = params.ell as f64;
    if stages.set.hull().map_or(false, |h| h.hi() > ell) {
        return Err(LabError::input("the set must fit inside one period [0, ℓ]"));
    }
    let system = ExponentialSystem::symmetric_lattice(1.0 / ell, params.truncation)?;
    let freqs = system.line_freqs().expect("1-D system").to_vec();
    let domain = Domain::Intervals(stages.set.clone());
    let g_s = gram_matrix(&system, &domain, None)?;
    let bounds = riesz_bounds_from_gram(&g_s, &system, &domain, None)?;
    let fingerprints = Fingerprints::of(&system, &domain, None);

    let mut report = Theorem2Report {
        params: params.clone(),
        stage: params.n,
        eps: stages.eps(),
        ell: params.ell,
        truncation: params.truncation,
        dimension: system.len(),
        set_measure: stages.measure,
        interval_count: stages.set.len(),
        k_hat: bounds.constant,
        k_hat_label: K_HAT_LABEL.to_string(),
        lambda_min: bounds.lower,
        lambda_max: bounds.upper,
        scale_note: SCALE_NOTE.to_string(),
        outcome: Theorem2Outcome::Degenerate,
        max_residual: 0.0,
        expansions: Vec::new(),
        chain: None,
        invariants: Vec::new(),
        fingerprints,
    };
    let Some(eps) = stages.eps() else {
        return Ok(report);
    };
    run_chain(params, &stages, eps, &system, &freqs, &domain, &g_s, &mut report)?;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_chain(
    params: &Theorem2Params,
    stages: &PaperSetStages,
    eps: f64,
    system: &ExponentialSystem,
    freqs: &[f64],
    domain: &Domain,
    g_s: &GramMatrix,
    report: &mut Theorem2Report,
) -> Result<()> {
    let n = params.n;
    let ell = params.ell as f64;
    let usable = stages.usable_intervals();
    let hat: Vec<f64> = freqs.iter().map(|&l| mollifier_ft(eps, l)).collect();

    let coefficients: Vec<(Vec<Complex64>, f64)> = usable
        .par_iter()
        .map(|iv| -> Result<(Vec<Complex64>, f64)> {
            let f = FunctionSpec::normalized_indicator(Region::Intervals(IntervalSet::single(iv.lo(), iv.hi())?))?;
            let b = moment_vector(&f, system, domain, None)?;
            match params.rule {
                ExtensionRule::CanonicalDual => {
                    let c: Vec<Complex64> = b.iter().map(|z| z / ell).collect();
                    let bc: Complex64 = b.iter().zip(&c).map(|(x, y)| x.conj() * y).sum();
                    let residual = (1.0 - 2.0 * bc.re + g_s.quadratic_form(&c)).max(0.0);
                    Ok((c, residual))
                }
                ExtensionRule::RidgeLeastSquares { ridge } => {
                    let r = expansion_from_parts(g_s, &b, 1.0, ridge, report.fingerprints.clone(), false)?;
                    Ok((r.coefficients.0, r.residual_energy))
                }
            }
        })
        .collect::<Result<_>>()?;
    let mollified: Vec<Vec<Complex64>> = coefficients.iter().map(|(c, _)| c.iter().zip(&hat).map(|(z, h)| z * h).collect()).collect();

    let edge = left_edge_region(stages, n, eps)?;
    let edge_domain = Domain::Intervals(edge.region.clone());
    let g_a = gram_matrix(system, &edge_domain, None)?;
    let threshold = eps * (1.0 + 1e-9);
    let short_domain = intervals_domain(stages.set.intervals().iter().filter(|iv| iv.len() <= threshold).map(|iv| (iv.lo(), iv.hi())).collect())?;
    let g_i = gram_matrix(system, &short_domain, None)?;

    report.expansions = usable
        .iter()
        .enumerate()
        .map(|(i, iv)| IntervalExpansion {
            index: i,
            interval: *iv,
            coeff_energy: coefficients[i].0.iter().map(|z| z.norm_sqr()).sum(),
            residual_energy: coefficients[i].1,
            hat_energy: mollified[i].iter().map(|z| z.norm_sqr()).sum(),
            edge_energy: g_a.quadratic_form(&mollified[i]),
        })
        .collect();
    report.max_residual = report.expansions.iter().map(|x| x.residual_energy).fold(0.0, f64::max);
    report.outcome = if report.max_residual > params.residual_limit { Theorem2Outcome::TruncationInsufficient } else { Theorem2Outcome::Complete };

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for iv in edge.region.intervals() {
        for (x, w) in gauss_legendre_on(iv.lo(), iv.hi(), params.grid_per_interval) {
            points.push(x);
            weights.push(w);
        }
    }
    let values = synthesize_many(freqs, &mollified, &points);
    let family = SampledFamily { points, weights, values };
    let (m, m_source) = match report.k_hat {
        Some(k) => (2.0 * k / eps.sqrt(), MSource::RieszConstant),
        None => (family.cauchy_schwarz_bound().max(f64::MIN_POSITIVE), MSource::CauchySchwarz),
    };
    let pigeonhole = sector_pigeonhole_select(&family, edge.region.measure(), m)?;
    let i0 = pigeonhole.index;
    let c = &coefficients[i0].0;
    let ch = &mollified[i0];
    let coeff_energy = report.expansions[i0].coeff_energy;
    let hat_energy = report.expansions[i0].hat_energy;
    let period_energy = ell * hat_energy;
    let s_energy = g_s.quadratic_form(ch);
    let leakage = report.expansions[i0].edge_energy;

    let translations: Vec<TranslationRow> = (1..n)
        .map(|k| {
            let d: Vec<Complex64> = ch.iter().zip(freqs).map(|(z, &l)| z * e(-l * k as f64 * eps)).collect();
            let s = g_s.quadratic_form(&d);
            let short = g_i.quadratic_form(&d);
            TranslationRow { k, coeff_energy: d.iter().map(|z| z.norm_sqr()).sum(), s_energy: s, short_energy: short, long_energy: (s - short).max(0.0) }
        })
        .collect();

    let target = eps.powf(-0.5);
    let i0_interval = usable[i0];
    let h = i0_interval.len() / PLATEAU_POINTS as f64;
    let plateau_points: Vec<f64> = (0..PLATEAU_POINTS).map(|p| i0_interval.lo() + (p as f64 + 0.5) * h).collect();
    let g_plateau = synthesize_many(freqs, std::slice::from_ref(ch), &plateau_points);
    let plateau_width = g_plateau[0].iter().filter(|z| (*z - target).norm() <= PLATEAU_TOLERANCE * target).count() as f64 * h;

    let q = [rayleigh(g_s, c), rayleigh(g_s, ch)];
    let measured_k_lower = q.iter().map(|&v| v.max(1.0 / v)).fold(1.0, f64::max);

    let short_total: f64 = translations.iter().map(|t| t.short_energy).sum();
    let comparison = report.k_hat.map(|k| ((n as f64 - 1.0) * (1.0 / (2.0 * k * k) - leakage), k * k));

    let slack = 1e-9 * period_energy.max(1.0);
    let mut checks = Vec::new();
    let min_energy = report
        .expansions
        .iter()
        .flat_map(|x| [x.coeff_energy, x.residual_energy, x.hat_energy, x.edge_energy])
        .chain(translations.iter().flat_map(|t| [t.s_energy, t.short_energy, t.long_energy]))
        .chain([s_energy, period_energy, leakage])
        .fold(f64::INFINITY, f64::min);
    checks.push(check("energies are nonnegative", -min_energy, 0.0));
    let norm_drift = translations.iter().map(|t| (t.coeff_energy - hat_energy).abs()).fold(0.0, f64::max);
    checks.push(check("translation preserves the coefficient norm", norm_drift, 1e-12 * hat_energy.max(1e-300)));
    let hat_excess = report.expansions.iter().map(|x| x.hat_energy - x.coeff_energy).fold(f64::NEG_INFINITY, f64::max);
    checks.push(check("mollified coefficients have smaller norm", hat_excess, 1e-15));
    let s_max = translations.iter().map(|t| t.s_energy).fold(s_energy, f64::max);
    checks.push(check("energies on S stay below the period energy", s_max, period_energy + slack));
    checks.push(check("translated short-interval energies fit in one period", short_total, period_energy + slack));
    if pigeonhole.sector_hypothesis_holds {
        checks.push(check("pigeonhole energy within 6M²|A|/√N", pigeonhole.energy, pigeonhole.bound));
    }
    report.invariants = checks;

    report.chain = Some(Chain {
        i0,
        m,
        m_source,
        coeff_energy,
        hat_energy,
        s_energy,
        hat_lower_bound: report.k_hat.map(|k| 1.0 / (2.0 * k)),
        period_energy,
        period_bound: report.k_hat.map(|k| k * k),
        translations,
        leakage,
        edge_measure: edge.region.measure(),
        comparison,
        measured_comparison: (short_total, period_energy),
        plateau_width,
        measured_k_lower,
        pigeonhole,
    });
    Ok(())
}

/// Runs the pipeline for stages `1..=n_max` with the desk defaults and the
/// given truncation.
pub fn theorem2_trend(n_max: usize, ell: u32, truncation: f64) -> Result<Vec<Theorem2Report>> {
    (1..=n_max).map(|n| theorem2_run(&Theorem2Params { ell, truncation, ..Theorem2Params::desk(n) })).collect()
}

/// Finite-section constants are nondecreasing along the stages, with a
/// singular section counting as `+∞`.
pub fn k_hat_nondecreasing(reports: &[Theorem2Report]) -> bool {
    let key = |r: &Theorem2Report| r.k_hat.unwrap_or(f64::INFINITY);
    reports.windows(2).all(|w| key(&w[1]) >= key(&w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::Coefficients;

    #[test]
    fn stage_one_is_degenerate() {
        let r = theorem2_run(&Theorem2Params::desk(1)).unwrap();
        assert_eq!(r.outcome, Theorem2Outcome::Degenerate);
        assert!(r.chain.is_none());
        assert!(r.lambda_min >= -1e-9 && r.lambda_max > 0.0);
        assert_eq!(r.dimension, 2049);
    }

    #[test]
    fn invalid_params() {
        let mut p = Theorem2Params::desk(2);
        p.ell = 3;
        assert!(theorem2_run(&p).is_err());
        let mut p = Theorem2Params::desk(2);
        p.truncation = f64::NAN;
        assert!(theorem2_run(&p).is_err());
        let mut p = Theorem2Params::desk(2);
        p.split_counts = vec![];
        assert!(theorem2_run(&p).is_err());
    }

    #[test]
    fn stage_two_small_split() {
        let p = Theorem2Params { split_counts: vec![3], ..Theorem2Params::desk(2) };
        let r = theorem2_run(&p).unwrap();
        assert_eq!(r.outcome, Theorem2Outcome::Complete, "{}", r.max_residual);
        assert!(r.invariants_hold(), "{:?}", r.invariants);
        let chain = r.chain.as_ref().unwrap();
        assert_eq!(chain.translations.len(), 1);
        assert!(chain.plateau_width > 0.0);
        assert!(chain.hat_energy <= chain.coeff_energy);

        // energy of G_1 on S against Gauss–Legendre quadrature of the synthesized function
        let eps = r.eps.unwrap();
        let stages = build_paper_set(2, &[3]).unwrap();
        let system = ExponentialSystem::symmetric_lattice(0.25, 256.0).unwrap();
        let freqs = system.line_freqs().unwrap();
        let iv = stages.usable_intervals()[chain.i0];
        let f = FunctionSpec::normalized_indicator(Region::Intervals(IntervalSet::single(iv.lo(), iv.hi()).unwrap())).unwrap();
        let b = moment_vector(&f, &system, &Domain::Intervals(stages.set.clone()), None).unwrap();
        let d: Vec<Complex64> = b.iter().zip(freqs).map(|(z, &l)| z / 4.0 * mollifier_ft(eps, l) * e(-l * eps)).collect();
        let coeffs = Coefficients::new(d);
        let g = |x: f64| {
            let v = coeffs.synthesize(&system, [x, 0.0]);
            Complex64::new(v.norm_sqr(), 0.0)
        };
        let mut total = 0.0;
        for piece in stages.set.intervals() {
            let sub = 64;
            let h = piece.len() / sub as f64;
            for s in 0..sub {
                let a = piece.lo() + s as f64 * h;
                total += gauss_legendre_on(a, a + h, 24).iter().map(|(x, w)| w * g(*x).re).sum::<f64>();
            }
        }
        let s_energy = chain.translations[0].s_energy;
        assert!((total - s_energy).abs() <= 1e-6 * s_energy, "{total} vs {s_energy}");
    }
}
