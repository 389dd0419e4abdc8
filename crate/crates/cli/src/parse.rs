//! Parsers turning configuration strings into library inputs.

use crate::config::{ConfigError, RunConfig};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use riesz_lab::experiments::ExtensionRule;
use riesz_lab::geometry::{build_paper_set, default_split_counts, normalize_intervals, Disk, Interval, IntervalSet, PaperSetStages};
use riesz_lab::harmonic::{Coefficients, Domain, ExponentialSystem, Frequency, FunctionSpec, Region, WeightSpec};

type Parsed<T> = Result<T, ConfigError>;

fn lab<T>(r: riesz_lab::Result<T>) -> Parsed<T> {
    r.map_err(|e| ConfigError(e.to_string()))
}

pub fn numbers(text: &str, what: &str) -> Parsed<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| ConfigError(format!("{what}: cannot parse '{s}'"))))
        .collect()
}

/// `lo,hi;lo,hi;...`
pub fn interval_set(text: &str) -> Parsed<IntervalSet> {
    let mut pairs = Vec::new();
    for part in text.split(';').filter(|s| !s.trim().is_empty()) {
        match numbers(part, "interval")?.as_slice() {
            [lo, hi] => pairs.push((*lo, *hi)),
            _ => return Err(ConfigError(format!("interval '{part}' must be lo,hi"))),
        }
    }
    if pairs.is_empty() {
        return Err(ConfigError("empty interval list".into()));
    }
    lab(normalize_intervals(&pairs))
}

pub fn paper_set(cfg: &RunConfig) -> Parsed<PaperSetStages> {
    let n: usize = cfg.parse_or("stages", 2)?;
    let splits = match cfg.get("splits") {
        Some(s) => numbers(s, "splits")?
            .into_iter()
            .map(|v| if v >= 0.0 && v.fract() == 0.0 { Ok(v as u64) } else { Err(ConfigError(format!("split count {v} is not a nonnegative integer"))) })
            .collect::<Parsed<Vec<u64>>>()?,
        None => default_split_counts(n),
    };
    lab(build_paper_set(n, &splits))
}

pub fn domain(cfg: &RunConfig) -> Parsed<Domain> {
    let kind = cfg.get("domain").unwrap_or("intervals");
    match kind {
        "intervals" => Ok(Domain::Intervals(interval_set(cfg.get("set").unwrap_or("0,1"))?)),
        "paper-set" => Ok(Domain::Intervals(paper_set(cfg)?.set)),
        "disk" => Ok(Domain::Disk(Disk::unit_area())),
        other => Err(ConfigError(format!("unknown domain '{other}'"))),
    }
}

pub fn weight(cfg: &RunConfig) -> Parsed<Option<WeightSpec>> {
    let Some(text) = cfg.get("weight") else { return Ok(None) };
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind.trim() {
        "none" => Ok(None),
        "power" => Ok(Some(lab(WeightSpec::power(numbers(rest, "power weight")?.first().copied().unwrap_or(f64::NAN)))?)),
        "piecewise" => {
            let mut pieces = Vec::new();
            for part in rest.split(';').filter(|s| !s.trim().is_empty()) {
                match numbers(part, "weight piece")?.as_slice() {
                    [lo, hi, v] => pieces.push((lab(Interval::new(*lo, *hi))?, *v)),
                    _ => return Err(ConfigError(format!("weight piece '{part}' must be lo,hi,value"))),
                }
            }
            Ok(Some(lab(WeightSpec::piecewise(pieces))?))
        }
        other => Err(ConfigError(format!("unknown weight family '{other}'"))),
    }
}

/// `step·ℤ ∩ [−F, F]` on the line, `step·ℤ² ∩ [−F, F]²` for the disk, or a
/// frequency file; then the optional perturbation.
pub fn system(cfg: &RunConfig, dimension: usize, rng: &mut ChaCha8Rng) -> Parsed<ExponentialSystem> {
    let base = if let Some(path) = cfg.get("freqs") {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {path}: {e}")))?;
        lab(ExponentialSystem::from_text(&text))?
    } else {
        let step: f64 = cfg.parse_or("lattice", 1.0)?;
        let bound: f64 = cfg.parse_or("trunc", if dimension == 2 { 4.0 } else { 32.0 })?;
        if dimension == 2 {
            if !(step > 0.0 && bound >= 0.0 && bound.is_finite()) {
                return Err(ConfigError(format!("lattice needs step > 0 and bound ≥ 0, got {step}, {bound}")));
            }
            let k = (bound / step * (1.0 + 1e-14)).floor() as i64;
            let mut pts = Vec::new();
            for a in -k..=k {
                for b in -k..=k {
                    pts.push([a as f64 * step, b as f64 * step]);
                }
            }
            lab(ExponentialSystem::plane(pts))?
        } else {
            lab(ExponentialSystem::symmetric_lattice(step, bound))?
        }
    };
    if base.dimension() != dimension {
        return Err(ConfigError(format!("frequency set is {}-D but the domain is {dimension}-D", base.dimension())));
    }
    let Some(spec) = cfg.get("perturb") else { return Ok(base) };
    let (kind, rest) = spec.split_once(':').ok_or_else(|| ConfigError(format!("perturbation '{spec}' must be kind:delta")))?;
    let delta: f64 = rest.trim().parse().map_err(|_| ConfigError(format!("cannot parse perturbation size '{rest}'")))?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(ConfigError(format!("perturbation size must be nonnegative, got {delta}")));
    }
    let n = base.len();
    let shifts: Vec<f64> = match kind.trim() {
        "alternating" => (0..n).map(|j| if j % 2 == 0 { delta } else { -delta }).collect(),
        "random" => (0..n).map(|_| if delta > 0.0 { rng.gen_range(-delta..=delta) } else { 0.0 }).collect(),
        other => return Err(ConfigError(format!("unknown perturbation '{other}'"))),
    };
    lab(base.perturbed(&shifts))
}

pub fn function(cfg: &RunConfig, system: &ExponentialSystem, rng: &mut ChaCha8Rng, default: &str) -> Parsed<FunctionSpec> {
    let text = cfg.get("function").unwrap_or(default);
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind.trim() {
        "indicator" => lab(FunctionSpec::normalized_indicator(Region::Intervals(interval_set(rest)?))),
        "indicator-disk" => {
            let r = numbers(rest, "disk radius")?.first().copied().unwrap_or(f64::NAN);
            lab(FunctionSpec::normalized_indicator(Region::Disk(lab(Disk::new(r, [0.0, 0.0]))?)))
        }
        "exp" => match numbers(rest, "frequency")?.as_slice() {
            [x] => Ok(FunctionSpec::Exponential { freq: Frequency::Line(*x) }),
            [x, y] => Ok(FunctionSpec::Exponential { freq: Frequency::Plane([*x, *y]) }),
            _ => Err(ConfigError(format!("frequency '{rest}' must have one or two components"))),
        },
        "synthesis" => {
            let c = (0..system.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            Ok(FunctionSpec::Synthesis { system: system.clone(), coefficients: Coefficients::new(c) })
        }
        other => Err(ConfigError(format!("unknown function '{other}'"))),
    }
}

/// `;`-separated shifts with `,`-separated components.
pub fn shifts(cfg: &RunConfig, dimension: usize) -> Parsed<Vec<Vec<f64>>> {
    let text = cfg.get("shift").unwrap_or(if dimension == 2 { "0.25,0" } else { "0.25" });
    let out: Vec<Vec<f64>> = text.split(';').filter(|s| !s.trim().is_empty()).map(|s| numbers(s, "shift")).collect::<Parsed<_>>()?;
    if out.is_empty() {
        return Err(ConfigError("no shifts given".into()));
    }
    Ok(out)
}

pub fn rule(cfg: &RunConfig) -> Parsed<ExtensionRule> {
    let text = cfg.get("rule").unwrap_or("canonical");
    match text.split_once(':') {
        None if text.trim() == "canonical" => Ok(ExtensionRule::CanonicalDual),
        Some(("ridge", v)) => Ok(ExtensionRule::RidgeLeastSquares { ridge: v.trim().parse().map_err(|_| ConfigError(format!("cannot parse ridge '{v}'")))? }),
        _ => Err(ConfigError(format!("unknown extension rule '{text}'"))),
    }
}
