//! One adapter per subcommand: parse the configuration, call the library,
//! and package the result.

use crate::config::{ConfigError, RunConfig};
use crate::parse;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_lab::experiments::{
    default_theta_count, disk_run_with, golden_threshold, sector_pigeonhole_select, theorem2_run, translation_diagnostic, weighted_scan, DiskParams,
    SampledFamily, Theorem2Outcome, Theorem2Params, TruncationRule,
};
use riesz_lab::harmonic::{gram_matrix, ExponentialSystem, GramStorage};
use riesz_lab::num::gauss_legendre_on;
use riesz_lab::report::{format_f64, CsvTable};
use riesz_lab::riesz::{expand_function, kadec_experiment, kadec_lower_bound, riesz_bounds, Fingerprints};
use riesz_lab::{Complex64, LabError};
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::TAU;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or input; exit code 2.
    Input(String),
    /// The computation hit a numerical obstruction; exit code 3.
    Numerical(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.0)
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::NotHermitian { .. } | LabError::SingularGram { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Result of a subcommand before it is written out.
pub struct Output {
    pub payload: Value,
    pub fingerprints: Value,
    pub csv: String,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    /// Set when the run finished but raised a numerical-outcome flag.
    pub flag: Option<String>,
}

type Run = Result<Output, CliError>;

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn f(x: f64) -> String {
    format_f64(x)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "inf".to_string(), f)
}

fn single_row(header: &[&str], row: Vec<String>) -> CsvTable {
    let mut t = CsvTable::new(header);
    t.push_row(row);
    t
}

pub fn run(cfg: &RunConfig) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.command.as_str() {
        "construct-set" => construct_set(cfg),
        "gram" => gram(cfg, &mut rng),
        "bounds" => bounds(cfg, &mut rng),
        "expand" => expand(cfg, &mut rng),
        "translate-test" => translate_test(cfg, &mut rng),
        "weighted-scan" => scan(cfg),
        "pigeonhole" => pigeonhole(cfg, &mut rng),
        "theorem2" => theorem2(cfg),
        "disk" => disk(cfg, &mut rng),
        "kadec" => kadec(cfg),
        "threshold" => Ok(threshold()),
        other => Err(CliError::Input(format!("unknown command '{other}'"))),
    }
}

fn system_for(cfg: &RunConfig, domain: &riesz_lab::harmonic::Domain, rng: &mut ChaCha8Rng) -> Result<ExponentialSystem, CliError> {
    Ok(parse::system(cfg, domain.dimension(), rng)?)
}

fn construct_set(cfg: &RunConfig) -> Run {
    let stages = parse::paper_set(cfg)?;
    let mut csv = CsvTable::new(&["lo", "hi", "length"]);
    for iv in stages.set.intervals() {
        csv.push_row(vec![f(iv.lo()), f(iv.hi()), f(iv.len())]);
    }
    Ok(Output {
        summary: vec![format!("stages {}: {} intervals, measure {}", stages.stages, stages.set.len(), stages.measure)],
        fingerprints: json!({ "set": riesz_lab::report::fingerprint(&stages.set) }),
        payload: value(&stages),
        csv: csv.render(),
        flag: None,
    })
}

fn gram(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Run {
    let domain = parse::domain(cfg)?;
    let weight = parse::weight(cfg)?;
    let system = system_for(cfg, &domain, rng)?;
    let g = gram_matrix(&system, &domain, weight.as_ref())?;
    let storage = match g.storage() {
        GramStorage::Dense(_) => "dense",
        GramStorage::Toeplitz(_) => "toeplitz",
    };
    let fp = Fingerprints::of(&system, &domain, weight.as_ref());
    let payload = json!({
        "dimension": g.dim(),
        "storage": storage,
        "trace": g.trace(),
        "max_asymmetry": g.max_asymmetry(),
        "matrix": g.to_json_value(),
    });
    let csv = g.to_csv();
    Ok(Output {
        summary: vec![format!("{} × {} Gram matrix ({storage}), trace {}", g.dim(), g.dim(), g.trace())],
        fingerprints: value(&fp),
        payload,
        csv,
        flag: None,
    })
}

fn bounds(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Run {
    let domain = parse::domain(cfg)?;
    let weight = parse::weight(cfg)?;
    let system = system_for(cfg, &domain, rng)?;
    let b = riesz_bounds(&system, &domain, weight.as_ref())?;
    let csv = single_row(&["lower", "upper", "constant", "dimension", "measure"], vec![f(b.lower), f(b.upper), opt(b.constant), b.dimension.to_string(), f(b.measure)]);
    Ok(Output {
        summary: vec![format!("lower {} upper {} K = {}", b.lower, b.upper, b.constant.map_or("inf (numerically singular)".to_string(), |k| k.to_string()))],
        flag: b.is_singular().then(|| "finite section is numerically singular".to_string()),
        fingerprints: value(&b.fingerprints),
        payload: value(&b),
        csv: csv.render(),
    })
}

fn expand(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Run {
    let domain = parse::domain(cfg)?;
    let weight = parse::weight(cfg)?;
    let system = system_for(cfg, &domain, rng)?;
    let default = if domain.dimension() == 2 { "indicator-disk:0.1" } else { "indicator:0,0.1" };
    let fspec = parse::function(cfg, &system, rng, default)?;
    let ridge: f64 = cfg.parse_or("ridge", 0.0)?;
    let r = expand_function(&fspec, &system, &domain, weight.as_ref(), ridge)?;
    let mut csv = CsvTable::new(&["index", "frequency", "re", "im"]);
    for (j, c) in r.coefficients.values().iter().enumerate() {
        let freq = match system.get(j) {
            riesz_lab::harmonic::Frequency::Line(x) => f(x),
            riesz_lab::harmonic::Frequency::Plane([x, y]) => format!("{} {}", f(x), f(y)),
        };
        csv.push_row(vec![j.to_string(), freq, f(c.re), f(c.im)]);
    }
    Ok(Output {
        summary: vec![format!("residual energy {} of {}", r.residual_energy, r.function_energy)],
        fingerprints: value(&r.fingerprints),
        payload: value(&r),
        csv: csv.render(),
        flag: None,
    })
}

fn translate_test(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Run {
    let domain = parse::domain(cfg)?;
    let weight = parse::weight(cfg)?;
    let system = system_for(cfg, &domain, rng)?;
    let fspec = parse::function(cfg, &system, rng, "synthesis")?;
    let shifts = parse::shifts(cfg, domain.dimension())?;
    let reports = shifts.iter().map(|t| translation_diagnostic(&domain, weight.as_ref(), &system, &fspec, t)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = CsvTable::new(&["shift", "coeff_energy", "f_energy", "g_energy", "ratio", "implied_k", "residual_energy"]);
    for r in &reports {
        let shift = r.shift.iter().map(|x| f(*x)).collect::<Vec<_>>().join(" ");
        csv.push_row(vec![shift, f(r.coeff_energy), f(r.f_energy), f(r.g_energy), f(r.ratio), f(r.implied_k), f(r.residual_energy)]);
    }
    let worst = reports.iter().map(|r| r.implied_k).fold(1.0, f64::max);
    Ok(Output {
        summary: vec![format!("{} shifts, largest implied K {}", reports.len(), worst)],
        fingerprints: value(&reports[0].fingerprints),
        payload: value(&reports),
        csv: csv.render(),
        flag: None,
    })
}

fn scan(cfg: &RunConfig) -> Run {
    let weight = parse::weight(cfg)?.ok_or_else(|| CliError::Input("weighted-scan needs a weight".into()))?;
    let eps_grid = parse::numbers(cfg.get("eps-grid").unwrap_or("0.1,0.01,0.001"), "eps-grid")?;
    let rule = TruncationRule { step: cfg.parse_or("lattice", 1.0)?, bound: cfg.parse_or("trunc", 20000.0)? };
    let s = weighted_scan(&weight, &eps_grid, rule)?;
    let mut csv = CsvTable::new(&["eps", "shift", "implied_k", "ratio", "exact_implied_k", "f_energy", "g_energy", "residual_energy"]);
    for r in &s.rows {
        csv.push_row(vec![f(r.eps), f(r.shift), f(r.implied_k), f(r.ratio), f(r.exact_implied_k), f(r.f_energy), f(r.g_energy), f(r.residual_energy)]);
    }
    Ok(Output {
        summary: s.rows.iter().map(|r| format!("eps {}: implied K {}", r.eps, r.implied_k)).collect(),
        fingerprints: json!({ "weight": riesz_lab::report::fingerprint(&s.weight), "rule": riesz_lab::report::fingerprint(&s.rule) }),
        flag: (!s.strictly_increasing).then(|| "implied K is not strictly increasing".to_string()),
        payload: value(&s),
        csv: csv.render(),
    })
}

fn pigeonhole(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Run {
    let n: usize = cfg.parse_or("count", 64)?;
    let npts: usize = cfg.parse_or("points", 64)?;
    let a: f64 = cfg.parse_or("a", 1.0)?;
    if n == 0 || npts < 2 || !(a > 0.0 && a.is_finite()) {
        return Err(CliError::Input("pigeonhole needs count ≥ 1, points ≥ 2 and a > 0".into()));
    }
    let (points, weights): (Vec<f64>, Vec<f64>) = gauss_legendre_on(0.0, a, npts).into_iter().unzip();
    let values = (0..n).map(|_| (0..npts).map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU))).collect()).collect();
    let family = SampledFamily { points, weights, values };
    let m = match cfg.parse::<f64>("m")? {
        Some(m) => m,
        None => family.cauchy_schwarz_bound(),
    };
    let r = sector_pigeonhole_select(&family, a, m)?;
    let mut csv = CsvTable::new(&["index", "grid_energy", "in_sector"]);
    for i in 0..family.len() {
        csv.push_row(vec![i.to_string(), f(family.grid_energy(i)), r.sector_members.contains(&i).to_string()]);
    }
    Ok(Output {
        summary: vec![format!("index {} energy {} bound {} (sector {})", r.index, r.energy, r.bound, r.sector)],
        fingerprints: json!({ "family": riesz_lab::report::fingerprint(&family) }),
        flag: (!r.sector_hypothesis_holds).then(|| "subset-sum hypothesis fails on the grid".to_string()),
        payload: value(&r),
        csv: csv.render(),
    })
}

fn theorem2(cfg: &RunConfig) -> Run {
    let stages = parse::paper_set(cfg)?;
    let mut params = Theorem2Params::desk(stages.stages);
    params.split_counts = stages.split_counts.clone();
    params.ell = cfg.parse_or("ell", params.ell)?;
    params.truncation = cfg.parse_or("trunc", params.truncation)?;
    params.rule = parse::rule(cfg)?;
    params.grid_per_interval = cfg.parse_or("grid", params.grid_per_interval)?;
    params.residual_limit = cfg.parse_or("residual-limit", params.residual_limit)?;
    let r = theorem2_run(&params)?;
    let mut csv = CsvTable::new(&["k", "coeff_energy", "s_energy", "short_energy", "long_energy"]);
    if let Some(chain) = &r.chain {
        for t in &chain.translations {
            csv.push_row(vec![t.k.to_string(), f(t.coeff_energy), f(t.s_energy), f(t.short_energy), f(t.long_energy)]);
        }
    }
    let mut summary = vec![format!("stage {}: K̂ = {}, λ_min {} λ_max {}, outcome {:?}", r.stage, opt(r.k_hat), r.lambda_min, r.lambda_max, r.outcome)];
    summary.push(r.scale_note.clone());
    let flag = match (r.outcome, r.invariants_hold()) {
        (_, false) => Some("an invariant check failed".to_string()),
        (Theorem2Outcome::TruncationInsufficient, _) => Some(format!("truncation insufficient: largest residual {}", r.max_residual)),
        _ => None,
    };
    Ok(Output { fingerprints: value(&r.fingerprints), payload: value(&r), csv: csv.render(), summary, flag })
}

fn disk(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Run {
    let domain = riesz_lab::harmonic::Domain::Disk(riesz_lab::geometry::Disk::unit_area());
    let system = system_for(cfg, &domain, rng)?;
    let params = DiskParams {
        eps: cfg.parse_or("eps", 0.05)?,
        theta_count: cfg.parse_or("theta", default_theta_count(&system))?,
        radial_nodes: cfg.parse_or("radial", 256)?,
        angular_nodes: cfg.parse_or("angular", 512)?,
    };
    let r = disk_run_with(&system, &params)?;
    let mut csv = CsvTable::new(&["theta", "upper_lune", "lower_lune", "lens", "translated_energy", "partition_error", "crescent"]);
    for row in &r.rows {
        csv.push_row(vec![f(row.theta), f(row.upper_lune), f(row.lower_lune), f(row.lens), f(row.translated_energy), f(row.partition_error), f(row.crescent)]);
    }
    Ok(Output {
        summary: vec![format!("implied K lower {} (threshold {}), K = {}", r.implied_k_lower, r.threshold, opt(r.bounds.constant))],
        flag: r.bounds.is_singular().then(|| "finite section is numerically singular".to_string()),
        fingerprints: value(&r.fingerprints),
        payload: value(&r),
        csv: csv.render(),
    })
}

fn kadec(cfg: &RunConfig) -> Run {
    let delta: f64 = cfg.parse_or("delta", 0.1)?;
    let n: usize = cfg.parse_or("n", 64)?;
    let b = kadec_experiment(delta, n)?;
    let reference = kadec_lower_bound(delta);
    let csv = single_row(&["delta", "n", "lower", "upper", "reference_lower"], vec![f(delta), n.to_string(), f(b.lower), f(b.upper), f(reference)]);
    Ok(Output {
        summary: vec![format!("lower {} (reference {}), upper {}", b.lower, reference, b.upper)],
        flag: b.is_singular().then(|| "finite section is numerically singular".to_string()),
        fingerprints: value(&b.fingerprints),
        payload: json!({ "delta": delta, "n": n, "bounds": value(&b), "reference_lower": reference }),
        csv: csv.render(),
    })
}

fn threshold() -> Output {
    let k = golden_threshold();
    let residual = k.powi(4) - k.powi(2) - 1.0;
    Output {
        summary: vec![format!("{k:?}"), format!("K^4 - K^2 - 1 = {residual:e}")],
        fingerprints: Value::Null,
        payload: json!({ "value": k, "residual": residual }),
        csv: single_row(&["value", "residual"], vec![f(k), f(residual)]).render(),
        flag: None,
    }
}
