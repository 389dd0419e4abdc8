use riesz_lab::experiments::{theorem2_run, Theorem2Outcome, Theorem2Params};
use riesz_lab::geometry::{build_paper_set, IntervalSet, PaperSetStages};
use riesz_lab::harmonic::{Domain, ExponentialSystem, FunctionSpec, Region};
use riesz_lab::report::{fingerprint, to_json_string};
use riesz_lab::riesz::{expand_function, riesz_bounds, RieszBounds};

#[test]
fn reports_round_trip_through_json() {
    let stages = build_paper_set(3, &[3, 4]).unwrap();
    let text = to_json_string(&stages).unwrap();
    let back: PaperSetStages = serde_json::from_str(&text).unwrap();
    assert_eq!(back, stages);
    assert_eq!(to_json_string(&back).unwrap(), text);

    let system = ExponentialSystem::symmetric_lattice(0.5, 6.0).unwrap();
    let b = riesz_bounds(&system, &Domain::Intervals(stages.set.clone()), None).unwrap();
    let back: RieszBounds = serde_json::from_str(&to_json_string(&b).unwrap()).unwrap();
    assert_eq!(back, b);
}

#[test]
fn fingerprints_track_inputs() {
    let a = IntervalSet::single(0.0, 1.0).unwrap();
    let b = IntervalSet::single(0.0, 1.0 + 1e-12).unwrap();
    assert_eq!(fingerprint(&a), fingerprint(&a.clone()));
    assert_ne!(fingerprint(&a), fingerprint(&b));
}

#[test]
fn expansion_on_family_set_reproduces_indicator() {
    let stages = build_paper_set(2, &[3]).unwrap();
    let domain = Domain::Intervals(stages.set.clone());
    let system = ExponentialSystem::symmetric_lattice(0.25, 64.0).unwrap();
    let piece = IntervalSet::single(stages.usable_intervals()[0].lo(), stages.usable_intervals()[0].hi()).unwrap();
    let f = FunctionSpec::normalized_indicator(Region::Intervals(piece)).unwrap();
    // 513 frequencies on a set of measure 1.5 are far from independent.
    let r = expand_function(&f, &system, &domain, None, 1e-10).unwrap();
    assert!((r.function_energy - 1.0).abs() < 1e-12);
    assert!(r.residual_energy < 0.05, "residual {}", r.residual_energy);
}

#[test]
fn stage_two_chain_is_consistent() {
    let mut params = Theorem2Params::desk(2);
    params.truncation = 64.0;
    let r = theorem2_run(&params).unwrap();
    assert_eq!(r.outcome, Theorem2Outcome::Complete);
    assert!(r.invariants_hold());
    let chain = r.chain.as_ref().unwrap();
    // One period covers the whole set, so its energy dominates the energy on the set.
    assert!(chain.s_energy <= chain.period_energy * (1.0 + 1e-9));
    assert!(chain.pigeonhole.energy <= chain.pigeonhole.bound);
    assert!(!chain.translations.is_empty());
    let again = theorem2_run(&params).unwrap();
    assert_eq!(to_json_string(&again).unwrap(), to_json_string(&r).unwrap());
}
