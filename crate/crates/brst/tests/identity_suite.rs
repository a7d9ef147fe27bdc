use std::time::Instant;

use brst::check::Checker;
use brst::operators::Instance;
use brst::suite::{identity_suite, Context};
use brst::{AnomalyCoefficients, Family, RootDatum, Weight};

fn run(family: Family, rank: usize, lambda: &[i64], chi: &[i64]) -> usize {
    let datum = RootDatum::new(family, rank).unwrap();
    let r = AnomalyCoefficients::with_policy(&datum, &Weight::from_ints(chi), true).unwrap();
    let x = Instance::new(datum, lambda, r).unwrap();
    let ctx = Context::new(&x, 4096).unwrap();
    let t = Instant::now();
    let recs = identity_suite(&ctx, &Checker::default()).unwrap();
    let bad: Vec<_> = recs.iter().filter(|r| !r.passed()).collect();
    for r in &bad {
        eprintln!("{family:?}{rank} {lambda:?}/{chi:?} FAIL {} [{}] {:?}", r.id, r.domain, r.counterexample);
    }
    eprintln!("{family:?}{rank} {lambda:?}/{chi:?}: {} records in {:?}", recs.len(), t.elapsed());
    bad.len()
}

#[test]
fn a1_suite() {
    assert_eq!(run(Family::A, 1, &[2], &[2]) + run(Family::A, 1, &[4], &[2]), 0);
}

#[test]
fn a2_suite() {
    assert_eq!(run(Family::A, 2, &[1, 0], &[1, 0]) + run(Family::A, 2, &[1, 1], &[1, 1]) + run(Family::A, 2, &[2, 2], &[1, 1]), 0);
}

#[test]
fn b2_suite() {
    assert_eq!(run(Family::B, 2, &[1, 0], &[1, 0]) + run(Family::B, 2, &[2, 0], &[1, 0]), 0);
}
