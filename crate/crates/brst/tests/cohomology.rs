use brst::classical::{chevalley_eilenberg_betti, koszul_betti, sl_structure_constants};
use brst::cohomology::{absolute, bigraded, relative};
use brst::conjecture::conjecture;
use brst::operators::Instance;
use brst::suite::Context;
use brst::{AnomalyCoefficients, Family, RootDatum, Weight};
use exact_linalg::Rational;

fn instance(family: Family, rank: usize, lambda: &[i64], chi: &[i64]) -> Instance {
    let datum = RootDatum::new(family, rank).unwrap();
    let r = AnomalyCoefficients::with_policy(&datum, &Weight::from_ints(chi), true).unwrap();
    Instance::new(datum, lambda, r).unwrap()
}

fn full(family: Family, rank: usize, lambda: &[i64], chi: &[i64], root_dim: usize) {
    let x = instance(family, rank, lambda, chi);
    let ctx = Context::new(&x, 1 << 16).unwrap();
    let rel = relative(&ctx, 7).unwrap();
    for c in &rel.checks {
        assert!(c.passed(), "{family:?}{rank} {lambda:?}/{chi:?}: {} {:?}", c.id, c.counterexample);
    }
    for row in &rel.rows {
        assert_eq!(row.cohomology, row.cocycles - row.coboundaries);
        let r: i64 = row.degree.parse().unwrap();
        if r > 0 {
            assert_eq!(row.cohomology, 0, "degree {r}");
        }
    }
    assert_eq!(rel.root_component_dim, root_dim);
    assert_eq!(rel.gupta_bleuler_dim, root_dim);
    let (rows, rec) = bigraded(&ctx, &rel.jp).unwrap();
    assert!(rec.passed(), "{:?}", rec.counterexample);
    assert_eq!(rows.is_empty(), ctx.rel.is_empty());
    if rank <= 2 && family != Family::G {
        let abs = absolute(&ctx, &rel, 1 << 16).unwrap();
        for c in &abs.checks {
            assert!(c.passed(), "{}: {:?}", c.id, c.counterexample);
        }
        let half = Rational::new(rank as i64, 2);
        for row in &abs.rows {
            let d: Rational = row.degree.parse().unwrap();
            if d > half {
                assert_eq!(row.cohomology, 0);
            }
        }
        let total: usize = abs.rows.iter().map(|r| r.cohomology).sum();
        assert_eq!(total, (1 << rank) * rel.harmonic_total());
    }
}

#[test]
fn a1_highest_weight_chi() {
    full(Family::A, 1, &[2], &[2], 1);
}

#[test]
fn a1_chi_not_a_weight() {
    full(Family::A, 1, &[2], &[4], 0);
}

#[test]
fn a1_chi_below_highest_weight() {
    full(Family::A, 1, &[4], &[2], 0);
}

#[test]
fn a2_instances() {
    full(Family::A, 2, &[1, 0], &[1, 0], 1);
    full(Family::A, 2, &[1, 1], &[1, 1], 1);
}

#[test]
fn b2_instance() {
    full(Family::B, 2, &[1, 0], &[1, 0], 1);
}

#[test]
fn g2_instance() {
    full(Family::G, 2, &[1, 0], &[1, 0], 1);
}

#[test]
fn a1_relative_table() {
    let x = instance(Family::A, 1, &[2], &[2]);
    let ctx = Context::new(&x, 1 << 16).unwrap();
    let rel = relative(&ctx, 0).unwrap();
    assert!(rel.row(0).unwrap().cohomology >= 1);
    assert_eq!(rel.row(1).map_or(0, |r| r.cohomology), 0);
}

#[test]
fn a1_absolute_degrees() {
    let x = instance(Family::A, 1, &[2], &[2]);
    let ctx = Context::new(&x, 1 << 16).unwrap();
    let rel = relative(&ctx, 0).unwrap();
    let abs = absolute(&ctx, &rel, 1 << 16).unwrap();
    let t = rel.harmonic_total();
    let get = |d: &str| abs.rows.iter().find(|r| r.degree == d).map_or(0, |r| r.cohomology);
    assert_eq!(get("-1/2"), t);
    assert_eq!(get("1/2"), t);
}

#[test]
fn classical_sl2() {
    let x = instance(Family::A, 1, &[0], &[1]);
    assert_eq!(koszul_betti(&x).unwrap(), vec![1, 0, 0, 1]);
    assert_eq!(chevalley_eilenberg_betti(&sl_structure_constants(2)), vec![1, 0, 0, 1]);
}

#[test]
fn classical_sl3() {
    let x = instance(Family::A, 2, &[0, 0], &[1, 1]);
    let want = vec![1, 0, 0, 1, 0, 1, 0, 0, 1];
    assert_eq!(chevalley_eilenberg_betti(&sl_structure_constants(3)), want);
    assert_eq!(koszul_betti(&x).unwrap(), want);
}

#[test]
fn classical_top_and_bottom_b2() {
    let x = instance(Family::B, 2, &[0, 0], &[1, 1]);
    let b = koszul_betti(&x).unwrap();
    assert_eq!(b.len(), 11);
    assert_eq!((b[0], b[10]), (1, 1));
}

#[test]
fn conjecture_a1_is_zero() {
    for (lambda, chi) in [(2, 2), (4, 2), (2, 4)] {
        let x = instance(Family::A, 1, &[lambda], &[chi]);
        let ctx = Context::new(&x, 1 << 16).unwrap();
        let rel = relative(&ctx, 0).unwrap();
        let c = conjecture(&ctx, "A1", &rel.anomalous_basis()).unwrap();
        assert!(c.assemblies_agree);
        assert!(c.is_zero());
        assert!(c.witness.is_none());
    }
}

#[test]
fn conjecture_assemblies_agree_rank_two() {
    for (f, lambda, chi) in [
        (Family::A, [1, 1], [1, 1]),
        (Family::A, [2, 2], [1, 1]),
        (Family::B, [1, 0], [1, 0]),
        (Family::B, [2, 0], [1, 0]),
    ] {
        let x = instance(f, 2, &lambda, &chi);
        let ctx = Context::new(&x, 1 << 16).unwrap();
        let rel = relative(&ctx, 0).unwrap();
        let c = conjecture(&ctx, "rank2", &rel.anomalous_basis()).unwrap();
        eprintln!("{f:?} {lambda:?}/{chi:?}: rank {} anomalous {} short forms {}/{}", c.residual_rank, c.anomalous_residual_rank, c.short_form_ghost_agrees, c.short_form_full_agrees);
        assert!(c.assemblies_agree, "{f:?} {lambda:?}/{chi:?}");
        assert_eq!(c.residual_rank == 0, c.witness.is_none());
    }
}
