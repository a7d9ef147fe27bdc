use brst::chevalley::{anomaly_cocycle, root_checks};
use brst::weight_module::{Module, ModuleData};
use brst::{AnomalyCoefficients, Family, Root, RootDatum, Weight};
use exact_linalg::{certify_positive_definite, Rational, SparseMatrix};

fn datum(f: Family, l: usize) -> RootDatum {
    RootDatum::new(f, l).unwrap()
}

#[test]
fn positive_root_counts() {
    for (f, l, m) in [
        (Family::A, 1, 1),
        (Family::A, 2, 3),
        (Family::A, 3, 6),
        (Family::A, 4, 10),
        (Family::B, 2, 4),
        (Family::B, 3, 9),
        (Family::B, 4, 16),
        (Family::C, 2, 4),
        (Family::C, 3, 9),
        (Family::C, 4, 16),
        (Family::D, 4, 12),
        (Family::F, 4, 24),
        (Family::G, 2, 6),
    ] {
        assert_eq!(datum(f, l).num_positive(), m, "{f}{l}");
    }
}

#[test]
fn unsupported_types_are_rejected() {
    assert!(RootDatum::new(Family::E, 6).is_err());
    assert!(RootDatum::new(Family::A, 5).is_err());
    assert!(RootDatum::new(Family::G, 3).is_err());
}

#[test]
fn a1_and_b2_data() {
    let a1 = datum(Family::A, 1);
    assert_eq!(a1.positive, vec![vec![1]]);
    assert_eq!(a1.coroot(Root::pos(0)), vec![Rational::one()]);
    let b2 = datum(Family::B, 2);
    assert_eq!(b2.cartan, vec![vec![2, -1], vec![-2, 2]]);
    assert_eq!(b2.positive, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
    let g2 = datum(Family::G, 2);
    assert_eq!(g2.cartan, vec![vec![2, -3], vec![-1, 2]]);
    assert_eq!(g2.positive.last().unwrap(), &vec![3, 2]);
}

#[test]
fn anomaly_coefficients() {
    let a1 = datum(Family::A, 1);
    let r = AnomalyCoefficients::new(&a1, &Weight::from_ints(&[2])).unwrap();
    assert_eq!(r.r(Root::pos(0)), Rational::from_int(4));
    assert_eq!(r.r(Root::neg(0)), Rational::from_int(-4));
    let a2 = datum(Family::A, 2);
    let r = AnomalyCoefficients::new(&a2, &Weight::from_ints(&[1, 1])).unwrap();
    let vals: Vec<Rational> = a2.positive_roots().map(|b| r.r(b)).collect();
    assert_eq!(vals, vec![Rational::from_int(3), Rational::from_int(3), Rational::from_int(6)]);
    let err = AnomalyCoefficients::new(&a1, &Weight::from_ints(&[0])).unwrap_err();
    assert!(err.to_string().contains("chi not regular dominant"));
    assert!(AnomalyCoefficients::with_policy(&a2, &Weight::from_ints(&[1, 0]), true).is_ok());
    assert!(AnomalyCoefficients::new(&a2, &Weight::from_ints(&[1, 0])).is_err());
}

#[test]
fn structure_constants_pass_checks() {
    for (f, l) in [(Family::A, 1), (Family::A, 2), (Family::A, 3), (Family::B, 2), (Family::C, 3), (Family::G, 2), (Family::D, 4)] {
        let d = datum(f, l);
        for c in root_checks(&d) {
            assert!(c.failure.is_none(), "{f}{l} {}: {:?}", c.name, c.failure);
        }
        let chi = Weight::from_ints(&vec![1; l]);
        let c = anomaly_cocycle(&d, &chi, true);
        assert!(c.failure.is_none(), "{f}{l} {:?}", c.failure);
    }
}

#[test]
fn weyl_dimensions_match() {
    for (f, l, lam, dim) in [
        (Family::A, 1, vec![2], 3),
        (Family::A, 2, vec![1, 0], 3),
        (Family::A, 2, vec![1, 1], 8),
        (Family::A, 2, vec![2, 2], 27),
        (Family::B, 2, vec![1, 0], 5),
        (Family::B, 2, vec![0, 1], 4),
        (Family::G, 2, vec![1, 0], 7),
        (Family::G, 2, vec![0, 1], 14),
    ] {
        let d = datum(f, l);
        let m = Module::build(&d.cartan, &lam).unwrap();
        assert_eq!(m.dim(), dim, "{f}{l} {lam:?}");
        assert_eq!(d.weyl_dimension(&lam), Rational::from_int(dim as i64));
        assert_eq!(certify_positive_definite(&m.gram), Ok(true));
    }
}

#[test]
fn a1_shapovalov_gram() {
    let d = datum(Family::A, 1);
    let m = Module::build(&d.cartan, &[2]).unwrap();
    let g = SparseMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]]);
    assert_eq!(m.gram, g);
}

#[test]
fn module_relations_and_conjugation() {
    for (f, l, lam) in [(Family::A, 2, vec![1, 1]), (Family::B, 2, vec![1, 1]), (Family::G, 2, vec![1, 0])] {
        let d = datum(f, l);
        let chi = Weight::from_ints(&vec![1; l]);
        let md = ModuleData::new(&d, &lam, &chi).unwrap();
        let g = &md.module.gram;
        for a in d.all_roots() {
            // L_a^T G = -G L_-a
            let lhs = md.root_op(&d, a).transpose().mul(g).unwrap();
            let rhs = g.mul(md.root_op(&d, a.negate())).unwrap().scale(&Rational::from_int(-1));
            assert_eq!(lhs, rhs);
            for b in d.all_roots() {
                let br = brst::weight_module::commutator(md.root_op(&d, a), md.root_op(&d, b));
                let expect = if a == b.negate() {
                    // [tau_a, tau_-a] = -H_a
                    let h: Vec<Rational> = d.coroot(a);
                    let n = md.dim();
                    let mut acc = SparseMatrix::zeros(n, n);
                    for (i, c) in h.iter().enumerate() {
                        acc = acc.axpy(&-c, &md.module.h_diag(i)).unwrap();
                    }
                    acc
                } else if let Some(s) = d.sum(a, b) {
                    md.root_op(&d, s).scale(&Rational::from_int(d.n(a, b)))
                } else {
                    SparseMatrix::zeros(md.dim(), md.dim())
                };
                assert_eq!(br, expect, "{f}{l}");
            }
        }
    }
}

#[test]
fn gupta_bleuler_kernel() {
    let d = datum(Family::A, 1);
    let md = ModuleData::new(&d, &[2], &Weight::from_ints(&[2])).unwrap();
    assert_eq!(md.gb_kernel(&d).len(), 1);
    let md = ModuleData::new(&d, &[2], &Weight::from_ints(&[4])).unwrap();
    assert_eq!(md.gb_kernel(&d).len(), 0);
    let a2 = datum(Family::A, 2);
    let md = ModuleData::new(&a2, &[1, 1], &Weight::from_ints(&[1, 1])).unwrap();
    assert_eq!(md.gb_kernel(&a2).len(), 1);
}
