use brst::op::{basis, Expr};
use brst::operators::Instance;
use brst::{AnomalyCoefficients, Family, RootDatum, Weight};

fn inst(f: Family, rank: usize, lambda: &[i64], chi: &[i64]) -> Instance {
    let d = RootDatum::new(f, rank).unwrap();
    let r = AnomalyCoefficients::with_policy(&d, &Weight::from_ints(chi), true).unwrap();
    Instance::new(d, lambda, r).unwrap()
}

fn vanishes(x: &Instance, e: &Expr, with_v: bool) -> Option<String> {
    let n = x.lay.modes();
    let dv = if with_v { x.dim_v() as u32 } else { 1 };
    for mask in 0..(1u64 << n) {
        for v in 0..dv {
            let out = e.eval(&basis((mask, v)));
            if !out.is_empty() {
                return Some(format!("{} v{}", x.lay.describe(mask), v));
            }
        }
    }
    None
}

fn small() -> Vec<Instance> {
    vec![
        inst(Family::A, 1, &[0], &[0]),
        inst(Family::A, 2, &[0, 0], &[1, 0]),
        inst(Family::B, 2, &[0, 0], &[1, 0]),
    ]
}

#[test]
fn koszul_and_normal_ordering() {
    for x in small() {
        let dn = x.d_nil();
        assert_eq!(vanishes(&x, &Expr::new().plus(1, &[&dn, &dn]), false), None);
        for i in 0..x.lay.l {
            let a = x.l_cartan(i);
            let b = x.l_nil_cartan(i).sub(&brst::op::Op::scalar(exact_linalg::Rational::from_int(2)));
            assert_eq!(vanishes(&x, &Expr::equal(&a, &b), false), None, "L_i = L^nil_i - 2");
            let no = x.normal_order(&x.l_nil_cartan(i));
            assert_eq!(vanishes(&x, &Expr::equal(&a, &no), false), None, "normal ordering");
            let wrong = x.l_nil_cartan_signed(i, -1).sub(&brst::op::Op::scalar(exact_linalg::Rational::from_int(2)));
            assert!(vanishes(&x, &Expr::equal(&a, &wrong), false).is_some());
        }
        let rho = x.rho_op();
        let d = x.d();
        let rhs = dn.sub(&rho.scale(&exact_linalg::Rational::from_int(2)));
        assert_eq!(vanishes(&x, &Expr::equal(&d, &rhs), false), None, "d = d^nil - 2 rho");
    }
}

#[test]
fn total_differential_square() {
    for x in small() {
        let dd = x.big_d();
        let j = x.j_plus();
        let e = Expr::new().plus(1, &[&dd, &dd]).plus(1, &[&j]);
        assert_eq!(vanishes(&x, &e, true), None, "D^2 = -J+");
    }
}

#[test]
fn total_differential_square_nontrivial_module() {
    for x in [inst(Family::A, 2, &[1, 1], &[1, 0]), inst(Family::B, 2, &[1, 1], &[0, 1]), inst(Family::A, 1, &[3], &[1])] {
        let dd = x.big_d();
        let j = x.j_plus();
        let e = Expr::new().plus(1, &[&dd, &dd]).plus(1, &[&j]);
        assert_eq!(vanishes(&x, &e, true), None, "D^2 = -J+");
        let drel = x.d_rel();
        let split = x.d_bar().add(&x.d_cal());
        assert_eq!(vanishes(&x, &Expr::equal(&drel, &split), true), None, "D_rel split");
    }
}
