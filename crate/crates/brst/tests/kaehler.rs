use brst::kaehler::{dagger, dagger_closed_form, kaehler_ghost_entry, KBlock};
use brst::operators::Instance;
use brst::space::{materialize, Blocks};
use brst::{AnomalyCoefficients, Family, RootDatum, Weight};
use exact_linalg::{certify_positive_definite, SparseMatrix};

fn inst(f: Family, rank: usize, lambda: &[i64], chi: &[i64]) -> Instance {
    let d = RootDatum::new(f, rank).unwrap();
    let r = AnomalyCoefficients::with_policy(&d, &Weight::from_ints(chi), true).unwrap();
    Instance::new(d, lambda, r).unwrap()
}

fn cases() -> Vec<Instance> {
    vec![
        inst(Family::A, 1, &[2], &[2]),
        inst(Family::A, 1, &[4], &[2]),
        inst(Family::A, 2, &[1, 1], &[1, 1]),
        inst(Family::A, 2, &[2, 2], &[1, 1]),
        inst(Family::B, 2, &[1, 0], &[1, 0]),
        inst(Family::B, 2, &[2, 0], &[1, 0]), inst(Family::G, 2, &[1, 0], &[1, 0]),
    ]
}

#[test]
fn gram_diagonal_in_ghosts_and_positive() {
    for x in cases() {
        let bl = Blocks::new(&x).unwrap();
        for blk in bl.blocks.values() {
            let masks: Vec<u64> = blk.states.iter().map(|k| k.0).collect();
            for &s in &masks {
                for &t in &masks {
                    if s != t {
                        assert!(kaehler_ghost_entry(&x, s, t).is_zero());
                    }
                }
            }
            let k = KBlock::new(&x, blk).unwrap();
            assert!(certify_positive_definite(&k.gram).unwrap(), "block {:?}", blk.w);
            let n = blk.len();
            assert_eq!(k.star.mul(&k.star).unwrap(), SparseMatrix::identity(n));
            assert_eq!(k.gram.mul(&k.gram_inv).unwrap(), SparseMatrix::identity(n));
        }
    }
}

#[test]
fn daggers() {
    for x in cases() {
        let bl = Blocks::new(&x).unwrap();
        let rel = bl.relative(x.lay.l).unwrap();
        let kr = KBlock::new(&x, rel).unwrap();
        println!("relative block {}", rel.len());
        for a in x.datum.all_roots() {
            let sh = x.datum.coords(a);
            let neg: Vec<i64> = sh.iter().map(|v| -v).collect();
            // c^a : B_{-a} -> B_0
            let Some(src) = bl.shifted(&x, &rel.w, &neg) else { continue };
            let ks = KBlock::new(&x, src).unwrap();
            let m = materialize(&x.c(a), src, rel).unwrap();
            let dg = dagger(&m, &ks, &kr);
            let ra = x.r.r(if a.is_positive() { a } else { a.negate() });
            let f = materialize(&x.b(a.negate()).scale(&ra.recip()), rel, src).unwrap();
            assert_eq!(dg, f, "c^a dagger");
            let cf = dagger_closed_form(&x, &x.c(a), 1, (src, &ks), (rel, &kr)).unwrap();
            assert_eq!(dg, cf, "closed form c^a");
            let m = materialize(&x.b(a), src, rel).unwrap();
            let dg = dagger(&m, &ks, &kr);
            let f = materialize(&x.c(a.negate()).scale(&ra), rel, src).unwrap();
            assert_eq!(dg, f, "b_a dagger");
        }
        let dcal = materialize(&x.d_cal(), rel, rel).unwrap();
        let f = materialize(&x.d_cal_dagger_formula(), rel, rel).unwrap();
        assert_eq!(dagger(&dcal, &kr, &kr), f, "D_cal dagger formula");
        let jp = materialize(&x.j_plus(), rel, rel).unwrap();
        let jm = materialize(&x.j_minus(), rel, rel).unwrap();
        assert_eq!(dagger(&jp, &kr, &kr), jm);
    }
}

