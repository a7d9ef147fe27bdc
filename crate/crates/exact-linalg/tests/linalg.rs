use exact_linalg::{
    certify_positive_definite, intersect, inverse, nullspace, rank, rank_exact, read_csv, solve, write_csv,
    LinalgError, Rational, SparseMatrix, SubspaceBasis,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Textbook dense Gaussian elimination over BigRational, used as oracle.
fn dense_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let (nr, nc) = (a.len(), a.first().map_or(0, |r| r.len()));
    let mut rank = 0;
    for c in 0..nc {
        let Some(p) = (rank..nr).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..nr {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in 0..nc {
                    let d = &f * &a[rank][k];
                    a[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_low_rank(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Vec<Vec<i64>> {
    let u: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let v: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| (0..r).map(|k| u[i][k] * v[k][j]).sum()).collect())
        .collect()
}

#[test]
fn identity_has_full_rank_and_trivial_kernel() {
    let m = SparseMatrix::identity(3);
    assert_eq!(rank(&m), 3);
    assert!(nullspace(&m).is_empty());
}

#[test]
fn row_one_one_kernel() {
    let m = SparseMatrix::from_int_rows(&[vec![1, 1]]);
    assert_eq!(rank(&m), 1);
    let ns = nullspace(&m);
    assert_eq!(ns.len(), 1);
    let span = SubspaceBasis::span(2, ns).unwrap();
    assert!(span.contains(&vec![(0, q(1)), (1, q(-1))]));
}

#[test]
fn random_rank_seventeen_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let rows = random_low_rank(&mut rng, 30, 17);
    let m = SparseMatrix::from_int_rows(&rows);
    let oracle = dense_rank(&rows);
    assert_eq!(oracle, 17);
    assert_eq!(rank(&m), 17);
    assert_eq!(rank_exact(&m), 17);
    let ns = nullspace(&m);
    assert_eq!(ns.len(), 13);
    for v in &ns {
        assert!(m.mul_vec(v).is_empty());
    }
}

#[test]
fn planted_intersection_is_recovered() {
    // U = span(e0, e1 + e2), W = span(e1 + e2, e3): intersection span(e1 + e2)
    let u = SubspaceBasis::span(4, vec![vec![(0, q(1))], vec![(1, q(1)), (2, q(1))]]).unwrap();
    let w = SubspaceBasis::span(4, vec![vec![(1, q(2)), (2, q(2)), (3, q(1))], vec![(3, q(1))]]).unwrap();
    let x = intersect(&u, &w).unwrap();
    assert_eq!(x.dim(), 1);
    assert!(x.contains(&vec![(1, q(1)), (2, q(1))]));
}

#[test]
fn intersect_rejects_ambient_mismatch() {
    let u = SubspaceBasis::span(3, vec![vec![(0, q(1))]]).unwrap();
    let w = SubspaceBasis::span(4, vec![vec![(0, q(1))]]).unwrap();
    assert!(matches!(intersect(&u, &w), Err(LinalgError::AmbientMismatch { .. })));
}

#[test]
fn indefinite_and_definite_grams() {
    let d = SparseMatrix::from_int_rows(&[vec![1, 0], vec![0, -1]]);
    assert_eq!(certify_positive_definite(&d), Ok(false));
    // weight spaces of the three dimensional sl2 module: norms 1, 2, 4
    let g = SparseMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]]);
    assert_eq!(certify_positive_definite(&g), Ok(true));
    let ns = SparseMatrix::from_int_rows(&[vec![1, 2], vec![0, 1]]);
    assert_eq!(certify_positive_definite(&ns), Err(LinalgError::NotSymmetric));
    let coupled = SparseMatrix::from_int_rows(&[vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 3]]);
    assert_eq!(certify_positive_definite(&coupled), Ok(true));
    let singular = SparseMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]);
    assert_eq!(certify_positive_definite(&singular), Ok(false));
}

#[test]
fn solve_and_inverse() {
    let a = SparseMatrix::from_int_rows(&[vec![2, 1], vec![1, 3]]);
    let x = solve(&a, &vec![(0, q(3)), (1, q(4))]).unwrap().unwrap();
    assert_eq!(x, vec![(0, q(1)), (1, q(1))]);
    let inv = inverse(&a).unwrap().unwrap();
    assert_eq!(a.mul(&inv).unwrap(), SparseMatrix::identity(2));
    let sing = SparseMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]);
    assert_eq!(solve(&sing, &vec![(0, q(1))]).unwrap(), None);
    assert_eq!(inverse(&sing).unwrap(), None);
}

#[test]
fn csv_round_trip() {
    let m = SparseMatrix::from_dense(&[vec![Rational::new(1, 2), q(0)], vec![q(-3), Rational::new(5, 7)]]);
    let mut buf = Vec::new();
    write_csv(&m, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("row,col,num,den\n"));
    assert_eq!(read_csv(&buf[..], 2, 2).unwrap(), m);
}

#[test]
fn big_entries_survive_elimination() {
    let big = i64::MAX / 3;
    let m = SparseMatrix::from_int_rows(&[vec![big, big - 1], vec![big - 2, big - 3]]);
    assert_eq!(rank(&m), dense_rank(&[vec![big, big - 1], vec![big - 2, big - 3]]));
    let inv = inverse(&m).unwrap().unwrap();
    assert_eq!(m.mul(&inv).unwrap(), SparseMatrix::identity(2));
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..=2, c), r))
}

proptest! {
    #[test]
    fn rank_nullity(rows in small_matrix()) {
        let m = SparseMatrix::from_int_rows(&rows);
        let ns = nullspace(&m);
        prop_assert_eq!(rank(&m) + ns.len(), m.cols());
        prop_assert_eq!(rank(&m), dense_rank(&rows));
        for v in &ns {
            prop_assert!(m.mul_vec(v).is_empty());
        }
        prop_assert_eq!(rank(&m.transpose()), rank(&m));
    }

    #[test]
    fn intersection_is_symmetric_and_contained(a in small_matrix(), b in small_matrix()) {
        let n = 4;
        let to_vecs = |rows: &Vec<Vec<i64>>| -> Vec<exact_linalg::SparseVec> {
            rows.iter().map(|r| r.iter().take(n).enumerate().filter(|(_, x)| **x != 0)
                .map(|(i, x)| (i, q(*x))).collect()).collect()
        };
        let u = SubspaceBasis::span(n, to_vecs(&a)).unwrap();
        let w = SubspaceBasis::span(n, to_vecs(&b)).unwrap();
        let x = intersect(&u, &w).unwrap();
        let y = intersect(&w, &u).unwrap();
        prop_assert!(x.same_span(&y));
        prop_assert!(u.contains_all(&x) && w.contains_all(&x));
        // dim(U + W) + dim(U cap W) = dim U + dim W
        let mut all = u.vectors().to_vec();
        all.extend(w.vectors().iter().cloned());
        let sum = SubspaceBasis::span(n, all).unwrap();
        prop_assert_eq!(sum.dim() + x.dim(), u.dim() + w.dim());
    }

    #[test]
    fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        let oracle = BigRational::new(a.into(), b.into()) * BigRational::new(c.into(), d.into());
        prop_assert_eq!((&x * &y).to_big(), oracle);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
        }
        prop_assert_eq!((&x - &x).signum(), 0);
        prop_assert!(x.to_big().abs() >= BigRational::zero());
    }
}
