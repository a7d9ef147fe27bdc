//! Classical Lie algebra cohomology with trivial coefficients, computed two
//! ways: from the Koszul differential on the ghost space and from a
//! Chevalley-Eilenberg complex built on matrix realisations of sl(n).

use std::collections::BTreeMap;

use exact_linalg::{rank, Rational, SparseMatrix};

use crate::cohomology::{carve, graded_cohomology, CohomologyRow};
use crate::operators::Instance;
use crate::space::{materialize, Block};
use crate::BrstError;

/// Betti numbers of `d^nil` on the full ghost space, by form degree.
pub fn koszul_betti(x: &Instance) -> Result<Vec<usize>, BrstError> {
    Ok(koszul_rows(x)?.into_iter().map(|r| r.cohomology).collect())
}

/// Cohomology table of `d^nil` on the full ghost space, by form degree.
pub fn koszul_rows(x: &Instance) -> Result<Vec<CohomologyRow>, BrstError> {
    let lay = &x.lay;
    let states = (0..1u64 << lay.modes()).map(|m| (m, 0u32)).collect();
    let blk = Block::new(Vec::new(), states);
    let d = materialize(&x.d_nil(), &blk, &blk)?;
    let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, k) in blk.states.iter().enumerate() {
        // omega is the top form over n_+; each c raises and each b lowers the form degree
        let form = (lay.gh_tot2(k.0) + lay.l as i64) / 2 + lay.m as i64;
        classes.entry(form).or_default().push(i);
    }
    let spaces = carve(&classes, None);
    let g = graded_cohomology("classical", blk.len(), &d, &spaces, |r| Some(r + 1), |r| (r.to_string(), None))
        .map_err(BrstError::Internal)?;
    Ok(g.rows.into_iter().map(|r| r.1).collect())
}

/// Structure constants `[x_i, x_j] = sum_k c[i][j][k] x_k` of sl(n) in the
/// basis `E_ij (i != j)`, `E_ii - E_{i+1,i+1}`.
pub fn sl_structure_constants(n: usize) -> Vec<Vec<Vec<i64>>> {
    let mut basis: Vec<Vec<Vec<i64>>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = vec![vec![0; n]; n];
                m[i][j] = 1;
                basis.push(m);
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = vec![vec![0; n]; n];
        m[i][i] = 1;
        m[i + 1][i + 1] = -1;
        basis.push(m);
    }
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let coords = |m: &Vec<Vec<i64>>| -> Vec<i64> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    v.push(m[i][j]);
                }
            }
        }
        // traceless diagonal: coefficient of H_i is the partial sum of diagonal entries
        let mut acc = 0;
        for i in 0..n - 1 {
            acc += m[i][i];
            v.push(acc);
        }
        v
    };
    let dim = basis.len();
    let mut c = vec![vec![vec![0; dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let ab = mul(&basis[i], &basis[j]);
            let ba = mul(&basis[j], &basis[i]);
            let br: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|s| ab[r][s] - ba[r][s]).collect()).collect();
            c[i][j] = coords(&br);
        }
    }
    c
}

/// Betti numbers of the Chevalley-Eilenberg complex `Lambda g^*` with
/// `(d f)(x_0..x_k) = sum_{i<j} (-1)^{i+j} f([x_i, x_j], x_0..^i..^j..x_k)`.
pub fn chevalley_eilenberg_betti(c: &[Vec<Vec<i64>>]) -> Vec<usize> {
    let dim = c.len();
    let by_degree: Vec<Vec<u64>> =
        (0..=dim).map(|k| (0..1u64 << dim).filter(|s| s.count_ones() as usize == k).collect()).collect();
    let index: Vec<BTreeMap<u64, usize>> =
        by_degree.iter().map(|v| v.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
    let mut ranks = vec![0usize; dim + 1];
    for k in 0..dim {
        let mut trip = Vec::new();
        for (row, &t) in by_degree[k + 1].iter().enumerate() {
            let tv: Vec<usize> = (0..dim).filter(|b| t >> b & 1 == 1).collect();
            for i in 0..tv.len() {
                for j in i + 1..tv.len() {
                    let z = t & !(1 << tv[i]) & !(1 << tv[j]);
                    let sign_ij = if (i + j) % 2 == 0 { 1 } else { -1 };
                    for (e, &coef) in c[tv[i]][tv[j]].iter().enumerate() {
                        if coef == 0 || z >> e & 1 == 1 {
                            continue;
                        }
                        // f = e^S with S = {e} u Z; moving x_e to its sorted place
                        let s = z | 1 << e;
                        let pos = (z & ((1u64 << e) - 1)).count_ones();
                        let sign = if pos % 2 == 0 { 1 } else { -1 };
                        let col = index[k][&s];
                        trip.push((row, col, Rational::from_int(sign_ij * sign * coef)));
                    }
                }
            }
        }
        let m = SparseMatrix::from_triplets(by_degree[k + 1].len(), by_degree[k].len(), trip).expect("indices in range");
        ranks[k + 1] = rank(&m);
    }
    // rank of d leaving degree k is ranks[k + 1]
    (0..=dim)
        .map(|k| {
            let out = if k < dim { ranks[k + 1] } else { 0 };
            by_degree[k].len() - out - ranks[k]
        })
        .collect()
}
