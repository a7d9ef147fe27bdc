use crate::matrix::SparseMatrix;
use crate::rational::Rational;
use crate::LinalgError;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the graph with an edge for every nonzero
/// off-diagonal entry. Components come out sorted by smallest index.
pub fn symmetric_blocks(g: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = g.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, j, _) in g.triplets() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    comps.into_values().collect()
}

/// Exact positive-definiteness test for a symmetric matrix.
///
/// The matrix splits into independent diagonal blocks; each block is
/// reduced by symmetric Gaussian elimination without pivoting, whose k-th
/// pivot is the ratio of consecutive leading principal minors. The block is
/// positive definite iff every pivot is positive.
pub fn certify_positive_definite(g: &SparseMatrix) -> Result<bool, LinalgError> {
    if g.rows() != g.cols() {
        return Err(LinalgError::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if !g.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    for block in symmetric_blocks(g) {
        let k = block.len();
        let mut a: Vec<Vec<Rational>> =
            block.iter().map(|&i| block.iter().map(|&j| g.get(i, j)).collect()).collect();
        for p in 0..k {
            if a[p][p].signum() <= 0 {
                return Ok(false);
            }
            let piv = a[p][p].clone();
            for r in p + 1..k {
                if a[r][p].is_zero() {
                    continue;
                }
                let f = &a[r][p] / &piv;
                for c in p..k {
                    let d = &f * &a[p][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    Ok(true)
}
