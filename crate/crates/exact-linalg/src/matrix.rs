use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::LinalgError;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Builds a sparse vector from unordered entries, summing duplicates.
pub fn sparse_from_entries<I: IntoIterator<Item = (usize, Rational)>>(entries: I) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, x) in entries {
        if x.is_zero() {
            continue;
        }
        *acc.entry(i).or_default() += x;
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

pub fn sparse_scale(v: &SparseVec, s: &Rational) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * s)).collect()
}

/// `a + s*b` for sorted sparse vectors.
pub fn sparse_axpy(a: &SparseVec, s: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let x = s * &b[j].1;
            if !x.is_zero() {
                out.push((b[j].0, x));
            }
            j += 1;
        } else {
            let x = &a[i].1 + &(s * &b[j].1);
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_dot(a: &SparseVec, b: &SparseVec) -> Rational {
    let (mut i, mut j) = (0, 0);
    let mut acc = Rational::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &a[i].1 * &b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Column-major sparse matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> SparseMatrix {
        SparseMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, Rational::one())]).collect(),
        }
    }

    /// Triplets are summed when repeated.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<SparseMatrix, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut buckets: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); cols];
        for (r, c, x) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange { row: r, col: c, rows, cols });
            }
            buckets[c].push((r, x));
        }
        let columns = buckets.into_iter().map(sparse_from_entries).collect();
        Ok(SparseMatrix { rows, cols, columns })
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> SparseMatrix {
        debug_assert!(columns.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(columns.iter().all(|c| c.iter().all(|(r, x)| *r < rows && !x.is_zero())));
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> SparseMatrix {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); nc];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged dense matrix");
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    columns[j].push((i, x.clone()));
                }
            }
        }
        SparseMatrix { rows: nr, cols: nc, columns }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> SparseMatrix {
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        SparseMatrix::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    /// Iterates `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, x)| (*i, j, x)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                columns[*i].push((j, x.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns }
    }

    /// Row-major view: row `i` as a sparse vector over column indices.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, x) in v {
            for (i, a) in &self.columns[*j] {
                *acc.entry(*i).or_default() += a * x;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let columns = other.columns.iter().map(|c| self.mul_vec(c)).collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }

    fn zip_with(&self, other: &SparseMatrix, s: &Rational, op: &'static str) -> Result<SparseMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| sparse_axpy(a, s, b))
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, columns })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.zip_with(other, &Rational::one(), "add")
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.zip_with(other, &Rational::from_int(-1), "sub")
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &Rational, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.zip_with(other, s, "axpy")
    }

    pub fn scale(&self, s: &Rational) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|c| sparse_scale(c, s)).collect(),
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: idx.len(),
            columns: idx.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&SparseMatrix]) -> Result<SparseMatrix, LinalgError> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut columns = vec![Vec::new(); cols];
        let mut offset = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(LinalgError::DimensionMismatch {
                    op: "vstack",
                    left: (offset, cols),
                    right: (b.rows, b.cols),
                });
            }
            for (j, c) in b.columns.iter().enumerate() {
                columns[j].extend(c.iter().map(|(i, x)| (i + offset, x.clone())));
            }
            offset += b.rows;
        }
        Ok(SparseMatrix { rows: offset, cols, columns })
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(blocks: &[&SparseMatrix]) -> Result<SparseMatrix, LinalgError> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let mut columns = Vec::new();
        for b in blocks {
            if b.rows != rows {
                return Err(LinalgError::DimensionMismatch {
                    op: "hstack",
                    left: (rows, columns.len()),
                    right: (b.rows, b.cols),
                });
            }
            columns.extend(b.columns.iter().cloned());
        }
        Ok(SparseMatrix { rows, cols: columns.len(), columns })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }
}
