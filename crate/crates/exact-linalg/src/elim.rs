//! Fraction-free sparse elimination.
//!
//! Rows are kept as primitive integer vectors (content divided out, leading
//! entry positive). A row is reduced against a pivot row `P` with leading
//! entry `p` by `r <- (p/g) r - (x/g) P` where `x` is the entry of `r` in
//! the pivot column and `g = gcd(p, x)`. Rows are inserted sparsest first and
//! each pivot sits at the smallest column of its row.

use std::collections::HashMap;

use crate::matrix::{SparseMatrix, SparseVec};
use crate::modp;
use crate::rational::Rational;
use crate::LinalgError;

/// Scales a rational sparse vector to a primitive integer vector whose first
/// entry is positive. Returns the empty vector for zero input.
pub fn primitive(v: &SparseVec) -> SparseVec {
    if v.is_empty() {
        return Vec::new();
    }
    let mut lcm = Rational::one();
    for (_, x) in v {
        if let Some((_, d)) = x.as_small() {
            if d == 1 {
                continue;
            }
        }
        let d = Rational::from_bigs(x.denom(), 1.into());
        let g = Rational::gcd_int(&lcm, &d);
        lcm = (&lcm * &d).div_exact_int(&g);
    }
    let scaled: Vec<(usize, Rational)> = if lcm.is_one() {
        v.clone()
    } else {
        v.iter().map(|(i, x)| (*i, x * &lcm)).collect()
    };
    let mut content = Rational::zero();
    for (_, x) in &scaled {
        content = Rational::gcd_int(&content, x);
        if content.is_one() {
            break;
        }
    }
    if scaled[0].1.signum() < 0 {
        content = -content;
    }
    if content.is_one() {
        scaled
    } else {
        scaled.into_iter().map(|(i, x)| (i, x.div_exact_int(&content))).collect()
    }
}

/// Integer combination `a*r - b*s` of sorted sparse rows.
fn combine(a: &Rational, r: &SparseVec, b: &Rational, s: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        if j >= s.len() || (i < r.len() && r[i].0 < s[j].0) {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if i >= r.len() || s[j].0 < r[i].0 {
            out.push((s[j].0, -(b * &s[j].1)));
            j += 1;
        } else {
            let x = &(a * &r[i].1) - &(b * &s[j].1);
            if !x.is_zero() {
                out.push((r[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(r: &SparseVec, col: usize) -> Option<&Rational> {
    r.binary_search_by_key(&col, |e| e.0).ok().map(|k| &r[k].1)
}

/// Row echelon form built incrementally.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    lead: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `r` against the current pivots. Returns a primitive row.
    pub fn reduce(&self, r: &SparseVec) -> SparseVec {
        let mut r = primitive(r);
        let mut from = 0usize;
        loop {
            let hit = r
                .iter()
                .skip(from)
                .position(|(c, _)| self.lead.contains_key(c))
                .map(|k| k + from);
            let Some(k) = hit else { break };
            let (c, x) = r[k].clone();
            let p_row = &self.rows[self.lead[&c]];
            let p = &p_row[0].1;
            let g = Rational::gcd_int(p, &x);
            let a = p.div_exact_int(&g);
            let b = x.div_exact_int(&g);
            r = primitive(&combine(&a, &r, &b, p_row));
            // entries before column c are untouched
            from = r.partition_point(|e| e.0 < c);
        }
        r
    }

    /// Inserts a row; returns true when it was independent.
    pub fn insert(&mut self, r: &SparseVec) -> bool {
        let red = self.reduce(r);
        if red.is_empty() {
            return false;
        }
        self.lead.insert(red[0].0, self.rows.len());
        self.rows.push(red);
        true
    }

    pub fn contains(&self, r: &SparseVec) -> bool {
        self.reduce(r).is_empty()
    }

    pub fn lead_columns(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.lead.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// Reduced row echelon form: rows sorted by leading column, each leading
    /// column cleared from every other row.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        for i in (0..rows.len()).rev() {
            let c = rows[i][0].0;
            for j in 0..i {
                if let Some(x) = entry(&rows[j], c).cloned() {
                    let p = rows[i][0].1.clone();
                    let g = Rational::gcd_int(&p, &x);
                    let a = p.div_exact_int(&g);
                    let b = x.div_exact_int(&g);
                    rows[j] = primitive(&combine(&a, &rows[j], &b, &rows[i]));
                }
            }
        }
        rows
    }
}

fn echelon_of_rows(mut rows: Vec<SparseVec>) -> Echelon {
    // sparsest rows first keeps fill-in down; stable sort keeps ties in index order
    rows.sort_by_key(|r| r.len());
    let mut e = Echelon::new();
    for r in rows.iter().filter(|r| !r.is_empty()) {
        e.insert(r);
    }
    e
}

/// Exact rank. A modular pass runs first; when it already reaches
/// `min(rows, cols)` that value is a proof of full rank, otherwise the
/// rational elimination decides.
pub fn rank(m: &SparseMatrix) -> usize {
    let full = m.rows().min(m.cols());
    if full == 0 {
        return 0;
    }
    if let Some(r) = modp::rank_mod_p(m) {
        if r == full {
            return r;
        }
    }
    rank_exact(m)
}

/// Rank by rational elimination only.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let rows = if m.rows() <= m.cols() { m.row_vectors() } else { m.columns().to_vec() };
    echelon_of_rows(rows).rank()
}

/// Basis of `{x : m x = 0}`, one primitive integer vector per free column.
pub fn nullspace(m: &SparseMatrix) -> Vec<SparseVec> {
    let rref = echelon_of_rows(m.row_vectors()).into_rref();
    let leads: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let is_lead: std::collections::HashSet<usize> = leads.iter().copied().collect();
    let mut by_col: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, r) in rref.iter().enumerate() {
        for (c, _) in r.iter().skip(1) {
            by_col.entry(*c).or_default().push(k);
        }
    }
    let mut out = Vec::new();
    for f in (0..m.cols()).filter(|c| !is_lead.contains(c)) {
        let mut v: SparseVec = vec![(f, Rational::one())];
        if let Some(ks) = by_col.get(&f) {
            for &k in ks {
                let r = &rref[k];
                let x = entry(r, f).expect("indexed entry");
                v.push((r[0].0, -(x / &r[0].1)));
            }
        }
        v.sort_by_key(|e| e.0);
        out.push(primitive(&v));
    }
    out
}

/// One solution of `a x = b` with free variables set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(a: &SparseMatrix, b: &SparseVec) -> Result<Option<SparseVec>, LinalgError> {
    if b.iter().any(|(i, _)| *i >= a.rows()) {
        return Err(LinalgError::DimensionMismatch {
            op: "solve",
            left: (a.rows(), a.cols()),
            right: (b.last().map_or(0, |e| e.0 + 1), 1),
        });
    }
    let n = a.cols();
    let mut rows = a.row_vectors();
    for (i, x) in b {
        rows[*i].push((n, x.clone()));
    }
    let rref = echelon_of_rows(rows).into_rref();
    let mut x = Vec::new();
    for r in &rref {
        let (c, p) = &r[0];
        if *c == n {
            return Ok(None);
        }
        if let Some(rhs) = entry(r, n) {
            x.push((*c, rhs / p));
        }
    }
    x.sort_by_key(|e| e.0);
    Ok(Some(x))
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &SparseMatrix) -> Result<Option<SparseMatrix>, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut rows = m.row_vectors();
    for (i, r) in rows.iter_mut().enumerate() {
        r.push((n + i, Rational::one()));
    }
    let rref = echelon_of_rows(rows).into_rref();
    if rref.len() < n || rref.iter().any(|r| r[0].0 >= n) {
        return Ok(None);
    }
    let mut trip = Vec::new();
    for r in &rref {
        let (i, p) = &r[0];
        for (c, x) in r.iter().skip(1) {
            trip.push((*i, c - n, x / p));
        }
    }
    SparseMatrix::from_triplets(n, n, trip).map(Some)
}

/// Linearly independent vectors spanning a subspace of `Q^ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<SparseVec>,
}

impl SubspaceBasis {
    /// Keeps the first maximal independent subfamily of `vectors`.
    pub fn span(ambient: usize, vectors: Vec<SparseVec>) -> Result<SubspaceBasis, LinalgError> {
        if let Some(v) = vectors.iter().find(|v| v.last().is_some_and(|e| e.0 >= ambient)) {
            return Err(LinalgError::AmbientMismatch {
                expected: ambient,
                found: v.last().map_or(0, |e| e.0 + 1),
            });
        }
        let mut e = Echelon::new();
        let kept = vectors.into_iter().filter(|v| e.insert(v)).collect();
        Ok(SubspaceBasis { ambient, vectors: kept })
    }

    pub fn zero(ambient: usize) -> SubspaceBasis {
        SubspaceBasis { ambient, vectors: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.ambient, self.vectors.clone())
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for v in &self.vectors {
            e.insert(v);
        }
        e
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_all(&self, other: &SubspaceBasis) -> bool {
        let e = self.echelon();
        other.vectors.iter().all(|v| e.contains(v))
    }

    pub fn same_span(&self, other: &SubspaceBasis) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains_all(other)
    }
}

/// Intersection of two subspaces of the same ambient space, via the
/// nullspace of `[B1 | -B2]` mapped back through `B1`.
pub fn intersect(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
    if b1.ambient != b2.ambient {
        return Err(LinalgError::AmbientMismatch { expected: b1.ambient, found: b2.ambient });
    }
    let k1 = b1.dim();
    let m1 = b1.matrix();
    let m2 = b2.matrix().scale(&Rational::from_int(-1));
    let joint = SparseMatrix::hstack(&[&m1, &m2])?;
    let mut out = Vec::new();
    for z in nullspace(&joint) {
        let x: SparseVec = z.into_iter().filter(|(i, _)| *i < k1).collect();
        out.push(primitive(&m1.mul_vec(&x)));
    }
    SubspaceBasis::span(b1.ambient, out)
}
