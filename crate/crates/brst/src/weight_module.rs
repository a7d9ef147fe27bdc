//! Irreducible highest-weight modules with their Shapovalov form.
//!
//! The module is built level by level below the highest weight vector.
//! Candidate vectors at the next level are `f_i b` for basis vectors `b`;
//! their Gram matrix follows from `(f_i b, u) = (b, e_i u)` and
//! `e_j f_i b = f_i e_j b + delta_ij <wt b, H_i> b`. A subset of candidates
//! with nonsingular Gram block becomes the basis of the weight space and the
//! remaining candidates are expressed through it. Vectors in the radical of
//! the form never enter, so the result is the irreducible quotient.

use std::collections::BTreeMap;
use std::ops::Range;

use exact_linalg::{sparse_from_entries, Echelon, Rational, SparseMatrix, SparseVec};

use crate::root_system::{Root, RootDatum, Weight};
use crate::BrstError;

#[derive(Clone, Debug)]
pub struct Module {
    pub highest: Vec<i64>,
    /// Weight of every basis vector, simple-coroot coordinates.
    pub weights: Vec<Vec<i64>>,
    /// Basis vectors of each weight form a contiguous range.
    pub blocks: BTreeMap<Vec<i64>, Range<usize>>,
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
    pub gram: SparseMatrix,
}

fn dot_block(gram: &[Vec<Rational>], offset: usize, a: usize, v: &SparseVec) -> Rational {
    v.iter().map(|(k, x)| &gram[a - offset][*k - offset] * x).sum()
}

impl Module {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn h_diag(&self, i: usize) -> SparseMatrix {
        let n = self.dim();
        let cols = (0..n)
            .map(|b| {
                let w = self.weights[b][i];
                if w == 0 {
                    vec![]
                } else {
                    vec![(b, Rational::from_int(w))]
                }
            })
            .collect();
        SparseMatrix::from_columns(n, cols)
    }

    /// Builds `V(lambda)` for a dominant integral `lambda`.
    pub fn build(cartan: &[Vec<i64>], lambda: &[i64]) -> Result<Module, BrstError> {
        let l = cartan.len();
        if lambda.len() != l || lambda.iter().any(|&x| x < 0) {
            return Err(BrstError::Config(format!("highest weight {lambda:?} is not dominant of rank {l}")));
        }
        // alpha_i in simple-coroot coordinates is column i of the Cartan matrix
        let alpha = |i: usize| -> Vec<i64> { (0..l).map(|j| cartan[j][i]).collect() };

        let mut weights: Vec<Vec<i64>> = vec![lambda.to_vec()];
        let mut e_cols: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); l]];
        let mut f_cols: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); l]];
        // Gram blocks keyed by weight: (offset, dense block)
        let mut grams: BTreeMap<Vec<i64>, (usize, Vec<Vec<Rational>>)> = BTreeMap::new();
        grams.insert(lambda.to_vec(), (0, vec![vec![Rational::one()]]));
        let mut level: Vec<usize> = vec![0];

        while !level.is_empty() {
            let mut cands: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
            for &b in &level {
                for i in 0..l {
                    let w: Vec<i64> = weights[b].iter().zip(alpha(i)).map(|(x, a)| x - a).collect();
                    cands.entry(w).or_default().push((b, i));
                }
            }
            let mut next = Vec::new();
            // reverse order so that weights closer to the top come first
            for (mu, cs) in cands.into_iter().rev() {
                // e_j (f_i b) as vectors in the current level
                let mut e_img: Vec<Vec<SparseVec>> = Vec::with_capacity(cs.len());
                for &(b, i) in &cs {
                    let mut per_j = Vec::with_capacity(l);
                    for j in 0..l {
                        let mut acc: Vec<(usize, Rational)> = Vec::new();
                        for (x, c) in &e_cols[b][j] {
                            for (y, d) in &f_cols[*x][i] {
                                acc.push((*y, c * d));
                            }
                        }
                        if i == j && weights[b][i] != 0 {
                            acc.push((b, Rational::from_int(weights[b][i])));
                        }
                        per_j.push(sparse_from_entries(acc));
                    }
                    e_img.push(per_j);
                }
                // Gram between candidates: (f_i b, c') = (b, e_i c')
                let n = cs.len();
                let mut g = vec![vec![Rational::zero(); n]; n];
                for (p, &(b, i)) in cs.iter().enumerate() {
                    let (off, blk) = &grams[&weights[b]];
                    for q in 0..n {
                        g[p][q] = dot_block(blk, *off, b, &e_img[q][i]);
                    }
                }
                let mut ech = Echelon::new();
                let mut chosen: Vec<usize> = Vec::new();
                for (p, row) in g.iter().enumerate() {
                    let v: SparseVec =
                        row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect();
                    if ech.insert(&v) {
                        chosen.push(p);
                    }
                }
                if chosen.is_empty() {
                    // weight space vanishes in the quotient
                    for &(b, i) in &cs {
                        f_cols[b][i] = Vec::new();
                    }
                    continue;
                }
                let offset = weights.len();
                let k = chosen.len();
                let g_ss: Vec<Vec<Rational>> =
                    chosen.iter().map(|&p| chosen.iter().map(|&q| g[p][q].clone()).collect()).collect();
                let g_ss_m = SparseMatrix::from_dense(&g_ss);
                for (t, &p) in chosen.iter().enumerate() {
                    weights.push(mu.clone());
                    e_cols.push(e_img[p].clone());
                    f_cols.push(vec![Vec::new(); l]);
                    next.push(offset + t);
                }
                for (p, &(b, i)) in cs.iter().enumerate() {
                    let expr: SparseVec = if let Some(t) = chosen.iter().position(|&c| c == p) {
                        vec![(offset + t, Rational::one())]
                    } else {
                        let rhs: SparseVec = chosen
                            .iter()
                            .enumerate()
                            .filter(|(_, &s)| !g[s][p].is_zero())
                            .map(|(t, &s)| (t, g[s][p].clone()))
                            .collect();
                        let x = exact_linalg::solve(&g_ss_m, &rhs)?
                            .ok_or_else(|| BrstError::Internal("Gram system inconsistent".into()))?;
                        // the remainder must lie in the radical
                        for r in 0..n {
                            let lhs: Rational = x.iter().map(|(t, c)| c * &g[r][chosen[*t]]).sum();
                            if lhs != g[r][p] {
                                return Err(BrstError::Internal("candidate outside the span of the chosen basis".into()));
                            }
                        }
                        x.into_iter().map(|(t, c)| (offset + t, c)).collect()
                    };
                    f_cols[b][i] = expr;
                }
                grams.insert(mu.clone(), (offset, g_ss));
                debug_assert_eq!(weights.len(), offset + k);
            }
            level = next;
        }

        let dim = weights.len();
        let mk = |cols: &Vec<Vec<SparseVec>>, i: usize| -> SparseMatrix {
            SparseMatrix::from_columns(dim, (0..dim).map(|b| cols[b][i].clone()).collect())
        };
        let e = (0..l).map(|i| mk(&e_cols, i)).collect();
        let f = (0..l).map(|i| mk(&f_cols, i)).collect();
        let mut blocks: BTreeMap<Vec<i64>, Range<usize>> = BTreeMap::new();
        let mut trip = Vec::new();
        for (mu, (off, blk)) in &grams {
            blocks.insert(mu.clone(), *off..*off + blk.len());
            for (a, row) in blk.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        trip.push((off + a, off + b, x.clone()));
                    }
                }
            }
        }
        let gram = SparseMatrix::from_triplets(dim, dim, trip)?;
        Ok(Module { highest: lambda.to_vec(), weights, blocks, e, f, gram })
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap()
}

/// Length of the `alpha_i` string below the positive root `eta`.
pub fn string_below(datum: &RootDatum, eta: Root, i: usize) -> i64 {
    let mut c = datum.coords(eta);
    let mut p = 0;
    loop {
        c[i] -= 1;
        if datum.root_of(&c).is_some() {
            p += 1;
        } else {
            return p;
        }
    }
}

/// Chevalley root vectors `e_gamma` (indexed by slot) in a module given by
/// its simple generators. `e_{alpha_i} = e_i`, `e_{-alpha_i} = f_i` and for
/// higher roots `e_xi = [e_i, e_eta]/(p+1)`, `e_{-xi} = -[f_i, e_{-eta}]/(p+1)`
/// with `i` the smallest index such that `eta = xi - alpha_i` is a root.
pub fn chevalley_vectors(datum: &RootDatum, e: &[SparseMatrix], f: &[SparseMatrix]) -> Vec<SparseMatrix> {
    let m = datum.num_positive();
    let mut out: Vec<Option<SparseMatrix>> = vec![None; 2 * m];
    for k in 0..m {
        let xi = Root::pos(k);
        let c = datum.coords(xi);
        if let Some(i) = c.iter().position(|&x| x == 1).filter(|_| c.iter().sum::<i64>() == 1) {
            out[datum.slot(xi)] = Some(e[i].clone());
            out[datum.slot(xi.negate())] = Some(f[i].clone());
            continue;
        }
        let (i, eta) = (0..datum.rank)
            .find_map(|i| {
                let mut d = c.clone();
                d[i] -= 1;
                datum.root_of(&d).filter(|r| r.is_positive()).map(|r| (i, r))
            })
            .expect("non-simple positive root has a predecessor");
        let p = string_below(datum, eta, i);
        let s = Rational::new(1, p + 1);
        let ep = commutator(&e[i], out[datum.slot(eta)].as_ref().unwrap()).scale(&s);
        let en = commutator(&f[i], out[datum.slot(eta.negate())].as_ref().unwrap()).scale(&-s);
        out[datum.slot(xi)] = Some(ep);
        out[datum.slot(xi.negate())] = Some(en);
    }
    out.into_iter().map(|x| x.unwrap()).collect()
}

/// `V(lambda)` together with the shifted constraint operators.
#[derive(Clone, Debug)]
pub struct ModuleData {
    pub module: Module,
    pub chi: Weight,
    /// `L_alpha`: action of `tau_alpha`, indexed by slot.
    pub root_ops: Vec<SparseMatrix>,
    /// `L_i = H_i - <chi, H_i>`.
    pub cartan_ops: Vec<SparseMatrix>,
    /// Inverse Gram matrix of each weight space.
    pub gram_inv: BTreeMap<Vec<i64>, SparseMatrix>,
}

impl ModuleData {
    pub fn new(datum: &RootDatum, lambda: &[i64], chi: &Weight) -> Result<ModuleData, BrstError> {
        let module = Module::build(&datum.cartan, lambda)?;
        let ev = chevalley_vectors(datum, &module.e, &module.f);
        let root_ops = datum
            .all_roots()
            .map(|r| if r.is_positive() { ev[datum.slot(r)].clone() } else { ev[datum.slot(r)].scale(&Rational::from_int(-1)) })
            .collect();
        let n = module.dim();
        let cartan_ops = (0..datum.rank)
            .map(|i| module.h_diag(i).sub(&SparseMatrix::identity(n).scale(&chi.coords[i])).unwrap())
            .collect();
        let mut gram_inv = BTreeMap::new();
        for (mu, r) in &module.blocks {
            let idx: Vec<usize> = r.clone().collect();
            let blk: Vec<Vec<Rational>> =
                idx.iter().map(|&a| idx.iter().map(|&b| module.gram.get(a, b)).collect()).collect();
            let inv = exact_linalg::inverse(&SparseMatrix::from_dense(&blk))?
                .ok_or_else(|| BrstError::Internal(format!("singular Gram block at weight {mu:?}")))?;
            gram_inv.insert(mu.clone(), inv);
        }
        Ok(ModuleData { module, chi: chi.clone(), root_ops, cartan_ops, gram_inv })
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn root_op(&self, datum: &RootDatum, r: Root) -> &SparseMatrix {
        &self.root_ops[datum.slot(r)]
    }

    /// `L_H` for `H = sum_i h^i H_i`.
    pub fn cartan_combination(&self, h: &[Rational]) -> SparseMatrix {
        let n = self.dim();
        let mut acc = SparseMatrix::zeros(n, n);
        for (i, c) in h.iter().enumerate() {
            acc = acc.axpy(c, &self.cartan_ops[i]).unwrap();
        }
        acc
    }

    /// Basis of the Gupta-Bleuler kernel: vectors killed by every `L_alpha`,
    /// `alpha > 0`, and every `L_i`.
    pub fn gb_kernel(&self, datum: &RootDatum) -> Vec<SparseVec> {
        let mut blocks: Vec<&SparseMatrix> = datum.positive_roots().map(|r| self.root_op(datum, r)).collect();
        blocks.extend(self.cartan_ops.iter());
        let stacked = SparseMatrix::vstack(&blocks).unwrap();
        exact_linalg::nullspace(&stacked)
    }
}
