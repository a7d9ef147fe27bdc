//! Relative, bigraded and absolute anomalous cohomology by exact
//! rank-nullity, harmonic spaces and their cross-checks.

use std::collections::BTreeMap;

use exact_linalg::{nullspace, primitive, rank, solve, sparse_axpy, Rational, SparseMatrix, SparseVec, SubspaceBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::check::IdentityRecord;
use crate::op::Key;
use crate::operators::Instance;
use crate::space::{materialize, Block};
use crate::suite::Context;
use crate::BrstError;

/// One row of a cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub flavor: String,
    pub degree: String,
    pub bidegree: Option<(u32, u32)>,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

/// Something the computation found that contradicts an expected statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub id: String,
    pub detail: String,
}

fn deg_string(d: &Rational) -> String {
    d.to_string()
}

/// Columns `m v` for every `v` of a basis.
pub fn apply_all(m: &SparseMatrix, basis: &[SparseVec]) -> SparseMatrix {
    SparseMatrix::from_columns(m.rows(), basis.iter().map(|v| m.mul_vec(v)).collect())
}

/// `sum_k c_k basis_k`.
pub fn combine(basis: &[SparseVec], coeffs: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for (k, c) in coeffs {
        acc = sparse_axpy(&acc, c, &basis[*k]);
    }
    acc
}

fn embed(v: &SparseVec, idx: &[usize]) -> SparseVec {
    v.iter().map(|(k, x)| (idx[*k], x.clone())).collect()
}

/// Kernel of `j` on each graded piece (all of the piece when `j` is `None`).
pub fn carve<K: Ord + Clone>(
    classes: &BTreeMap<K, Vec<usize>>,
    j: Option<&SparseMatrix>,
) -> BTreeMap<K, Vec<SparseVec>> {
    classes
        .iter()
        .map(|(k, idx)| {
            let basis = match j {
                None => idx.iter().map(|&i| vec![(i, Rational::one())]).collect(),
                Some(j) => nullspace(&j.select_columns(idx)).iter().map(|v| embed(v, idx)).collect(),
            };
            (k.clone(), basis)
        })
        .collect()
}

/// Output of [`graded_cohomology`]: the table plus cocycle bases.
pub struct Graded<K> {
    pub rows: Vec<(K, CohomologyRow)>,
    pub cocycles: BTreeMap<K, Vec<SparseVec>>,
}

/// Rank-nullity for `d` on graded subspaces, `d` raising the grade via `next`.
/// Fails when `d` leaves the carved subspaces.
pub fn graded_cohomology<K: Ord + Clone>(
    flavor: &str,
    n: usize,
    d: &SparseMatrix,
    spaces: &BTreeMap<K, Vec<SparseVec>>,
    next: impl Fn(&K) -> Option<K>,
    label: impl Fn(&K) -> (String, Option<(u32, u32)>),
) -> Result<Graded<K>, String> {
    let mut ranks: BTreeMap<K, usize> = BTreeMap::new();
    let mut cocycles = BTreeMap::new();
    for (k, basis) in spaces {
        let img = apply_all(d, basis);
        let target = next(k).and_then(|t| spaces.get(&t));
        let tgt = SubspaceBasis::span(n, target.cloned().unwrap_or_default()).map_err(|e| e.to_string())?;
        for (c, col) in img.columns().iter().enumerate() {
            if !col.is_empty() && !tgt.contains(col) {
                let (deg, _) = label(k);
                return Err(format!("{flavor}: the differential leaves the subspace at degree {deg}, basis vector {c}"));
            }
        }
        let r = rank(&img);
        if let Some(t) = next(k) {
            ranks.insert(t, r);
        }
        let z: Vec<SparseVec> = nullspace(&img).iter().map(|c| primitive(&combine(basis, c))).collect();
        cocycles.insert(k.clone(), z);
    }
    let rows = spaces
        .iter()
        .map(|(k, basis)| {
            let z = cocycles[k].len();
            let b = ranks.get(k).copied().unwrap_or(0);
            let (degree, bidegree) = label(k);
            let row = CohomologyRow {
                flavor: flavor.into(),
                degree,
                bidegree,
                cochains: basis.len(),
                cocycles: z,
                coboundaries: b,
                cohomology: z - b,
            };
            (k.clone(), row)
        })
        .collect();
    Ok(Graded { rows, cocycles })
}

/// Per-degree relative results.
pub struct RelativeDegree {
    pub anomalous: Vec<SparseVec>,
    pub cocycles: Vec<SparseVec>,
    pub harmonic: Vec<SparseVec>,
    /// Harmonic dimension per bidegree `(p, q)`.
    pub harmonic_bidegrees: BTreeMap<(u32, u32), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicRow {
    pub degree: i64,
    pub bidegree: (u32, u32),
    pub dim: usize,
}

pub struct Relative {
    pub degrees: BTreeMap<i64, RelativeDegree>,
    pub rows: Vec<CohomologyRow>,
    pub harmonic_rows: Vec<HarmonicRow>,
    pub checks: Vec<IdentityRecord>,
    pub findings: Vec<Finding>,
    pub root_component_dim: usize,
    pub gupta_bleuler_dim: usize,
    pub higher_bidegree_dim_zero: usize,
    pub drel: SparseMatrix,
    pub jp: SparseMatrix,
}

impl Relative {
    pub fn harmonic_total(&self) -> usize {
        self.degrees.values().map(|d| d.harmonic.len()).sum()
    }

    pub fn anomalous_basis(&self) -> Vec<SparseVec> {
        self.degrees.values().flat_map(|d| d.anomalous.iter().cloned()).collect()
    }

    pub fn row(&self, r: i64) -> Option<&CohomologyRow> {
        self.rows.iter().find(|x| x.degree == r.to_string())
    }
}

fn bidegree_of(x: &Instance, blk: &Block, i: usize) -> (u32, u32) {
    x.lay.bidegree(blk.states[i].0)
}

fn gh_rel_of(x: &Instance, blk: &Block, i: usize) -> i64 {
    let (p, q) = bidegree_of(x, blk, i);
    p as i64 - q as i64
}

/// Kaehler-orthogonal projection of `v` onto `span(basis)`.
pub fn project(gram: &SparseMatrix, basis: &[SparseVec], v: &SparseVec) -> Result<SparseVec, BrstError> {
    if basis.is_empty() {
        return Ok(SparseVec::new());
    }
    let t = SparseMatrix::from_columns(gram.rows(), basis.to_vec());
    let kt = gram.mul(&t)?;
    let gt = t.transpose().mul(&kt)?;
    let rhs = kt.transpose().mul_vec(v);
    let c = solve(&gt, &rhs)?.ok_or_else(|| BrstError::Internal("singular Gram matrix on the harmonic space".into()))?;
    Ok(combine(basis, &c))
}

fn vec_record(id: &str, domain: &str, cases: u64, failure: Option<String>) -> IdentityRecord {
    IdentityRecord::exact(id, domain, cases, failure)
}

/// The relative complex: anomalous subspace, cohomology, harmonic spaces,
/// contracting homotopy and the zero-degree root component.
pub fn relative(ctx: &Context, seed: u64) -> Result<Relative, BrstError> {
    let x = ctx.x;
    let blk = &ctx.rel;
    let n = blk.len();
    let drel = ctx.mat(&x.d_rel())?;
    let drel_d = ctx.dag(&drel);
    let jp = ctx.mat(&x.j_plus())?;
    let lap = drel.mul(&drel_d)?.add(&drel_d.mul(&drel)?)?;

    let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        classes.entry(gh_rel_of(x, blk, i)).or_default().push(i);
    }
    let spaces = carve(&classes, Some(&jp));
    let g = graded_cohomology("relative", n, &drel, &spaces, |r| Some(r + 1), |r| (r.to_string(), None))
        .map_err(BrstError::Internal)?;

    let mut checks = Vec::new();
    let mut findings = Vec::new();
    let mut degrees = BTreeMap::new();
    let mut harmonic_rows = Vec::new();
    let mut fail_harm = None;
    let mut fail_z0 = None;
    let mut fail_bideg = None;
    let mut fail_lap = None;
    for (r, basis) in &spaces {
        let stacked = SparseMatrix::vstack(&[&apply_all(&drel, basis), &apply_all(&drel_d, basis)])?;
        let harmonic: Vec<SparseVec> = nullspace(&stacked).iter().map(|c| primitive(&combine(basis, c))).collect();
        let cocycles = g.cocycles[r].clone();
        let row = &g.rows.iter().find(|(k, _)| k == r).unwrap().1;
        if harmonic.len() != row.cohomology && fail_harm.is_none() {
            fail_harm = Some(format!("degree {r}: harmonic {} vs cohomology {}", harmonic.len(), row.cohomology));
        }
        if *r == 0 {
            let zs = SubspaceBasis::span(n, cocycles.clone())?;
            let hs = SubspaceBasis::span(n, harmonic.clone())?;
            if !zs.same_span(&hs) {
                fail_z0 = Some(format!("Z^0 has dim {}, harmonic space dim {}", zs.dim(), hs.dim()));
            }
        }
        // ker of the Laplacian inside A^r agrees with the harmonic space
        let lap_kernel = nullspace(&apply_all(&lap, basis)).len();
        if lap_kernel != harmonic.len() && fail_lap.is_none() {
            fail_lap = Some(format!("degree {r}: ker Laplacian {lap_kernel} vs harmonic {}", harmonic.len()));
        }
        // bidegree refinement: components of harmonic vectors are harmonic
        let hs = SubspaceBasis::span(n, harmonic.clone())?;
        let mut comps: BTreeMap<(u32, u32), Vec<SparseVec>> = BTreeMap::new();
        for h in &harmonic {
            let mut parts: BTreeMap<(u32, u32), SparseVec> = BTreeMap::new();
            for (i, v) in h {
                parts.entry(bidegree_of(x, blk, *i)).or_default().push((*i, v.clone()));
            }
            for (bd, part) in parts {
                if !hs.contains(&part) && fail_bideg.is_none() {
                    fail_bideg = Some(format!("degree {r}: bidegree {bd:?} component of a harmonic vector is not harmonic"));
                }
                comps.entry(bd).or_default().push(part);
            }
        }
        let mut harmonic_bidegrees = BTreeMap::new();
        let mut sum = 0;
        for (bd, vs) in comps {
            let d = SubspaceBasis::span(n, vs)?.dim();
            sum += d;
            harmonic_bidegrees.insert(bd, d);
            harmonic_rows.push(HarmonicRow { degree: *r, bidegree: bd, dim: d });
        }
        if sum != harmonic.len() && fail_bideg.is_none() {
            fail_bideg = Some(format!("degree {r}: bidegree pieces add up to {sum}, harmonic dim {}", harmonic.len()));
        }
        degrees.insert(*r, RelativeDegree { anomalous: basis.clone(), cocycles, harmonic, harmonic_bidegrees });
    }
    let rows: Vec<CohomologyRow> = g.rows.into_iter().map(|(_, r)| r).collect();
    let nd = degrees.len() as u64;
    checks.push(vec_record("harmonic_representatives", "A_rel", nd, fail_harm));
    checks.push(vec_record("closed_equals_harmonic_in_degree_zero", "A_rel^0", 1, fail_z0));
    checks.push(vec_record("harmonic_equals_laplacian_kernel", "A_rel", nd, fail_lap));
    checks.push(vec_record("harmonic_bidegree_decomposition", "A_rel", nd, fail_bideg));
    let vanishing = rows.iter().filter(|r| r.degree.parse::<i64>().unwrap_or(0) > 0 && r.cohomology > 0).map(|r| r.degree.clone()).next();
    checks.push(vec_record(
        "vanishing_theorem",
        "A_rel",
        nd,
        vanishing.map(|d| format!("nonzero relative cohomology in degree {d}")),
    ));

    // J+ commutes with D_rel, so D_rel preserves the anomalous subspace (checked in graded_cohomology)
    checks.push(homotopy_checks(ctx, &drel, &degrees, seed)?);

    // zero-degree root component against the Gupta-Bleuler kernel
    let gb: Vec<SparseVec> = x
        .md
        .gb_kernel(&x.datum)
        .into_iter()
        .filter_map(|v| {
            let mapped: Option<SparseVec> = v.iter().map(|(i, c)| blk.index.get(&(0u64, *i as u32)).map(|j| (*j, c.clone()))).collect();
            mapped.map(|mut m| {
                m.sort_by_key(|e| e.0);
                m
            })
        })
        .collect();
    let gb_span = SubspaceBasis::span(n, gb)?;
    let (root_dim, higher) = match degrees.get(&0) {
        Some(d) => {
            let root: Vec<SparseVec> = d
                .harmonic
                .iter()
                .map(|h| h.iter().filter(|(i, _)| bidegree_of(x, blk, *i) == (0, 0)).cloned().collect::<SparseVec>())
                .filter(|v| !v.is_empty())
                .collect();
            let rs = SubspaceBasis::span(n, root)?;
            let failure = (!rs.same_span(&gb_span))
                .then(|| format!("root component dim {} vs Gupta-Bleuler kernel dim {}", rs.dim(), gb_span.dim()));
            checks.push(vec_record("zero_degree_root_component", "A_rel^0", 1, failure));
            (rs.dim(), d.harmonic.len() - rs.dim())
        }
        None => (0, 0),
    };
    if gb_span.dim() != root_dim {
        findings.push(Finding {
            id: "zero_degree_root_component".into(),
            detail: format!("root component {root_dim}, Gupta-Bleuler kernel {}", gb_span.dim()),
        });
    }
    Ok(Relative {
        degrees,
        rows,
        harmonic_rows,
        checks,
        findings,
        root_component_dim: root_dim,
        gupta_bleuler_dim: gb_span.dim(),
        higher_bidegree_dim_zero: higher,
        drel,
        jp,
    })
}

/// Harmonic projection plus `D_rel`-primitive for planted and random cocycles.
fn homotopy_checks(
    ctx: &Context,
    drel: &SparseMatrix,
    degrees: &BTreeMap<i64, RelativeDegree>,
    seed: u64,
) -> Result<IdentityRecord, BrstError> {
    let gram = &ctx.krel.gram;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x686f6d6f);
    let mut small = |len: usize| -> SparseVec {
        (0..len).map(|k| (k, Rational::from_int(rng.gen_range(-3..=3)))).filter(|e| !e.1.is_zero()).collect()
    };
    let mut cases = 0;
    let mut failure = None;
    for (r, d) in degrees {
        let prev = degrees.get(&(r - 1)).map(|p| p.anomalous.as_slice()).unwrap_or(&[]);
        let dprev = apply_all(drel, prev);
        // planted: harmonic part plus an exact part
        let h = combine(&d.harmonic, &small(d.harmonic.len()));
        let phi = small(prev.len());
        let exact = dprev.mul_vec(&phi);
        let psi = sparse_axpy(&h, &Rational::one(), &exact);
        // random cocycle
        let z = combine(&d.cocycles, &small(d.cocycles.len()));
        for (what, v, planted) in [("planted", psi, Some(h)), ("cocycle", z, None)] {
            cases += 1;
            let p0 = project(gram, &d.harmonic, &v)?;
            if let Some(h) = planted {
                if p0 != h && failure.is_none() {
                    failure = Some(format!("degree {r}: harmonic part of the planted cochain not recovered"));
                }
            }
            let rest = sparse_axpy(&v, &Rational::from_int(-1), &p0);
            match solve(&dprev, &rest)? {
                Some(y) => {
                    let phi = combine(prev, &y);
                    if drel.mul_vec(&phi) != rest && failure.is_none() {
                        failure = Some(format!("degree {r}: {what} primitive does not reproduce the exact part"));
                    }
                }
                None => {
                    if failure.is_none() {
                        failure = Some(format!("degree {r}: {what} cocycle minus its harmonic part is not exact"));
                    }
                }
            }
        }
    }
    Ok(IdentityRecord::exact("contracting_homotopy", "A_rel", cases, failure))
}

/// Bigraded cohomologies of `Dbar` and `Dcal` on `ker J+` in each bidegree,
/// plus the check that `Dcal^dag` maps `Dbar`-cocycles into `ker J+`.
pub fn bigraded(ctx: &Context, jp: &SparseMatrix) -> Result<(Vec<CohomologyRow>, IdentityRecord), BrstError> {
    let x = ctx.x;
    let blk = &ctx.rel;
    let n = blk.len();
    let mut classes: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        classes.entry(bidegree_of(x, blk, i)).or_default().push(i);
    }
    let spaces = carve(&classes, Some(jp));
    let dbar = ctx.mat(&x.d_bar())?;
    let dcal = ctx.mat(&x.d_cal())?;
    let lab = |k: &(u32, u32)| ((k.0 as i64 - k.1 as i64).to_string(), Some(*k));
    let gb = graded_cohomology("bigraded_dbar", n, &dbar, &spaces, |k| Some((k.0 + 1, k.1)), lab).map_err(BrstError::Internal)?;
    let gc = graded_cohomology("bigraded_dcal", n, &dcal, &spaces, |k| k.1.checked_sub(1).map(|q| (k.0, q)), lab)
        .map_err(BrstError::Internal)?;
    let dcal_d = ctx.dag(&dcal);
    let mut failure = None;
    let mut cases = 0;
    for ((p, q), z) in &gb.cocycles {
        for v in z {
            cases += 1;
            let w = dcal_d.mul_vec(v);
            let ok_bideg = w.iter().all(|(i, _)| bidegree_of(x, blk, *i) == (*p, q + 1));
            if (!ok_bideg || !jp.mul_vec(&w).is_empty()) && failure.is_none() {
                failure = Some(format!("bidegree ({p},{q}): image of a Dbar-cocycle is not anomalous"));
            }
        }
    }
    let rec = IdentityRecord::exact("anomalous_cocycle_images", "A_rel", cases, failure);
    let mut rows: Vec<CohomologyRow> = gb.rows.into_iter().map(|r| r.1).collect();
    rows.extend(gc.rows.into_iter().map(|r| r.1));
    Ok((rows, rec))
}

pub struct Absolute {
    pub rows: Vec<CohomologyRow>,
    pub expected: BTreeMap<Rational, usize>,
    pub checks: Vec<IdentityRecord>,
    pub findings: Vec<Finding>,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The h-invariant absolute anomalous complex computed directly, compared
/// with the reconstruction from the relative harmonic dimension.
pub fn absolute(ctx: &Context, rel: &Relative, max_dim: usize) -> Result<Absolute, BrstError> {
    let x = ctx.x;
    let l = x.lay.l;
    let mut states: Vec<Key> = Vec::new();
    for hs in 0..1u64 << l {
        for k in &ctx.rel.states {
            states.push((k.0 | hs, k.1));
        }
    }
    if states.len() > max_dim {
        return Err(BrstError::DimensionLimit { slice: "h-invariant absolute space".into(), dim: states.len(), limit: max_dim });
    }
    let blk = Block::new(ctx.rel.w.clone(), states);
    let n = blk.len();
    let d = materialize(&x.big_d(), &blk, &blk)?;
    let jp = materialize(&x.j_plus(), &blk, &blk)?;
    let mut classes: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (i, k) in blk.states.iter().enumerate() {
        classes.entry(Rational::new(x.lay.gh_tot2(k.0), 2)).or_default().push(i);
    }
    let spaces = carve(&classes, Some(&jp));
    let one = Rational::one();
    let g = graded_cohomology("absolute", n, &d, &spaces, |r| Some(r + &one), |r| (deg_string(r), None))
        .map_err(BrstError::Internal)?;

    let mut checks = Vec::new();
    let mut findings = Vec::new();
    // the Cartan-ghost-free part of the absolute anomalous space is the relative one
    let mut fail = None;
    for deg in spaces.keys() {
        let r = deg + &Rational::new(l as i64, 2);
        let want = r.to_i64().and_then(|r| rel.degrees.get(&r)).map_or(0, |d| d.anomalous.len());
        let idx: Vec<usize> = classes[deg].iter().copied().filter(|i| x.lay.split(blk.states[*i].0).0 == 0).collect();
        let got = nullspace(&jp.select_columns(&idx)).len();
        if got != want && fail.is_none() {
            fail = Some(format!("degree {deg}: Cartan-free anomalous dim {got} vs relative {want}"));
        }
    }
    checks.push(IdentityRecord::exact("absolute_contains_relative", "A", spaces.len() as u64, fail));

    let t = rel.harmonic_total();
    let mut expected = BTreeMap::new();
    for s in 0..=l {
        expected.insert(&Rational::from_int(s as i64) - &Rational::new(l as i64, 2), binomial(l, s) * t);
    }
    let mut fail = None;
    let mut total = 0;
    for (deg, row) in &g.rows {
        total += row.cohomology;
        let want = expected.get(deg).copied().unwrap_or(0);
        if row.cohomology != want && fail.is_none() {
            fail = Some(format!("degree {deg}: direct {} vs reconstructed {want}", row.cohomology));
        }
    }
    if total != (1usize << l) * t && fail.is_none() {
        fail = Some(format!("total {total} vs 2^l * {t}"));
    }
    if let Some(f) = &fail {
        findings.push(Finding { id: "absolute_reconstruction".into(), detail: f.clone() });
    }
    checks.push(IdentityRecord::exact("absolute_reconstruction", "A", g.rows.len() as u64, fail));
    Ok(Absolute { rows: g.rows.into_iter().map(|r| r.1).collect(), expected, checks, findings })
}
