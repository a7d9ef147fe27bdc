//! Structure constants `N_{ab}` in `[tau_a, tau_b] = N_{ab} tau_{a+b}`.
//!
//! The constants are read off from the adjoint representation. Root vectors
//! `e_gamma` there form a Chevalley basis with `[e_a, e_{-a}] = H_a`, and the
//! root generators used everywhere else are `tau_a = e_a`,
//! `tau_{-a} = -e_{-a}` for `a > 0`, so that `[tau_a, tau_{-a}] = -H_a` for
//! every root and `N_{-a,-b} = N_{ab}`.

use exact_linalg::{Rational, SparseMatrix};

use crate::root_system::{Root, RootDatum};
use crate::weight_module::{chevalley_vectors, commutator, Module};
use crate::BrstError;

/// Ratio `c` with `a = c b`, or `None` if `a` is not a multiple of `b`.
fn ratio(a: &SparseMatrix, b: &SparseMatrix) -> Option<Rational> {
    let (i, j, x) = b.triplets().next()?;
    let c = &a.get(i, j) / x;
    if *a == b.scale(&c) {
        Some(c)
    } else {
        None
    }
}

pub(crate) fn structure_constants(datum: &RootDatum) -> Result<Vec<i64>, BrstError> {
    let adj = Module::build(&datum.cartan, &datum.highest_root_weight())?;
    if adj.dim() != datum.dim() {
        return Err(BrstError::Internal(format!("adjoint module has dimension {} not {}", adj.dim(), datum.dim())));
    }
    let ev = chevalley_vectors(datum, &adj.e, &adj.f);
    let w = 2 * datum.num_positive();
    let h = |r: Root| -> SparseMatrix {
        let mut acc = SparseMatrix::zeros(adj.dim(), adj.dim());
        for (i, c) in datum.coroot(r).iter().enumerate() {
            acc = acc.axpy(c, &adj.h_diag(i)).unwrap();
        }
        acc
    };
    for a in datum.positive_roots() {
        let br = commutator(&ev[datum.slot(a)], &ev[datum.slot(a.negate())]);
        if br != h(a) {
            return Err(BrstError::Internal(format!("[e_a, e_-a] != H_a for root {:?}", datum.coords(a))));
        }
    }
    let sign = |r: Root| r.sign();
    let mut table = vec![0i64; w * w];
    for a in datum.all_roots() {
        for b in datum.all_roots() {
            let br = commutator(&ev[datum.slot(a)], &ev[datum.slot(b)]);
            let n = match datum.sum(a, b) {
                Some(s) => {
                    let c = ratio(&br, &ev[datum.slot(s)])
                        .ok_or_else(|| BrstError::Internal("bracket of root vectors is not a root vector".into()))?;
                    let ne = c.to_i64().ok_or_else(|| BrstError::Internal("non-integral structure constant".into()))?;
                    sign(a) * sign(b) * sign(s) * ne
                }
                None => 0,
            };
            table[datum.slot(a) * w + datum.slot(b)] = n;
        }
    }
    Ok(table)
}

/// Outcome of one structural check on the root data.
#[derive(Clone, Debug)]
pub struct RootCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

/// Abstract bracket on the basis `{tau_a} u {H_i}` encoded as vectors of
/// length `2m + l`.
fn bracket_basis(datum: &RootDatum, x: usize, y: usize) -> Vec<Rational> {
    let m2 = 2 * datum.num_positive();
    let l = datum.rank;
    let mut out = vec![Rational::zero(); m2 + l];
    let root = |s: usize| if s < m2 / 2 { Root::pos(s) } else { Root::neg(s - m2 / 2) };
    match (x < m2, y < m2) {
        (true, true) => {
            let (a, b) = (root(x), root(y));
            if a == b.negate() {
                // [tau_a, tau_-a] = -H_a
                for (i, c) in datum.coroot(a).iter().enumerate() {
                    out[m2 + i] = -c;
                }
            } else if let Some(s) = datum.sum(a, b) {
                out[datum.slot(s)] = Rational::from_int(datum.n(a, b));
            }
        }
        (false, true) => {
            let b = root(y);
            out[y] = Rational::from_int(datum.value(b, x - m2));
        }
        (true, false) => {
            let a = root(x);
            out[x] = Rational::from_int(-datum.value(a, y - m2));
        }
        (false, false) => {}
    }
    out
}

fn bracket_vec(datum: &RootDatum, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let n = u.len();
    let mut out = vec![Rational::zero(); n];
    for (x, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        for (y, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
            let c = a * b;
            for (k, z) in bracket_basis(datum, x, y).iter().enumerate() {
                if !z.is_zero() {
                    out[k] += &c * z;
                }
            }
        }
    }
    out
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}

/// Structural checks of the constant table.
pub fn root_checks(datum: &RootDatum) -> Vec<RootCheck> {
    let mut out = Vec::new();
    let roots: Vec<Root> = datum.all_roots().collect();

    let mut fail = None;
    let mut cases = 0;
    for &a in &roots {
        for &b in &roots {
            cases += 1;
            if datum.n(a, b) != -datum.n(b, a) && fail.is_none() {
                fail = Some(format!("N antisymmetry fails at {:?},{:?}", datum.coords(a), datum.coords(b)));
            }
            if datum.n(a.negate(), b.negate()) != datum.n(a, b) && fail.is_none() {
                fail = Some(format!("N_-a,-b != N_ab at {:?},{:?}", datum.coords(a), datum.coords(b)));
            }
        }
    }
    out.push(RootCheck { name: "structure_constant_symmetries", cases, failure: fail });

    let mut fail = None;
    let mut cases = 0;
    for &a in &roots {
        for &b in &roots {
            if let Some(_s) = datum.sum(a, b) {
                cases += 1;
                // |N_ab| = p + 1 with p the length of the a-string below b
                let mut c = datum.coords(b);
                let ca = datum.coords(a);
                let mut p = 0;
                loop {
                    for (x, y) in c.iter_mut().zip(&ca) {
                        *x -= y;
                    }
                    if datum.root_of(&c).is_some() {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if datum.n(a, b).abs() != p + 1 && fail.is_none() {
                    fail = Some(format!("|N| != p+1 at {:?},{:?}", datum.coords(a), datum.coords(b)));
                }
            }
        }
    }
    out.push(RootCheck { name: "structure_constant_magnitudes", cases, failure: fail });

    // Jacobi identity on the abstract basis
    let n = datum.dim();
    let mut fail = None;
    let mut cases = 0;
    'outer: for x in 0..n {
        for y in x + 1..n {
            let bxy = bracket_vec(datum, &unit(n, x), &unit(n, y));
            for z in y + 1..n {
                cases += 1;
                let byz = bracket_vec(datum, &unit(n, y), &unit(n, z));
                let bzx = bracket_vec(datum, &unit(n, z), &unit(n, x));
                let t1 = bracket_vec(datum, &unit(n, x), &byz);
                let t2 = bracket_vec(datum, &unit(n, y), &bzx);
                let t3 = bracket_vec(datum, &unit(n, z), &bxy);
                if (0..n).any(|k| !(&(&t1[k] + &t2[k]) + &t3[k]).is_zero()) {
                    fail = Some(format!("Jacobi fails on basis triple ({x},{y},{z})"));
                    break 'outer;
                }
            }
        }
    }
    out.push(RootCheck { name: "jacobi_identity", cases, failure: fail });
    out
}

/// The anomaly identity
/// `k(a+b) N_ab = k(a+c) N_ac - k(b+c) N_bc` with `k(x) = <chi + 2 rho, H_x>`,
/// either over triples summing to zero or over all triples whose pairwise
/// sums are roots.
pub fn anomaly_cocycle(
    datum: &RootDatum,
    chi: &crate::root_system::Weight,
    zero_sum_only: bool,
) -> RootCheck {
    let shifted = crate::root_system::Weight {
        coords: chi.coords.iter().map(|x| x + &Rational::from_int(2)).collect(),
    };
    let k = |r: Option<Root>| -> Rational { r.map_or(Rational::zero(), |r| datum.pair(&shifted, r)) };
    let roots: Vec<Root> = datum.all_roots().collect();
    let mut fail = None;
    let mut cases = 0;
    for &a in &roots {
        for &b in &roots {
            for &c in &roots {
                let total: Vec<i64> = (0..datum.rank)
                    .map(|i| datum.coords(a)[i] + datum.coords(b)[i] + datum.coords(c)[i])
                    .collect();
                let zero_sum = total.iter().all(|&x| x == 0);
                if zero_sum_only && !zero_sum {
                    continue;
                }
                let (ab, ac, bc) = (datum.sum(a, b), datum.sum(a, c), datum.sum(b, c));
                if !zero_sum_only && (ab.is_none() || ac.is_none() || bc.is_none()) {
                    continue;
                }
                cases += 1;
                let lhs = &k(ab) * &Rational::from_int(datum.n(a, b));
                let rhs = &(&k(ac) * &Rational::from_int(datum.n(a, c))) - &(&k(bc) * &Rational::from_int(datum.n(b, c)));
                if lhs != rhs && fail.is_none() {
                    fail = Some(format!(
                        "fails at {:?},{:?},{:?}: {} vs {}",
                        datum.coords(a),
                        datum.coords(b),
                        datum.coords(c),
                        lhs,
                        rhs
                    ));
                }
            }
        }
    }
    RootCheck {
        name: if zero_sum_only { "anomaly_cocycle_zero_sum" } else { "anomaly_cocycle_all_sums" },
        cases,
        failure: fail,
    }
}
