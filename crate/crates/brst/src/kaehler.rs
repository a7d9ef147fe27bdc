//! Hodge star, neutral pairing and the Kaehler inner product on weight
//! blocks of the Cartan-free space.

use exact_linalg::{Rational, SparseMatrix};

use crate::ghost::{act, act_word, Gen, Layout};
use crate::op::{Cochain, Key, Op};
use crate::operators::{conj_gen, Instance};
use crate::space::{materialize, Block};
use crate::BrstError;

/// Neutral pairing `(e_a, e_b)` of two ghost basis states: `+-1` or `0`.
pub fn pair_basis(lay: &Layout, a: u64, b: u64) -> i64 {
    // e_a = g_1 ... g_k w with ascending modes; (e_a, X) = (w, g_k* ... g_1* X)
    let mut neg = false;
    let mut m = b;
    for k in 0..lay.modes() {
        if a >> k & 1 == 1 {
            let (n, g) = conj_gen(lay, Gen::Create(k as u8));
            match act(g, m) {
                Some((nn, mm)) => {
                    neg ^= n ^ nn;
                    m = mm;
                }
                None => return 0,
            }
        }
    }
    if m != lay.h_mask() {
        return 0;
    }
    if neg {
        -1
    } else {
        1
    }
}

/// `upsilon(h) = c^1 ... c^l` applied to a mask.
pub fn upsilon(lay: &Layout, mask: u64) -> Option<(bool, u64)> {
    let word: Vec<Gen> = (0..lay.l).map(|i| lay.ci(i)).collect();
    act_word(&word, mask)
}

/// Star of a Cartan-free ghost state: swaps the `C` and `B` occupations with
/// sign `(-1)^{(l+1)(k+s)+ks}` and coefficient `prod r_(B roots) / prod r_(C roots)`.
pub fn star_mask(x: &Instance, mask: u64) -> (Rational, u64) {
    let lay = &x.lay;
    let (h, c, b) = lay.split(mask);
    debug_assert_eq!(h, 0);
    let s = c.count_ones() as usize;
    let k = b.count_ones() as usize;
    let mut coef = Rational::one();
    for j in 0..lay.m {
        let r = x.r.r(crate::Root::pos(j));
        if b >> j & 1 == 1 {
            coef = &coef * &r;
        }
        if c >> j & 1 == 1 {
            coef = &coef / &r;
        }
    }
    if ((lay.l + 1) * (k + s) + k * s) % 2 == 1 {
        coef = -coef;
    }
    (coef, lay.compose(0, b, c))
}

pub fn star(x: &Instance, v: &Cochain) -> Cochain {
    let mut out = Cochain::default();
    for (k, c) in v {
        let (s, m) = star_mask(x, k.0);
        crate::op::add_to(&mut out, (m, k.1), &s * c);
    }
    out
}

/// `<e_s, e_s>` ghost factor `(star e_s, upsilon e_s)`.
pub fn kaehler_ghost_diag(x: &Instance, mask: u64) -> Rational {
    let (s, m) = star_mask(x, mask);
    let Some((neg, u)) = upsilon(&x.lay, mask) else { return Rational::zero() };
    let p = pair_basis(&x.lay, m, u);
    let v = &s * &Rational::from_int(if neg { -p } else { p });
    v
}

/// Ghost factor of `<e_s, e_t>` computed without assuming diagonality.
pub fn kaehler_ghost_entry(x: &Instance, s: u64, t: u64) -> Rational {
    let (c, m) = star_mask(x, s);
    let Some((neg, u)) = upsilon(&x.lay, t) else { return Rational::zero() };
    let p = pair_basis(&x.lay, m, u);
    &c * &Rational::from_int(if neg { -p } else { p })
}

/// Kaehler data on one block: Gram matrix, its inverse and the star matrix.
pub struct KBlock {
    pub gram: SparseMatrix,
    pub gram_inv: SparseMatrix,
    pub star: SparseMatrix,
}

impl KBlock {
    pub fn new(x: &Instance, blk: &Block) -> Result<KBlock, BrstError> {
        let n = blk.len();
        let g = &x.md.module.gram;
        let weights = &x.md.module.weights;
        let mut trip = Vec::new();
        let mut trip_inv = Vec::new();
        let mut trip_star = Vec::new();
        // states of one mask are contiguous and ordered by v
        let mut i = 0;
        while i < n {
            let mask = blk.states[i].0;
            let mut j = i;
            while j < n && blk.states[j].0 == mask {
                j += 1;
            }
            let k = kaehler_ghost_diag(x, mask);
            if k.is_zero() {
                return Err(BrstError::Internal(format!("degenerate Kaehler factor at {}", x.lay.describe(mask))));
            }
            let kinv = k.recip();
            let (sc, sm) = star_mask(x, mask);
            for a in i..j {
                let va = blk.states[a].1 as usize;
                let mu = &weights[va];
                let inv = &x.md.gram_inv[mu];
                let off = x.md.module.blocks[mu].start;
                for b in i..j {
                    let vb = blk.states[b].1 as usize;
                    let gv = g.get(va, vb);
                    if !gv.is_zero() {
                        trip.push((a, b, &k * &gv));
                    }
                    if weights[vb] == *mu {
                        let iv = inv.get(va - off, vb - off);
                        if !iv.is_zero() {
                            trip_inv.push((a, b, &kinv * &iv));
                        }
                    }
                }
                let target = blk.index.get(&(sm, va as u32)).ok_or_else(|| BrstError::Internal("star leaves the block".into()))?;
                trip_star.push((*target, a, sc.clone()));
            }
            i = j;
        }
        Ok(KBlock {
            gram: SparseMatrix::from_triplets(n, n, trip)?,
            gram_inv: SparseMatrix::from_triplets(n, n, trip_inv)?,
            star: SparseMatrix::from_triplets(n, n, trip_star)?,
        })
    }
}

/// Gram adjoint `K_src^{-1} A^T K_dst` of `A: src -> dst`.
pub fn dagger(a: &SparseMatrix, src: &KBlock, dst: &KBlock) -> SparseMatrix {
    src.gram_inv.mul(&a.transpose()).unwrap().mul(&dst.gram).unwrap()
}

/// `(-1)^{l deg(A)} star A* star` with `A*` the formal conjugate, as a
/// matrix from `dst` back to `src` (where `A: src -> dst`).
pub fn dagger_closed_form(
    x: &Instance,
    op: &Op,
    deg_parity: usize,
    src: (&Block, &KBlock),
    dst: (&Block, &KBlock),
) -> Result<SparseMatrix, BrstError> {
    let conj = x.conj(op);
    let m = materialize(&conj, dst.0, src.0)?;
    let out = src.1.star.mul(&m)?.mul(&dst.1.star)?;
    Ok(if (x.lay.l * deg_parity) % 2 == 1 { out.scale(&Rational::from_int(-1)) } else { out })
}

/// `<u, v>` for block coordinate vectors.
pub fn inner(k: &KBlock, u: &exact_linalg::SparseVec, v: &exact_linalg::SparseVec) -> Rational {
    exact_linalg::sparse_dot(u, &k.gram.mul_vec(v))
}

pub fn key_describe(x: &Instance) -> impl Fn(Key) -> String + '_ {
    move |k: Key| format!("{} (x) v{}", x.lay.describe(k.0), k.1)
}
