//! Weight blocks of the Cartan-free space and operator materialization.
//!
//! The Cartan-free states `(mask, v)` with no `H` ghost split by the block
//! weight `w = wt(v) - chi - (sum of roots labelling C and B ghosts)`. On a
//! Cartan-free state `L^tot_i` acts as `w_i`, so the relative space is the
//! block `w = 0`.

use std::collections::BTreeMap;

use exact_linalg::{Rational, SparseMatrix, SparseVec};
use rustc_hash::FxHashMap;

use crate::op::{basis, Cochain, Key, Op};
use crate::operators::Instance;
use crate::BrstError;

pub type BlockWeight = Vec<Rational>;

#[derive(Clone, Debug)]
pub struct Block {
    pub w: BlockWeight,
    pub states: Vec<Key>,
    pub index: FxHashMap<Key, usize>,
}

impl Block {
    pub fn new(w: BlockWeight, mut states: Vec<Key>) -> Block {
        states.sort_unstable();
        let index = states.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        Block { w, states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn to_vec(&self, c: &Cochain) -> Result<SparseVec, BrstError> {
        let mut out = Vec::with_capacity(c.len());
        for (k, x) in c {
            let i = self.index.get(k).ok_or_else(|| BrstError::Internal("cochain leaves its weight block".into()))?;
            out.push((*i, x.clone()));
        }
        out.sort_unstable_by_key(|e| e.0);
        Ok(out)
    }

    pub fn to_cochain(&self, v: &SparseVec) -> Cochain {
        v.iter().map(|(i, x)| (self.states[*i], x.clone())).collect()
    }
}

/// All Cartan-free states grouped by block weight.
pub struct Blocks {
    pub blocks: BTreeMap<BlockWeight, Block>,
}

/// Largest number of Cartan-free ghost states enumerated explicitly.
pub const MAX_GHOST_STATES: u64 = 1 << 20;

impl Blocks {
    pub fn new(x: &Instance) -> Result<Blocks, BrstError> {
        let lay = &x.lay;
        let n_masks = 1u64.checked_shl(2 * lay.m as u32).unwrap_or(u64::MAX);
        if n_masks > MAX_GHOST_STATES {
            return Err(BrstError::DimensionLimit {
                slice: "Cartan-free ghost space".into(),
                dim: n_masks.min(usize::MAX as u64) as usize,
                limit: MAX_GHOST_STATES as usize,
            });
        }
        let l = lay.l;
        let weights = &x.md.module.weights;
        let mut groups: BTreeMap<BlockWeight, Vec<Key>> = BTreeMap::new();
        for gm in 0..n_masks {
            let mask = gm << l;
            let load = lay.root_load(&x.datum, mask);
            // Dynkin labels of the root load
            let dl: Vec<i64> = (0..l)
                .map(|i| (0..l).map(|j| load[j] * x.datum.cartan[i][j]).sum())
                .collect();
            for (v, wt) in weights.iter().enumerate() {
                let w: BlockWeight =
                    (0..l).map(|i| &Rational::from_int(wt[i] - dl[i]) - &x.r.chi.coords[i]).collect();
                groups.entry(w).or_default().push((mask, v as u32));
            }
        }
        Ok(Blocks { blocks: groups.into_iter().map(|(w, s)| (w.clone(), Block::new(w, s))).collect() })
    }

    pub fn relative(&self, l: usize) -> Option<&Block> {
        self.blocks.get(&vec![Rational::zero(); l])
    }

    /// Block of weight `w + shift` with `shift` a root in simple-root coordinates.
    pub fn shifted(&self, x: &Instance, w: &BlockWeight, shift: &[i64]) -> Option<&Block> {
        let l = x.lay.l;
        let key: BlockWeight = (0..l)
            .map(|i| &w[i] + &Rational::from_int((0..l).map(|j| shift[j] * x.datum.cartan[i][j]).sum()))
            .collect();
        self.blocks.get(&key)
    }

    pub fn all_states(&self) -> Vec<Key> {
        let mut v: Vec<Key> = self.blocks.values().flat_map(|b| b.states.iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

/// Matrix of `op` from block `src` into block `dst`.
pub fn materialize(op: &Op, src: &Block, dst: &Block) -> Result<SparseMatrix, BrstError> {
    let mut cols = Vec::with_capacity(src.len());
    for k in &src.states {
        cols.push(dst.to_vec(&op.apply(&basis(*k)))?);
    }
    Ok(SparseMatrix::from_columns(dst.len(), cols))
}
