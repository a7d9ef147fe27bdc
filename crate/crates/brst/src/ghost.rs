//! Ghost Fock space as bitmasks.
//!
//! Modes: `0..l` are Cartan ghosts `H(i)` created by `c^i`; `l..l+m` are
//! `C(k)` created by `c^{-alpha_k}`; `l+m..l+2m` are `B(k)` created by
//! `b_{-alpha_k}`. The vacuum `omega` is the empty mask. A basis state is
//! the product of its creators in ascending mode order applied to `omega`,
//! so a creator or annihilator acting on mode `k` picks up the sign
//! `(-1)^(number of occupied modes below k)`.
//!
//! The conjugate pairs `{c^alpha, b_{-alpha}} = 1` and `{c^i, b_i} = 1` are
//! realised as: `c^{+alpha}` annihilates `B`, `b_{+alpha}` annihilates `C`,
//! `b_i` annihilates `H`.

use smallvec::SmallVec;

use crate::root_system::{Root, RootDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Create(u8),
    Annihilate(u8),
}

/// Applies one generator; `None` when the result vanishes.
#[inline]
pub fn act(g: Gen, mask: u64) -> Option<(bool, u64)> {
    let (k, create) = match g {
        Gen::Create(k) => (k, true),
        Gen::Annihilate(k) => (k, false),
    };
    let bit = 1u64 << k;
    if (mask & bit != 0) == create {
        return None;
    }
    let neg = (mask & (bit - 1)).count_ones() & 1 == 1;
    Some((neg, mask ^ bit))
}

pub type Word = SmallVec<[Gen; 4]>;

/// Applies `g_1 g_2 ... g_k` (rightmost first).
#[inline]
pub fn act_word(word: &[Gen], mask: u64) -> Option<(bool, u64)> {
    let mut neg = false;
    let mut m = mask;
    for g in word.iter().rev() {
        let (n, mm) = act(*g, m)?;
        neg ^= n;
        m = mm;
    }
    Some((neg, m))
}

/// Mode layout for a root datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub l: usize,
    pub m: usize,
}

impl Layout {
    pub fn new(datum: &RootDatum) -> Layout {
        let l = datum.rank;
        let m = datum.num_positive();
        assert!(l + 2 * m <= 64, "ghost modes exceed 64 bits");
        Layout { l, m }
    }

    pub fn modes(&self) -> usize {
        self.l + 2 * self.m
    }

    pub fn h_mode(&self, i: usize) -> u8 {
        i as u8
    }

    pub fn c_mode(&self, k: usize) -> u8 {
        (self.l + k) as u8
    }

    pub fn b_mode(&self, k: usize) -> u8 {
        (self.l + self.m + k) as u8
    }

    /// `c^alpha` for a root.
    pub fn c(&self, r: Root) -> Gen {
        if r.is_positive() {
            Gen::Annihilate(self.b_mode(r.index()))
        } else {
            Gen::Create(self.c_mode(r.index()))
        }
    }

    /// `b_alpha` for a root.
    pub fn b(&self, r: Root) -> Gen {
        if r.is_positive() {
            Gen::Annihilate(self.c_mode(r.index()))
        } else {
            Gen::Create(self.b_mode(r.index()))
        }
    }

    pub fn ci(&self, i: usize) -> Gen {
        Gen::Create(self.h_mode(i))
    }

    pub fn bi(&self, i: usize) -> Gen {
        Gen::Annihilate(self.h_mode(i))
    }

    pub fn h_mask(&self) -> u64 {
        (1u64 << self.l) - 1
    }

    pub fn c_mask(&self) -> u64 {
        ((1u64 << self.m) - 1) << self.l
    }

    pub fn b_mask(&self) -> u64 {
        ((1u64 << self.m) - 1) << (self.l + self.m)
    }

    pub fn compose(&self, h: u64, c: u64, b: u64) -> u64 {
        h | (c << self.l) | (b << (self.l + self.m))
    }

    /// `(H, C, B)` occupation sub-masks.
    pub fn split(&self, mask: u64) -> (u64, u64, u64) {
        let mm = (1u64 << self.m) - 1;
        (mask & self.h_mask(), (mask >> self.l) & mm, (mask >> (self.l + self.m)) & mm)
    }

    pub fn counts(&self, mask: u64) -> (u32, u32, u32) {
        let (h, c, b) = self.split(mask);
        (h.count_ones(), c.count_ones(), b.count_ones())
    }

    /// Twice the total ghost number: `2(#C - #B + #H) - l`.
    pub fn gh_tot2(&self, mask: u64) -> i64 {
        let (h, c, b) = self.counts(mask);
        2 * (c as i64 - b as i64 + h as i64) - self.l as i64
    }

    /// Relative bidegree `(p, q) = (#C, #B)`.
    pub fn bidegree(&self, mask: u64) -> (u32, u32) {
        let (_, c, b) = self.counts(mask);
        (c, b)
    }

    /// Sum of the positive roots labelling occupied `C` and `B` modes, in
    /// simple-root coordinates. The ghost weight of the state is minus this.
    pub fn root_load(&self, datum: &RootDatum, mask: u64) -> Vec<i64> {
        let (_, c, b) = self.split(mask);
        let mut acc = vec![0i64; self.l];
        for k in 0..self.m {
            let times = ((c >> k) & 1) + ((b >> k) & 1);
            if times > 0 {
                for (a, x) in acc.iter_mut().zip(&datum.positive[k]) {
                    *a += times as i64 * x;
                }
            }
        }
        acc
    }

    /// Human-readable monomial, e.g. `c^-a1 b_-a3 c^1 w`.
    pub fn describe(&self, mask: u64) -> String {
        let (h, c, b) = self.split(mask);
        let mut parts = Vec::new();
        for i in 0..self.l {
            if h >> i & 1 == 1 {
                parts.push(format!("c^{}", i + 1));
            }
        }
        for k in 0..self.m {
            if c >> k & 1 == 1 {
                parts.push(format!("c^-a{}", k + 1));
            }
        }
        for k in 0..self.m {
            if b >> k & 1 == 1 {
                parts.push(format!("b_-a{}", k + 1));
            }
        }
        parts.push("w".into());
        parts.join(" ")
    }
}
