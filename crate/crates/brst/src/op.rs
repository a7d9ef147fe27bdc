//! Symbolic operators on `C(V) = C (x) V`: sums of ghost words tensored
//! with matrices on `V`, applied lazily to sparse cochains.

use std::sync::Arc;

use exact_linalg::{Rational, SparseMatrix};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::ghost::{act_word, Gen, Word};

/// Basis state: ghost mask and index of a basis vector of `V`.
pub type Key = (u64, u32);

/// Sparse cochain.
pub type Cochain = FxHashMap<Key, Rational>;

#[derive(Clone, Debug)]
pub enum VPart {
    Id,
    M(Arc<SparseMatrix>),
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Rational,
    pub word: Word,
    pub v: VPart,
}

#[derive(Clone, Debug, Default)]
pub struct Op {
    pub terms: Vec<Term>,
}

pub fn add_to(out: &mut Cochain, k: Key, x: Rational) {
    if x.is_zero() {
        return;
    }
    match out.entry(k) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &x;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(x);
        }
    }
}

pub fn basis(k: Key) -> Cochain {
    let mut c = Cochain::default();
    c.insert(k, Rational::one());
    c
}

/// `a + s b`.
pub fn axpy(a: &mut Cochain, s: &Rational, b: &Cochain) {
    for (k, x) in b {
        add_to(a, *k, s * x);
    }
}

impl Op {
    pub fn zero() -> Op {
        Op { terms: Vec::new() }
    }

    pub fn scalar(c: Rational) -> Op {
        Op::term(c, &[], VPart::Id)
    }

    pub fn identity() -> Op {
        Op::scalar(Rational::one())
    }

    pub fn term(c: Rational, word: &[Gen], v: VPart) -> Op {
        if c.is_zero() {
            return Op::zero();
        }
        Op { terms: vec![Term { coeff: c, word: SmallVec::from_slice(word), v }] }
    }

    pub fn word(c: Rational, word: &[Gen]) -> Op {
        Op::term(c, word, VPart::Id)
    }

    pub fn gen(g: Gen) -> Op {
        Op::word(Rational::one(), &[g])
    }

    pub fn vmat(c: Rational, m: Arc<SparseMatrix>) -> Op {
        Op::term(c, &[], VPart::M(m))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, t: Term) {
        if !t.coeff.is_zero() {
            self.terms.push(t);
        }
    }

    pub fn add(&self, other: &Op) -> Op {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn add_assign(&mut self, other: &Op) {
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn sub(&self, other: &Op) -> Op {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, s: &Rational) -> Op {
        if s.is_zero() {
            return Op::zero();
        }
        Op {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: &t.coeff * s, word: t.word.clone(), v: t.v.clone() })
                .collect(),
        }
    }

    /// Symbolic product `self * other`.
    pub fn compose(&self, other: &Op) -> Op {
        let mut out = Op::zero();
        for a in &self.terms {
            for b in &other.terms {
                let mut word = a.word.clone();
                word.extend(b.word.iter().copied());
                let v = match (&a.v, &b.v) {
                    (VPart::Id, x) | (x, VPart::Id) => x.clone(),
                    (VPart::M(x), VPart::M(y)) => VPart::M(Arc::new(x.mul(y).expect("V dimensions agree"))),
                };
                out.push(Term { coeff: &a.coeff * &b.coeff, word, v });
            }
        }
        out
    }

    pub fn commutator(&self, other: &Op) -> Op {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn anticommutator(&self, other: &Op) -> Op {
        self.compose(other).add(&other.compose(self))
    }

    /// Merges terms with equal word and identical `V` part.
    pub fn simplify(&self) -> Op {
        let mut idx: FxHashMap<(Word, usize), usize> = FxHashMap::default();
        let mut out: Vec<Term> = Vec::new();
        for t in &self.terms {
            let vk = match &t.v {
                VPart::Id => 0,
                VPart::M(m) => Arc::as_ptr(m) as usize,
            };
            match idx.get(&(t.word.clone(), vk)) {
                Some(&p) => out[p].coeff += &t.coeff,
                None => {
                    idx.insert((t.word.clone(), vk), out.len());
                    out.push(t.clone());
                }
            }
        }
        Op { terms: out.into_iter().filter(|t| !t.coeff.is_zero()).collect() }
    }

    #[inline]
    pub fn apply_key(&self, k: Key, x: &Rational, out: &mut Cochain) {
        for t in &self.terms {
            let Some((neg, mask)) = act_word(&t.word, k.0) else { continue };
            let c = if neg { -(&t.coeff * x) } else { &t.coeff * x };
            match &t.v {
                VPart::Id => add_to(out, (mask, k.1), c),
                VPart::M(m) => {
                    for (row, a) in m.col(k.1 as usize) {
                        add_to(out, (mask, *row as u32), &c * a);
                    }
                }
            }
        }
    }

    pub fn apply(&self, v: &Cochain) -> Cochain {
        let mut out = Cochain::default();
        for (k, x) in v {
            self.apply_key(*k, x, &mut out);
        }
        out
    }
}

/// Linear combination of operator products, evaluated right to left.
#[derive(Clone, Default)]
pub struct Expr<'a> {
    pub parts: Vec<(Rational, Vec<&'a Op>)>,
}

impl<'a> Expr<'a> {
    pub fn new() -> Expr<'a> {
        Expr { parts: Vec::new() }
    }

    pub fn plus(mut self, c: i64, ops: &[&'a Op]) -> Expr<'a> {
        self.parts.push((Rational::from_int(c), ops.to_vec()));
        self
    }

    pub fn plus_q(mut self, c: Rational, ops: &[&'a Op]) -> Expr<'a> {
        self.parts.push((c, ops.to_vec()));
        self
    }

    /// `A - B`.
    pub fn equal(a: &'a Op, b: &'a Op) -> Expr<'a> {
        Expr::new().plus(1, &[a]).plus(-1, &[b])
    }

    /// `[A, B] - C`.
    pub fn commutator_is(a: &'a Op, b: &'a Op, c: &'a Op) -> Expr<'a> {
        Expr::new().plus(1, &[a, b]).plus(-1, &[b, a]).plus(-1, &[c])
    }

    /// `{A, B} - C`.
    pub fn anticommutator_is(a: &'a Op, b: &'a Op, c: &'a Op) -> Expr<'a> {
        Expr::new().plus(1, &[a, b]).plus(1, &[b, a]).plus(-1, &[c])
    }

    pub fn eval(&self, v: &Cochain) -> Cochain {
        let mut acc = Cochain::default();
        for (c, ops) in &self.parts {
            let mut cur = v.clone();
            for op in ops.iter().rev() {
                if cur.is_empty() {
                    break;
                }
                cur = op.apply(&cur);
            }
            axpy(&mut acc, c, &cur);
        }
        acc
    }
}
