//! The operator family of the ghost-dressed complex.

use std::sync::Arc;

use exact_linalg::{Rational, SparseMatrix};

use crate::ghost::{Gen, Layout};
use crate::op::{Op, Term, VPart};
use crate::root_system::{AnomalyCoefficients, Root, RootDatum};
use crate::weight_module::ModuleData;
use crate::BrstError;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn half() -> Rational {
    Rational::new(1, 2)
}

/// Conjugation of one generator under the neutral pairing:
/// `c^a* = -c^{-a}`, `b_a* = -b_{-a}`, `c^i* = c^i`, `b_i* = b_i`.
pub fn conj_gen(lay: &Layout, g: Gen) -> (bool, Gen) {
    let l = lay.l as u8;
    let m = lay.m as u8;
    match g {
        Gen::Create(k) if k < l => (false, g),
        Gen::Annihilate(k) if k < l => (false, g),
        // c^{-a} -> -c^{a}
        Gen::Create(k) if k < l + m => (true, Gen::Annihilate(k + m)),
        // b_{a} -> -b_{-a}
        Gen::Annihilate(k) if k < l + m => (true, Gen::Create(k + m)),
        // b_{-a} -> -b_{a}
        Gen::Create(k) => (true, Gen::Annihilate(k - m)),
        // c^{a} -> -c^{-a}
        Gen::Annihilate(k) => (true, Gen::Create(k - m)),
    }
}

/// True for `c`-type generators (`c^a`, `c^i`).
pub fn is_c_type(lay: &Layout, g: Gen) -> bool {
    let l = lay.l as u8;
    let m = lay.m as u8;
    match g {
        Gen::Create(k) => k < l + m,
        Gen::Annihilate(k) => k >= l + m,
    }
}

/// The complex `C(V)` for one instance `(g, Lambda, chi)`.
pub struct Instance {
    pub datum: RootDatum,
    pub lay: Layout,
    pub r: AnomalyCoefficients,
    pub lambda: Vec<i64>,
    pub md: ModuleData,
    vl: Vec<Arc<SparseMatrix>>,
    vh: Vec<Arc<SparseMatrix>>,
}

impl Instance {
    pub fn new(datum: RootDatum, lambda: &[i64], r: AnomalyCoefficients) -> Result<Instance, BrstError> {
        let md = ModuleData::new(&datum, lambda, &r.chi)?;
        let vl = md.root_ops.iter().map(|m| Arc::new(m.clone())).collect();
        let vh = md.cartan_ops.iter().map(|m| Arc::new(m.clone())).collect();
        let lay = Layout::new(&datum);
        Ok(Instance { datum, lay, r, lambda: lambda.to_vec(), md, vl, vh })
    }

    pub fn dim_v(&self) -> usize {
        self.md.dim()
    }

    fn roots(&self) -> Vec<Root> {
        self.datum.all_roots().collect()
    }

    fn pos(&self) -> Vec<Root> {
        self.datum.positive_roots().collect()
    }

    fn w(&self, c: Rational, gens: &[Gen]) -> Op {
        Op::word(c, gens)
    }

    // elementary generators

    pub fn c(&self, a: Root) -> Op {
        Op::gen(self.lay.c(a))
    }

    pub fn b(&self, a: Root) -> Op {
        Op::gen(self.lay.b(a))
    }

    pub fn ci(&self, i: usize) -> Op {
        Op::gen(self.lay.ci(i))
    }

    pub fn bi(&self, i: usize) -> Op {
        Op::gen(self.lay.bi(i))
    }

    /// Every generator `c^a, b_a, c^i, b_i` with a readable name.
    pub fn generators(&self) -> Vec<(String, Gen)> {
        let mut out = Vec::new();
        for a in self.roots() {
            let s = if a.is_positive() { "" } else { "-" };
            out.push((format!("c^{s}a{}", a.index() + 1), self.lay.c(a)));
            out.push((format!("b_{s}a{}", a.index() + 1), self.lay.b(a)));
        }
        for i in 0..self.lay.l {
            out.push((format!("c^{}", i + 1), self.lay.ci(i)));
            out.push((format!("b_{}", i + 1), self.lay.bi(i)));
        }
        out
    }

    // Koszul operators

    /// `L^nil_a = -sum_b N_ab c^{-b} b_{a+b} + sum_i H_a^i c^a b_i + sum_i a(H_i) c^i b_a`.
    pub fn l_nil(&self, a: Root) -> Op {
        let lay = &self.lay;
        let mut op = Op::zero();
        for b in self.roots() {
            if let Some(s) = self.datum.sum(a, b) {
                op.add_assign(&self.w(q(-self.datum.n(a, b)), &[lay.c(b.negate()), lay.b(s)]));
            }
        }
        for (i, h) in self.datum.coroot(a).iter().enumerate() {
            op.add_assign(&self.w(h.clone(), &[lay.c(a), lay.bi(i)]));
        }
        for i in 0..lay.l {
            op.add_assign(&self.w(q(self.datum.value(a, i)), &[lay.ci(i), lay.b(a)]));
        }
        op
    }

    /// `L^nil_i = sign * sum_b b(H_i) c^b b_{-b}`. The consistent choice is
    /// `sign = +1`; `-1` is the sign-flipped variant, kept for comparison.
    pub fn l_nil_cartan_signed(&self, i: usize, sign: i64) -> Op {
        let mut op = Op::zero();
        for b in self.roots() {
            op.add_assign(&self.w(q(sign * self.datum.value(b, i)), &[self.lay.c(b), self.lay.b(b.negate())]));
        }
        op
    }

    pub fn l_nil_cartan(&self, i: usize) -> Op {
        self.l_nil_cartan_signed(i, 1)
    }

    pub fn l_nil_h(&self, h: &[Rational]) -> Op {
        let mut op = Op::zero();
        for (i, c) in h.iter().enumerate() {
            op.add_assign(&self.l_nil_cartan(i).scale(c));
        }
        op
    }

    /// `d^nil = 1/2 sum_a c^{-a} L^nil_a + 1/2 sum_i c^i L^nil_i`.
    pub fn d_nil(&self) -> Op {
        let mut op = Op::zero();
        for a in self.roots() {
            op.add_assign(&self.c(a.negate()).compose(&self.l_nil(a)));
        }
        for i in 0..self.lay.l {
            op.add_assign(&self.ci(i).compose(&self.l_nil_cartan(i)));
        }
        op.scale(&half()).simplify()
    }

    /// Normal ordering of bilinears: `:c^a b_b: = -b_b c^a` for `b < 0`,
    /// `:c^i b_j: = (c^i b_j - b_j c^i)/2`; other words are kept.
    pub fn normal_order(&self, op: &Op) -> Op {
        let lay = &self.lay;
        let l = lay.l as u8;
        let m = lay.m as u8;
        let mut out = Op::zero();
        for t in &op.terms {
            if t.word.len() == 2 && is_c_type(lay, t.word[0]) && !is_c_type(lay, t.word[1]) {
                let (x, y) = (t.word[0], t.word[1]);
                let b_negative = matches!(y, Gen::Create(k) if k >= l + m);
                let both_cartan = matches!(x, Gen::Create(k) if k < l) && matches!(y, Gen::Annihilate(k) if k < l);
                if b_negative {
                    out.push(Term { coeff: -&t.coeff, word: [y, x].into_iter().collect(), v: t.v.clone() });
                    continue;
                }
                if both_cartan {
                    let c = &t.coeff * &half();
                    out.push(Term { coeff: c.clone(), word: [x, y].into_iter().collect(), v: t.v.clone() });
                    out.push(Term { coeff: -c, word: [y, x].into_iter().collect(), v: t.v.clone() });
                    continue;
                }
            }
            out.push(t.clone());
        }
        out
    }

    // normal-ordered ghost operators

    pub fn l_root(&self, a: Root) -> Op {
        self.l_nil(a)
    }

    /// `L_i = -sum_{b>0} b(H_i) (c^{-b} b_b + b_{-b} c^b)`.
    pub fn l_cartan(&self, i: usize) -> Op {
        let lay = &self.lay;
        let mut op = Op::zero();
        for b in self.pos() {
            let v = q(-self.datum.value(b, i));
            op.add_assign(&self.w(v.clone(), &[lay.c(b.negate()), lay.b(b)]));
            op.add_assign(&self.w(v, &[lay.b(b.negate()), lay.c(b)]));
        }
        op
    }

    pub fn l_h(&self, h: &[Rational]) -> Op {
        let mut op = Op::zero();
        for (i, c) in h.iter().enumerate() {
            op.add_assign(&self.l_cartan(i).scale(c));
        }
        op
    }

    /// `d = 1/2 sum_{a>0} c^{-a} L_a + 1/2 sum_{a>0} L_{-a} c^a + 1/2 sum_i c^i L_i`.
    pub fn d(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.c(a.negate()).compose(&self.l_root(a)));
            op.add_assign(&self.l_root(a.negate()).compose(&self.c(a)));
        }
        for i in 0..self.lay.l {
            op.add_assign(&self.ci(i).compose(&self.l_cartan(i)));
        }
        op.scale(&half()).simplify()
    }

    /// `rho_op = sum_i <rho, H_i> c^i`.
    pub fn rho_op(&self) -> Op {
        let mut op = Op::zero();
        for i in 0..self.lay.l {
            op.add_assign(&self.ci(i));
        }
        op
    }

    /// `sum_{a>0} k_a c^{-a} c^a`.
    pub fn cc_sum(&self, k: impl Fn(Root) -> Rational) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.w(k(a), &[self.lay.c(a.negate()), self.lay.c(a)]));
        }
        op
    }

    // gradings

    /// `gh_bar = sum_{a>0} c^{-a} b_a` counts `C` ghosts.
    pub fn gh_bar(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.w(q(1), &[self.lay.c(a.negate()), self.lay.b(a)]));
        }
        op
    }

    /// `gh = sum_{a>0} b_{-a} c^a` counts `B` ghosts.
    pub fn gh(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.w(q(1), &[self.lay.b(a.negate()), self.lay.c(a)]));
        }
        op
    }

    pub fn gh_rel(&self) -> Op {
        self.gh_bar().sub(&self.gh())
    }

    pub fn deg(&self) -> Op {
        self.gh_bar().add(&self.gh())
    }

    /// `gh_tot = sum c^{-a} b_a - sum b_{-a} c^a + 1/2 sum (c^i b_i - b_i c^i)`.
    pub fn gh_tot(&self) -> Op {
        let mut op = self.gh_rel();
        for i in 0..self.lay.l {
            op.add_assign(&self.w(half(), &[self.lay.ci(i), self.lay.bi(i)]));
            op.add_assign(&self.w(-half(), &[self.lay.bi(i), self.lay.ci(i)]));
        }
        op
    }

    // sl(2)

    pub fn j_plus(&self) -> Op {
        self.cc_sum(|a| self.r.r(a))
    }

    pub fn j_minus(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.w(self.r.r(a).recip(), &[self.lay.b(a.negate()), self.lay.b(a)]));
        }
        op
    }

    pub fn cluster(&self, a: Root) -> Op {
        self.w(q(1), &[self.lay.c(a.negate()), self.lay.b(a.negate())])
    }

    pub fn cluster_pair(&self, a: Root, b: Root) -> Op {
        let lay = &self.lay;
        self.w(self.r.r(a).recip(), &[lay.b(a.negate()), lay.c(b.negate())])
            .add(&self.w(self.r.r(b).recip(), &[lay.b(b.negate()), lay.c(a.negate())]))
    }

    // module side

    pub fn vl(&self, a: Root) -> Op {
        Op::vmat(q(1), self.vl[self.datum.slot(a)].clone())
    }

    pub fn vh(&self, i: usize) -> Op {
        Op::vmat(q(1), self.vh[i].clone())
    }

    pub fn vh_comb(&self, h: &[Rational]) -> Op {
        let mut op = Op::zero();
        for (i, c) in h.iter().enumerate() {
            op.add_assign(&self.vh(i).scale(c));
        }
        op
    }

    /// `D = sum_a c^{-a} L_a + sum_i c^i L_i + d`.
    pub fn big_d(&self) -> Op {
        let mut op = Op::zero();
        for a in self.roots() {
            op.add_assign(&self.c(a.negate()).compose(&self.vl(a)));
        }
        for i in 0..self.lay.l {
            op.add_assign(&self.ci(i).compose(&self.vh(i)));
        }
        op.add(&self.d())
    }

    pub fn ltot(&self, a: Root) -> Op {
        self.vl(a).add(&self.l_root(a))
    }

    pub fn ltot_cartan(&self, i: usize) -> Op {
        self.vh(i).add(&self.l_cartan(i))
    }

    pub fn ltot_h(&self, h: &[Rational]) -> Op {
        self.vh_comb(h).add(&self.l_h(h))
    }

    /// `M^i = sum_{a>0} H_a^i c^{-a} c^a`.
    pub fn m_i(&self, i: usize) -> Op {
        self.cc_sum(|a| self.datum.coroot(a)[i].clone())
    }

    fn triple(&self, c: Rational, a: Root, b: Root, s: Root) -> Op {
        self.w(c, &[self.lay.c(a), self.lay.c(b), self.lay.b(s)])
    }

    /// `D_rel = -1/2 sum_{a,b} N_ab c^{-a} c^{-b} b_{a+b} + sum_a c^{-a} L_a`.
    pub fn d_rel(&self) -> Op {
        let mut op = Op::zero();
        for a in self.roots() {
            for b in self.roots() {
                if let Some(s) = self.datum.sum(a, b) {
                    op.add_assign(&self.triple(&q(-self.datum.n(a, b)) * &half(), a.negate(), b.negate(), s));
                }
            }
            op.add_assign(&self.c(a.negate()).compose(&self.vl(a)));
        }
        op
    }

    /// `t_{a}` for `a > 0` and `t_{-a}`: the mixed-sign part of `D_rel`.
    pub fn t(&self, a: Root) -> Op {
        let alpha = if a.is_positive() { a } else { a.negate() };
        let mut op = Op::zero();
        for b in self.pos() {
            let Some(diff) = self.datum.sum(b, alpha.negate()) else { continue };
            if !diff.is_positive() {
                continue;
            }
            let n = q(-self.datum.n(alpha, b.negate()));
            if a.is_positive() {
                // -N_{a,-b} c^b b_{a-b}
                op.add_assign(&self.w(n, &[self.lay.c(b), self.lay.b(diff.negate())]));
            } else {
                // -N_{a,-b} c^{-b} b_{b-a}
                op.add_assign(&self.w(n, &[self.lay.c(b.negate()), self.lay.b(diff)]));
            }
        }
        op
    }

    /// `dbar = -1/2 sum_{a,b>0} N_ab c^{-a} c^{-b} b_{a+b}`.
    pub fn partial_bar(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            for b in self.pos() {
                if let Some(s) = self.datum.sum(a, b) {
                    op.add_assign(&self.triple(&q(-self.datum.n(a, b)) * &half(), a.negate(), b.negate(), s));
                }
            }
        }
        op
    }

    /// `d = -1/2 sum_{a,b>0} N_ab c^a c^b b_{-a-b}`.
    pub fn partial(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            for b in self.pos() {
                if let Some(s) = self.datum.sum(a, b) {
                    op.add_assign(&self.triple(&q(-self.datum.n(a, b)) * &half(), a, b, s.negate()));
                }
            }
        }
        op
    }

    pub fn d_bar_v(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.c(a.negate()).compose(&self.vl(a)));
        }
        op
    }

    pub fn d_cal_v(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.c(a).compose(&self.vl(a.negate())));
        }
        op
    }

    pub fn d_bar_gh(&self) -> Op {
        let mut op = self.partial_bar();
        for a in self.pos() {
            op.add_assign(&self.c(a.negate()).compose(&self.t(a)));
        }
        op
    }

    pub fn d_cal_gh(&self) -> Op {
        let mut op = self.partial();
        for a in self.pos() {
            op.add_assign(&self.c(a).compose(&self.t(a.negate())));
        }
        op
    }

    /// Bidegree `(1, 0)` part of `D_rel`.
    pub fn d_bar(&self) -> Op {
        self.d_bar_v().add(&self.d_bar_gh())
    }

    /// Bidegree `(0, -1)` part of `D_rel`.
    pub fn d_cal(&self) -> Op {
        self.d_cal_v().add(&self.d_cal_gh())
    }

    /// `D^c = D_cal - D_bar`.
    pub fn d_c(&self) -> Op {
        self.d_cal().sub(&self.d_bar())
    }

    /// Explicit conjugate of `D_cal` with respect to the Kaehler product.
    pub fn d_cal_dagger_formula(&self) -> Op {
        let lay = &self.lay;
        let mut op = Op::zero();
        for a in self.pos() {
            for b in self.pos() {
                if let Some(s) = self.datum.sum(a, b) {
                    let c = &(&q(self.datum.n(a, b)) * &half()) * &(&self.r.r(s) / &(&self.r.r(a) * &self.r.r(b)));
                    op.add_assign(&self.w(c, &[lay.c(s), lay.b(a.negate()), lay.b(b.negate())]));
                }
            }
        }
        // sum_{a>0, b>a} N_{-a,b} r_{a-b}/(r_a r_b) c^{a-b} b_{-a} b_b, with b - a a positive root
        for a in self.pos() {
            for b in self.pos() {
                let Some(d) = self.datum.sum(a, b.negate()) else { continue };
                if d.is_positive() {
                    continue;
                }
                // the coefficient is r at the positive root b - a
                let c = &q(self.datum.n(a.negate(), b)) * &(&self.r.r(d.negate()) / &(&self.r.r(a) * &self.r.r(b)));
                op.add_assign(&self.w(c, &[lay.c(d), lay.b(a.negate()), lay.b(b)]));
            }
        }
        for a in self.pos() {
            op.add_assign(&self.b(a.negate()).compose(&self.vl(a)).scale(&-self.r.r(a).recip()));
        }
        op
    }

    // the D_{+-a} family

    /// `Lt_{+-a} = -sum_{b>0} N_ab c^{-+b} b_{+-(a+b)} - sum_{b>a} N_{a,-b} c^{+-b} b_{+-(a-b)}`.
    pub fn l_tilde(&self, a: Root) -> Op {
        let alpha = if a.is_positive() { a } else { a.negate() };
        let sg = |r: Root| if a.is_positive() { r } else { r.negate() };
        let mut op = Op::zero();
        for b in self.pos() {
            if let Some(s) = self.datum.sum(alpha, b) {
                op.add_assign(&self.w(q(-self.datum.n(alpha, b)), &[self.lay.c(sg(b.negate())), self.lay.b(sg(s))]));
            }
            if let Some(d) = self.datum.sum(b, alpha.negate()) {
                if d.is_positive() {
                    // alpha - b = -d
                    op.add_assign(&self.w(q(-self.datum.n(alpha, b.negate())), &[self.lay.c(sg(b)), self.lay.b(sg(d.negate()))]));
                }
            }
        }
        op
    }

    fn gamma_theta(&self, a: Root, theta: bool) -> Op {
        let alpha = if a.is_positive() { a } else { a.negate() };
        let sg = |r: Root| if a.is_positive() { r } else { r.negate() };
        let mut op = Op::zero();
        for b in self.pos() {
            if let Some(s) = self.datum.sum(alpha, b) {
                // Gamma carries N_{b,-(a+b)}, Theta carries N_{a,-(a+b)}
                let (num, n) = if theta {
                    (self.r.r(b), self.datum.n(alpha, s.negate()))
                } else {
                    (self.r.r(alpha), self.datum.n(b, s.negate()))
                };
                let c = &(&num / &self.r.r(s)) * &q(n);
                op.add_assign(&self.w(c, &[self.lay.c(sg(b.negate())), self.lay.b(sg(s))]));
            }
        }
        op
    }

    /// `Gamma_{+-a} = sum_{b>0} (r_a / r_{a+b}) N_{b,-(a+b)} c^{-+b} b_{+-(a+b)}`.
    pub fn gamma(&self, a: Root) -> Op {
        self.gamma_theta(a, false)
    }

    /// `Theta_{+-a} = sum_{b>0} (r_b / r_{a+b}) N_{a,-(a+b)} c^{-+b} b_{+-(a+b)}`.
    pub fn theta(&self, a: Root) -> Op {
        self.gamma_theta(a, true)
    }

    /// Ghost part `D_{+-a} = Lt_{+-a} + Gamma_{+-a}`.
    pub fn d_cal_root(&self, a: Root) -> Op {
        self.l_tilde(a).add(&self.gamma(a))
    }

    /// `D_a = D_cal_a + L_a` (ghost part plus constraint).
    pub fn big_d_root(&self, a: Root) -> Op {
        self.d_cal_root(a).add(&self.vl(a))
    }

    /// `Upsilon_a = sum_{0<b<a} N_{b,-a} c^b b_{a-b}`.
    pub fn upsilon_formula(&self, a: Root) -> Op {
        let mut op = Op::zero();
        for b in self.pos() {
            if let Some(d) = self.datum.sum(a, b.negate()) {
                if d.is_positive() {
                    op.add_assign(&self.w(q(self.datum.n(b, a.negate())), &[self.lay.c(b), self.lay.b(d)]));
                }
            }
        }
        op
    }

    /// `K = -sum_{a>0} (1/r_a) D_{-a} D_a`.
    pub fn kfrak(&self) -> Op {
        let mut op = Op::zero();
        for a in self.pos() {
            op.add_assign(&self.big_d_root(a.negate()).compose(&self.big_d_root(a)).scale(&-self.r.r(a).recip()));
        }
        op
    }

    /// Direct assembly of the residual
    /// `-sum_{a>0} (1/r_a) b_{-a} ( sum_{b>0} c^{-b} [Upsilon_a, D_cal_b] + [Gamma_a, X] )`
    /// where `X` is the ghost part of `D_cal` (or the whole `D_cal` when
    /// `with_module` is set).
    pub fn residual_direct(&self, with_module: bool) -> Op {
        let x = if with_module { self.d_cal() } else { self.d_cal_gh() };
        let mut op = Op::zero();
        for a in self.pos() {
            let ups = self.b(a).anticommutator(&self.d_cal_gh());
            let mut inner = Op::zero();
            for b in self.pos() {
                inner.add_assign(&self.c(b.negate()).compose(&ups.commutator(&self.d_cal_root(b))));
            }
            inner.add_assign(&self.gamma(a).commutator(&x));
            op.add_assign(&self.b(a.negate()).compose(&inner).scale(&-self.r.r(a).recip()));
        }
        op.simplify()
    }

    /// Formal conjugate under the neutral pairing (ghost words only, or with
    /// the Shapovalov adjoint on the module side).
    pub fn conj(&self, op: &Op) -> Op {
        let mut out = Op::zero();
        for t in &op.terms {
            let mut neg = false;
            let mut word = smallvec::SmallVec::new();
            for g in t.word.iter().rev() {
                let (n, h) = conj_gen(&self.lay, *g);
                neg ^= n;
                word.push(h);
            }
            let v = match &t.v {
                VPart::Id => VPart::Id,
                VPart::M(m) => VPart::M(Arc::new(self.module_adjoint(m))),
            };
            out.push(Term { coeff: if neg { -&t.coeff } else { t.coeff.clone() }, word, v });
        }
        out
    }

    /// `G^{-1} M^T G` with the Shapovalov Gram matrix.
    pub fn module_adjoint(&self, m: &SparseMatrix) -> SparseMatrix {
        let g = &self.md.module.gram;
        let n = self.dim_v();
        let mut ginv = SparseMatrix::zeros(n, n);
        let mut trip = Vec::new();
        for (mu, inv) in &self.md.gram_inv {
            let off = self.md.module.blocks[mu].start;
            for (i, j, x) in inv.triplets() {
                trip.push((off + i, off + j, x.clone()));
            }
        }
        if !trip.is_empty() {
            ginv = SparseMatrix::from_triplets(n, n, trip).unwrap();
        }
        ginv.mul(&m.transpose()).unwrap().mul(g).unwrap()
    }
}
