//! The residual `Box - gh - K` on the relative space, assembled from Gram
//! adjoints and, independently, from the root operators `D_a`, `Upsilon_a`
//! and `Gamma_a`.

use exact_linalg::{rank, Rational, SparseMatrix, SparseVec};
use serde::{Deserialize, Serialize};

use crate::cohomology::apply_all;
use crate::op::Op;
use crate::operators::Instance;
use crate::suite::Context;
use crate::BrstError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// `(state, coefficient)` pairs of the witness cochain.
    pub vector: Vec<(String, String)>,
    /// Its image under the residual.
    pub image: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureBlock {
    pub algebra: String,
    pub lambda: Vec<i64>,
    pub chi: Vec<String>,
    pub relative_dim: usize,
    pub residual_rank: usize,
    pub witness: Option<Witness>,
    /// Rank of the residual restricted to the anomalous relative subspace.
    pub anomalous_residual_rank: usize,
    pub anomalous_witness: Option<Witness>,
    pub assemblies_agree: bool,
    /// Whether the short closed form `Instance::residual_direct`, with the
    /// ghost part of `Dcal` (resp. all of `Dcal`) in `[Gamma_a, .]`, equals
    /// the residual.
    pub short_form_ghost_agrees: bool,
    pub short_form_full_agrees: bool,
}

impl ConjectureBlock {
    pub fn is_zero(&self) -> bool {
        self.residual_rank == 0
    }
}

/// `{Dcal_gh, Dbar_gh}` in closed form: `-sum_{a>0} c^{-a} c^a (<2 rho, H_a> + L_{H_a})`.
pub fn ghost_laplacian_core(x: &Instance) -> Op {
    let mut op = Op::zero();
    for a in x.datum.positive_roots() {
        let h = x.datum.coroot(a);
        let two_rho = &h.iter().cloned().sum::<Rational>() * &Rational::from_int(2);
        let inner = x.l_h(&h).add(&Op::scalar(two_rho));
        op.add_assign(&x.c(a.negate()).compose(&x.c(a)).compose(&inner).scale(&Rational::from_int(-1)));
    }
    op
}

/// Direct operator assembly of the residual.
pub fn residual_from_root_operators(x: &Instance) -> Op {
    let pos: Vec<_> = x.datum.positive_roots().collect();
    let dcal_gh = x.d_cal_gh();
    let dcal_v = x.d_cal_v();
    let core = ghost_laplacian_core(x);
    let mut op = x.gh().scale(&Rational::from_int(-1));
    for &a in &pos {
        let ri = x.r.r(a).recip();
        let ups = x.upsilon_formula(a);
        let gamma = x.gamma(a);
        let da = x.d_cal_root(a);
        let mut inner = Op::zero();
        for &b in &pos {
            let db = x.d_cal_root(b);
            let cb = x.c(b.negate());
            inner.add_assign(&ups.commutator(&cb).compose(&db));
            inner.add_assign(&cb.compose(&ups.commutator(&db)));
        }
        inner.add_assign(&x.b(a).commutator(&core).scale(&Rational::from_int(-1)));
        inner.add_assign(&dcal_gh.commutator(&gamma));
        inner.add_assign(&dcal_v.commutator(&da));
        inner.add_assign(&dcal_v.commutator(&x.vl(a)));
        op.add_assign(&x.gamma(a.negate()).compose(&x.big_d_root(a)).scale(&ri));
        op.add_assign(&x.b(a.negate()).compose(&inner).scale(&ri));
    }
    op.simplify()
}

fn witness(ctx: &Context, res: &SparseMatrix, v: &SparseVec) -> Witness {
    let desc = crate::kaehler::key_describe(ctx.x);
    let show = |w: &SparseVec| w.iter().map(|(i, c)| (desc(ctx.rel.states[*i]), c.to_string())).collect();
    Witness { vector: show(v), image: show(&res.mul_vec(v)) }
}

pub fn conjecture(ctx: &Context, algebra: &str, anomalous: &[SparseVec]) -> Result<ConjectureBlock, BrstError> {
    let x = ctx.x;
    let dcal = ctx.mat(&x.d_cal())?;
    let dd = ctx.dag(&dcal);
    let boxx = dcal.mul(&dd)?.add(&dd.mul(&dcal)?)?;
    let a = boxx.sub(&ctx.mat(&x.gh())?)?.sub(&ctx.mat(&x.kfrak())?)?;
    let b = ctx.mat(&residual_from_root_operators(x))?;
    let short_gh = ctx.mat(&x.residual_direct(false))?;
    let short_full = ctx.mat(&x.residual_direct(true))?;

    let residual_rank = rank(&a);
    let witness_v = (0..a.cols()).find(|&j| !a.col(j).is_empty()).map(|j| witness(ctx, &a, &vec![(j, Rational::one())]));
    let on_anom = apply_all(&a, anomalous);
    let anomalous_witness =
        anomalous.iter().find(|v| !a.mul_vec(v).is_empty()).map(|v| witness(ctx, &a, v));
    Ok(ConjectureBlock {
        algebra: algebra.into(),
        lambda: x.lambda.clone(),
        chi: x.r.chi.coords.iter().map(|c| c.to_string()).collect(),
        relative_dim: ctx.rel.len(),
        residual_rank,
        witness: witness_v,
        anomalous_residual_rank: rank(&on_anom),
        anomalous_witness,
        assemblies_agree: a == b,
        short_form_ghost_agrees: a == short_gh,
        short_form_full_agrees: a == short_full,
    })
}
