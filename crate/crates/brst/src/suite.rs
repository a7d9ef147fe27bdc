//! The structural identity suite for one instance.

use exact_linalg::{certify_positive_definite, Rational, SparseMatrix};

use crate::ghost::Gen;
use crate::check::{Checker, Coverage, Domain, IdentityRecord, Status};
use crate::chevalley::{anomaly_cocycle, root_checks};
use crate::kaehler::{dagger, dagger_closed_form, key_describe, star_mask, KBlock};
use crate::op::{basis, Expr, Key, Op};
use crate::operators::Instance;
use crate::root_system::Root;
use crate::space::{materialize, Block, Blocks};
use crate::BrstError;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Combines sub-checks into one record.
pub fn merge(id: &str, domain: &str, parts: Vec<(String, IdentityRecord)>) -> IdentityRecord {
    let mut out = IdentityRecord {
        id: id.into(),
        domain: domain.into(),
        checked: 0,
        total: 0,
        coverage: Coverage::Full,
        status: Status::Pass,
        counterexample: None,
    };
    for (label, r) in parts {
        out.checked += r.checked;
        out.total += r.total;
        if r.coverage == Coverage::Sampled {
            out.coverage = Coverage::Sampled;
        }
        if r.status == Status::Fail && out.status == Status::Pass {
            out.status = Status::Fail;
            out.counterexample = r.counterexample.map(|c| format!("{label}: {c}"));
        }
    }
    out
}

/// Shared data for the checks of one instance.
pub struct Context<'a> {
    pub x: &'a Instance,
    pub blocks: Blocks,
    pub rel: Block,
    pub krel: KBlock,
}

impl<'a> Context<'a> {
    pub fn new(x: &'a Instance, max_dim: usize) -> Result<Context<'a>, BrstError> {
        let blocks = Blocks::new(x)?;
        let rel = blocks
            .relative(x.lay.l)
            .cloned()
            // no state of weight chi - (positive root sum): the relative space is zero
            .unwrap_or_else(|| Block::new(vec![Rational::zero(); x.lay.l], Vec::new()));
        if rel.len() > max_dim {
            return Err(BrstError::DimensionLimit { slice: "relative space".into(), dim: rel.len(), limit: max_dim });
        }
        let krel = KBlock::new(x, &rel)?;
        Ok(Context { x, blocks, rel, krel })
    }

    pub fn mat(&self, op: &Op) -> Result<SparseMatrix, BrstError> {
        materialize(op, &self.rel, &self.rel)
    }

    pub fn dag(&self, m: &SparseMatrix) -> SparseMatrix {
        dagger(m, &self.krel, &self.krel)
    }

    /// Block `B_{-shift}` for an operator raising the block weight by `shift`.
    pub fn source_block(&self, shift: &[i64]) -> Option<&Block> {
        let neg: Vec<i64> = shift.iter().map(|v| -v).collect();
        self.blocks.shifted(self.x, &self.rel.w, &neg)
    }

    pub fn relative_domain(&self) -> Domain {
        Domain::new("C_rel(V)", self.rel.states.clone())
    }
}

fn ghost_domain(x: &Instance) -> Domain {
    Domain::new("C", (0..1u64 << x.lay.modes()).map(|m| (m, 0)).collect())
}

fn total_domain(x: &Instance) -> Domain {
    let dv = x.dim_v() as u32;
    let mut s = Vec::with_capacity((1usize << x.lay.modes()) * dv as usize);
    for m in 0..1u64 << x.lay.modes() {
        for v in 0..dv {
            s.push((m, v));
        }
    }
    Domain::new("C(V)", s)
}

fn polarized_domain(x: &Instance) -> Domain {
    let dv = x.dim_v() as u32;
    let mut s = Vec::new();
    for m in 0..1u64 << x.lay.modes() {
        if x.lay.split(m).2 == 0 {
            for v in 0..dv {
                s.push((m, v));
            }
        }
    }
    Domain::new("P", s)
}

fn root_name(x: &Instance, a: Root) -> String {
    format!("{:?}", x.datum.coords(a))
}

/// Runs the whole suite. Records appear in a fixed order.
pub fn identity_suite(ctx: &Context, checker: &Checker) -> Result<Vec<IdentityRecord>, BrstError> {
    let x = ctx.x;
    let mut out = Vec::new();
    out.extend(root_data_records(x));
    out.extend(ghost_records(x, checker));
    out.extend(total_records(x, checker));
    out.extend(relative_records(ctx, checker)?);
    out.extend(kaehler_records(ctx)?);
    out.extend(family_records(ctx, checker)?);
    Ok(out)
}

fn root_data_records(x: &Instance) -> Vec<IdentityRecord> {
    let mut out: Vec<IdentityRecord> = root_checks(&x.datum)
        .into_iter()
        .map(|c| IdentityRecord::exact(c.name, "root system", c.cases as u64, c.failure))
        .collect();
    let c = anomaly_cocycle(&x.datum, &x.r.chi, true);
    out.push(IdentityRecord::exact(c.name, "root triples", c.cases as u64, c.failure));

    // module: conjugation and the centrally extended action
    let md = &x.md;
    let mut fail = None;
    let mut cases = 0;
    for a in x.datum.all_roots() {
        cases += 1;
        let adj = x.module_adjoint(md.root_op(&x.datum, a));
        let want = md.root_op(&x.datum, a.negate()).scale(&q(-1));
        if adj != want && fail.is_none() {
            fail = Some(format!("L_a* != -L_-a at {}", root_name(x, a)));
        }
    }
    out.push(IdentityRecord::exact("module_conjugation", "V", cases, fail));

    let mut fail = None;
    let mut cases = 0;
    let n = x.dim_v();
    for a in x.datum.all_roots() {
        for b in x.datum.all_roots() {
            cases += 1;
            let (la, lb) = (md.root_op(&x.datum, a), md.root_op(&x.datum, b));
            let br = la.mul(lb).unwrap().sub(&lb.mul(la).unwrap()).unwrap();
            let want = if a == b.negate() {
                let h = x.datum.coroot(a);
                let chi_h: Rational = h.iter().zip(&x.r.chi.coords).map(|(p, c)| p * c).sum();
                md.cartan_combination(&h).add(&SparseMatrix::identity(n).scale(&chi_h)).unwrap().scale(&q(-1))
            } else if let Some(s) = x.datum.sum(a, b) {
                md.root_op(&x.datum, s).scale(&q(x.datum.n(a, b)))
            } else {
                SparseMatrix::zeros(n, n)
            };
            if br != want && fail.is_none() {
                fail = Some(format!("[L_a, L_b] at {}, {}", root_name(x, a), root_name(x, b)));
            }
        }
        for i in 0..x.lay.l {
            cases += 1;
            let (li, la) = (&md.cartan_ops[i], md.root_op(&x.datum, a));
            let br = li.mul(la).unwrap().sub(&la.mul(li).unwrap()).unwrap();
            if br != la.scale(&q(x.datum.value(a, i))) && fail.is_none() {
                fail = Some(format!("[L_i, L_a] at i={i}, {}", root_name(x, a)));
            }
        }
    }
    out.push(IdentityRecord::exact("constraint_algebra_on_module", "V", cases, fail));
    out.push(IdentityRecord::exact(
        "module_shapovalov_positive",
        "V",
        n as u64,
        match certify_positive_definite(&x.md.module.gram) {
            Ok(true) => None,
            Ok(false) => Some("Shapovalov form is not positive definite".into()),
            Err(e) => Some(e.to_string()),
        },
    ));
    out
}

fn ghost_records(x: &Instance, checker: &Checker) -> Vec<IdentityRecord> {
    let dom = ghost_domain(x);
    let desc = key_describe(x);
    let chk = |id: &str, e: &Expr| checker.check(id, &dom, e, &desc);
    let mut out = Vec::new();
    let roots: Vec<Root> = x.datum.all_roots().collect();
    let pos: Vec<Root> = x.datum.positive_roots().collect();
    let l = x.lay.l;

    // Clifford relations
    let gens = x.generators();
    let mut parts = Vec::new();
    for (i, (na, ga)) in gens.iter().enumerate() {
        for (nb, gb) in gens.iter().skip(i) {
            let a = Op::gen(*ga);
            let b = Op::gen(*gb);
            // {g, h} = 1 exactly for the creator and annihilator of one mode
            let paired = matches!((ga, gb), (Gen::Create(p), Gen::Annihilate(q)) | (Gen::Annihilate(p), Gen::Create(q)) if p == q);
            let one = if paired { Op::identity() } else { Op::zero() };
            parts.push((format!("{{{na}, {nb}}}"), chk("clifford_relations", &Expr::anticommutator_is(&a, &b, &one))));
        }
    }
    out.push(merge("clifford_relations", "C", parts));

    let dn = x.d_nil();
    out.push(chk("koszul_differential_nilpotent", &Expr::new().plus(1, &[&dn, &dn])));

    // Koszul operators represent g
    let mut parts = Vec::new();
    for &a in &roots {
        let la = x.l_nil(a);
        for &b in &roots {
            let lb = x.l_nil(b);
            let want = if a == b.negate() {
                x.l_nil_h(&x.datum.coroot(a)).scale(&q(-1))
            } else if let Some(s) = x.datum.sum(a, b) {
                x.l_nil(s).scale(&q(x.datum.n(a, b)))
            } else {
                Op::zero()
            };
            parts.push((format!("[L_{}, L_{}]", root_name(x, a), root_name(x, b)), chk("", &Expr::commutator_is(&la, &lb, &want))));
        }
        for i in 0..l {
            let li = x.l_nil_cartan(i);
            let want = la.scale(&q(x.datum.value(a, i)));
            parts.push((format!("[L_{i}, L_{}]", root_name(x, a)), chk("", &Expr::commutator_is(&li, &la, &want))));
        }
    }
    out.push(merge("koszul_representation", "C", parts));

    // normal ordering: L_i = L^nil_i - 2<rho, H_i>, and both equal :L^nil:
    let mut parts = Vec::new();
    for i in 0..l {
        let li = x.l_cartan(i);
        let shifted = x.l_nil_cartan(i).sub(&Op::scalar(q(2)));
        parts.push((format!("i={i}"), chk("", &Expr::equal(&li, &shifted))));
        let no = x.normal_order(&x.l_nil_cartan(i));
        parts.push((format!(":L^nil_{i}:"), chk("", &Expr::equal(&li, &no))));
    }
    for &a in &roots {
        let no = x.normal_order(&x.l_nil(a));
        let la = x.l_root(a);
        parts.push((format!(":L^nil_{}:", root_name(x, a)), chk("", &Expr::equal(&la, &no))));
    }
    out.push(merge("normal_ordered_generators", "C", parts));

    // centrally extended ghost representation
    let mut parts = Vec::new();
    for &a in &roots {
        let la = x.l_root(a);
        for &b in &roots {
            let lb = x.l_root(b);
            let want = if a == b.negate() {
                let h = x.datum.coroot(a);
                let two_rho: Rational = &h.iter().cloned().sum::<Rational>() * &q(2);
                x.l_h(&h).add(&Op::scalar(two_rho)).scale(&q(-1))
            } else if let Some(s) = x.datum.sum(a, b) {
                x.l_root(s).scale(&q(x.datum.n(a, b)))
            } else {
                Op::zero()
            };
            parts.push((format!("[L_{}, L_{}]", root_name(x, a), root_name(x, b)), chk("", &Expr::commutator_is(&la, &lb, &want))));
        }
        for i in 0..l {
            let li = x.l_cartan(i);
            let want = la.scale(&q(x.datum.value(a, i)));
            parts.push((format!("[L_{i}, L_{}]", root_name(x, a)), chk("", &Expr::commutator_is(&li, &la, &want))));
        }
    }
    out.push(merge("ghost_central_extension", "C", parts));

    let d = x.d();
    let rho = x.rho_op();
    let rhs = dn.sub(&rho.scale(&q(2)));
    out.push(chk("ghost_differential_decomposition", &Expr::equal(&d, &rhs)));

    let curv = x.cc_sum(|a| x.datum.coroot(a).iter().cloned().sum::<Rational>()).scale(&q(-2));
    out.push(chk("ghost_curvature", &Expr::new().plus(1, &[&d, &d]).plus(-1, &[&curv])));

    let ds = x.conj(&d);
    out.push(chk("ghost_differential_symmetric", &Expr::equal(&ds, &d)));

    // gradings
    let ght = x.gh_tot();
    let mut parts = vec![("[gh_tot, d] = d".to_string(), chk("", &Expr::commutator_is(&ght, &d, &d)))];
    for &a in &pos {
        let c = x.c(a.negate());
        parts.push((format!("[gh_tot, c^-{}]", root_name(x, a)), chk("", &Expr::commutator_is(&ght, &c, &c))));
    }
    let diag = {
        let mut fail = None;
        for m in 0..1u64 << x.lay.modes() {
            let outv = ght.apply(&basis((m, 0)));
            let want = Rational::new(x.lay.gh_tot2(m), 2);
            let got = outv.get(&(m, 0)).cloned().unwrap_or_else(Rational::zero);
            if outv.len() > usize::from(!want.is_zero()) || got != want {
                fail = Some(format!("gh_tot on {}", x.lay.describe(m)));
                break;
            }
        }
        IdentityRecord::exact("", "C", 1u64 << x.lay.modes(), fail)
    };
    parts.push(("gh_tot eigenvalues".into(), diag));
    out.push(merge("ghost_number_grading", "C", parts));

    // vacuum
    let mut parts = Vec::new();
    let vac = Domain::new("w", vec![(0, 0)]);
    parts.push(("d w = 0".to_string(), checker.check("", &vac, &Expr::new().plus(1, &[&d]), &desc)));
    for i in 0..l {
        let li = x.l_cartan(i);
        parts.push((format!("L_{i} w = 0"), checker.check("", &vac, &Expr::new().plus(1, &[&li]), &desc)));
    }
    let shift = Op::scalar(Rational::new(x.lay.l as i64, 2));
    parts.push(("gh_tot w = -l/2 w".into(), checker.check("", &vac, &Expr::new().plus(1, &[&ght]).plus(1, &[&shift]), &desc)));
    out.push(merge("ghost_vacuum", "w", parts));

    // sl(2) and the degree operators
    let jp = x.j_plus();
    let jm = x.j_minus();
    let ghr = x.gh_rel();
    let ghb = x.gh_bar();
    let gh = x.gh();
    let deg = x.deg();
    let jp2 = jp.scale(&q(2));
    let jm2 = jm.scale(&q(-2));
    let jmn = jm.scale(&q(-1));
    let jpn = jp.scale(&q(-1));
    let zero = Op::zero();
    let parts = vec![
        ("[J+, J-] = gh_rel".to_string(), chk("", &Expr::commutator_is(&jp, &jm, &ghr))),
        ("[gh_rel, J+] = 2J+".into(), chk("", &Expr::commutator_is(&ghr, &jp, &jp2))),
        ("[gh_rel, J-] = -2J-".into(), chk("", &Expr::commutator_is(&ghr, &jm, &jm2))),
    ];
    out.push(merge("sl2_relations", "C", parts));
    let mut parts = vec![
        ("[ghbar, J+] = J+".to_string(), chk("", &Expr::commutator_is(&ghb, &jp, &jp))),
        ("[ghbar, J-] = -J-".into(), chk("", &Expr::commutator_is(&ghb, &jm, &jmn))),
        ("[gh, J+] = -J+".into(), chk("", &Expr::commutator_is(&gh, &jp, &jpn))),
        ("[gh, J-] = J-".into(), chk("", &Expr::commutator_is(&gh, &jm, &jm))),
        ("[deg, J+] = 0".into(), chk("", &Expr::commutator_is(&deg, &jp, &zero))),
        ("[deg, J-] = 0".into(), chk("", &Expr::commutator_is(&deg, &jm, &zero))),
    ];
    for &a in &roots {
        let b = x.b(a);
        let r_abs = x.r.r(if a.is_positive() { a } else { a.negate() });
        let want = x.c(a).scale(&-&(&q(a.sign()) * &r_abs));
        parts.push((format!("[J+, b_{}]", root_name(x, a)), chk("", &Expr::commutator_is(&jp, &b, &want))));
    }
    out.push(merge("degree_relations", "C", parts));

    // cluster states are anomalous
    let mut parts = Vec::new();
    for (i, &a) in pos.iter().enumerate() {
        let g = x.cluster(a);
        parts.push((format!("G_{}", root_name(x, a)), checker.check("", &vac, &Expr::new().plus(1, &[&jp, &g]), &desc)));
        for &b in &pos[i + 1..] {
            let g = x.cluster_pair(a, b);
            parts.push((
                format!("G_{},{}", root_name(x, a), root_name(x, b)),
                checker.check("", &vac, &Expr::new().plus(1, &[&jp, &g]), &desc),
            ));
        }
    }
    out.push(merge("clusters_anomalous", "w", parts));
    out
}

fn total_records(x: &Instance, checker: &Checker) -> Vec<IdentityRecord> {
    let dom = total_domain(x);
    let desc = key_describe(x);
    let chk = |e: &Expr| checker.check("", &dom, e, &desc);
    let mut out = Vec::new();
    let roots: Vec<Root> = x.datum.all_roots().collect();
    let l = x.lay.l;
    let big_d = x.big_d();
    let jp = x.j_plus();

    out.push(merge(
        "total_curvature",
        "C(V)",
        vec![("D^2 = -J+".into(), chk(&Expr::new().plus(1, &[&big_d, &big_d]).plus(1, &[&jp])))],
    ));

    let mut parts = Vec::new();
    for &a in &roots {
        let lt = x.ltot(a);
        let want = x.c(a).scale(&-x.r.r(a));
        parts.push((format!("[L^tot_{}, D]", root_name(x, a)), chk(&Expr::commutator_is(&lt, &big_d, &want))));
    }
    out.push(merge("total_generator_anomaly", "C(V)", parts));

    let zero = Op::zero();
    let mut parts = Vec::new();
    for i in 0..l {
        let lt = x.ltot_cartan(i);
        parts.push((format!("[L^tot_{i}, D]"), chk(&Expr::commutator_is(&lt, &big_d, &zero))));
    }
    out.push(merge("cartan_invariance", "C(V)", parts));

    let mut parts = Vec::new();
    for i in 0..l {
        let lt = x.ltot_cartan(i);
        let b = x.bi(i);
        parts.push((format!("{{b_{i}, D}}"), chk(&Expr::anticommutator_is(&b, &big_d, &lt))));
        let c = x.ci(i);
        let m = x.m_i(i);
        parts.push((format!("{{D, c^{i}}}"), chk(&Expr::anticommutator_is(&big_d, &c, &m))));
    }
    for &a in &roots {
        let lt = x.ltot(a);
        let b = x.b(a);
        parts.push((format!("{{b_{}, D}}", root_name(x, a)), chk(&Expr::anticommutator_is(&b, &big_d, &lt))));
    }
    out.push(merge("total_generators", "C(V)", parts));

    // D = D_rel + sum c^i L^tot_i + sum M^i b_i
    let mut rhs = x.d_rel();
    for i in 0..l {
        rhs.add_assign(&x.ci(i).compose(&x.ltot_cartan(i)));
        rhs.add_assign(&x.m_i(i).compose(&x.bi(i)));
    }
    out.push(merge("relative_decomposition", "C(V)", vec![("D".into(), chk(&Expr::equal(&big_d, &rhs)))]));

    let ds = x.conj(&big_d);
    out.push(merge("total_differential_symmetric", "C(V)", vec![("D* = D".into(), chk(&Expr::equal(&ds, &big_d)))]));

    // centrally extended total algebra
    let mut parts = Vec::new();
    for &a in &roots {
        let la = x.ltot(a);
        for &b in &roots {
            let lb = x.ltot(b);
            let want = if a == b.negate() {
                x.ltot_h(&x.datum.coroot(a)).add(&Op::scalar(x.r.r(a))).scale(&q(-1))
            } else if let Some(s) = x.datum.sum(a, b) {
                x.ltot(s).scale(&q(x.datum.n(a, b)))
            } else {
                Op::zero()
            };
            parts.push((format!("[L^tot_{}, L^tot_{}]", root_name(x, a), root_name(x, b)), chk(&Expr::commutator_is(&la, &lb, &want))));
        }
        for i in 0..l {
            let li = x.ltot_cartan(i);
            let want = la.scale(&q(x.datum.value(a, i)));
            parts.push((format!("[L^tot_{i}, L^tot_{}]", root_name(x, a)), chk(&Expr::commutator_is(&li, &la, &want))));
        }
    }
    out.push(merge("total_central_extension", "C(V)", parts));

    // polarized subcomplex
    let pdom = polarized_domain(x);
    let parts = vec![("J+ P = 0".to_string(), checker.check("", &pdom, &Expr::new().plus(1, &[&jp]), &desc))];
    out.push(merge("polarized_in_anomalous", "P", parts));
    let lay = x.lay;
    out.push(checker.check_support("polarized_subcomplex", &pdom, &big_d, &move |_, t: Key| lay.split(t.0).2 == 0, &desc));
    out
}

fn relative_records(ctx: &Context, checker: &Checker) -> Result<Vec<IdentityRecord>, BrstError> {
    let x = ctx.x;
    let desc = key_describe(x);
    let mut out = Vec::new();
    let cf = Domain::new("C_0(V)", ctx.blocks.all_states());
    let rdom = ctx.relative_domain();
    let drel = x.d_rel();
    let dbar = x.d_bar();
    let dcal = x.d_cal();
    let jp = x.j_plus();
    let split = dbar.add(&dcal);
    let big_d = x.big_d();
    let parts = vec![
        ("D_rel = Dbar + Dcal".to_string(), checker.check("", &cf, &Expr::equal(&drel, &split), &desc)),
        ("D = D_rel on C_rel".into(), checker.check("", &rdom, &Expr::equal(&big_d, &drel), &desc)),
        ("Dbar^2 = 0".into(), checker.check("", &rdom, &Expr::new().plus(1, &[&dbar, &dbar]), &desc)),
        ("Dcal^2 = 0".into(), checker.check("", &rdom, &Expr::new().plus(1, &[&dcal, &dcal]), &desc)),
        (
            "{Dbar, Dcal} = -J+".into(),
            checker.check("", &rdom, &Expr::new().plus(1, &[&dbar, &dcal]).plus(1, &[&dcal, &dbar]).plus(1, &[&jp]), &desc),
        ),
    ];
    out.push(merge("relative_split", "C_rel(V)", parts));

    let lay = x.lay;
    let bideg = |k: Key| lay.bidegree(k.0);
    let parts = vec![
        (
            "Dbar (1,0)".to_string(),
            checker.check_support("", &cf, &dbar, &move |a: Key, b: Key| {
                let (p, q0) = bideg(a);
                bideg(b) == (p + 1, q0)
            }, &desc),
        ),
        (
            "Dcal (0,-1)".to_string(),
            checker.check_support("", &cf, &dcal, &move |a: Key, b: Key| {
                let (p, q0) = bideg(a);
                q0 >= 1 && bideg(b) == (p, q0 - 1)
            }, &desc),
        ),
    ];
    out.push(merge("bidegree_split", "C_0(V)", parts));
    Ok(out)
}

fn kaehler_records(ctx: &Context) -> Result<Vec<IdentityRecord>, BrstError> {
    let x = ctx.x;
    let mut out = Vec::new();
    let n = ctx.rel.len();
    let id = SparseMatrix::identity(n);
    let dom = "C_rel(V)";

    // star
    let mut fail = None;
    for k in &ctx.rel.states {
        let (_, m) = star_mask(x, k.0);
        let (p, q0) = x.lay.bidegree(k.0);
        if x.lay.bidegree(m) != (q0, p) && fail.is_none() {
            fail = Some(format!("star does not swap the bidegree of {}", x.lay.describe(k.0)));
        }
    }
    out.push(merge(
        "hodge_star",
        dom,
        vec![
            ("star^2 = 1".into(), IdentityRecord::matrices("", dom, &ctx.krel.star.mul(&ctx.krel.star)?, &id)),
            ("bidegree swap".into(), IdentityRecord::exact("", dom, n as u64, fail)),
        ],
    ));

    // Gram positivity on the relative space and on every neighbour block used below
    let mut parts = vec![("C_rel".to_string(), pd_record(&ctx.krel.gram))];
    let mut neighbours = Vec::new();
    for a in x.datum.all_roots() {
        if let Some(b) = ctx.source_block(&x.datum.coords(a)) {
            let kb = KBlock::new(x, b)?;
            parts.push((format!("block {:?}", b.w), pd_record(&kb.gram)));
            neighbours.push((a, b, kb));
        }
    }
    out.push(merge("kaehler_positive", dom, parts));

    // elementary conjugation rules and the closed form of the dagger
    let mut parts = Vec::new();
    let mut closed = Vec::new();
    for (a, src, ks) in &neighbours {
        let a = *a;
        let ra = x.r.r(if a.is_positive() { a } else { a.negate() });
        let c = materialize(&x.c(a), src, &ctx.rel)?;
        let dg = dagger(&c, ks, &ctx.krel);
        let want = materialize(&x.b(a.negate()).scale(&ra.recip()), &ctx.rel, src)?;
        parts.push((format!("c^{}", root_name(x, a)), IdentityRecord::matrices("", dom, &dg, &want)));
        let cf = dagger_closed_form(x, &x.c(a), 1, (src, ks), (&ctx.rel, &ctx.krel))?;
        closed.push((format!("c^{}", root_name(x, a)), IdentityRecord::matrices("", dom, &dg, &cf)));
        let b = materialize(&x.b(a), src, &ctx.rel)?;
        let dg = dagger(&b, ks, &ctx.krel);
        let want = materialize(&x.c(a.negate()).scale(&ra), &ctx.rel, src)?;
        parts.push((format!("b_{}", root_name(x, a)), IdentityRecord::matrices("", dom, &dg, &want)));
        let cf = dagger_closed_form(x, &x.b(a), 1, (src, ks), (&ctx.rel, &ctx.krel))?;
        closed.push((format!("b_{}", root_name(x, a)), IdentityRecord::matrices("", dom, &dg, &cf)));
    }
    out.push(merge("kaehler_conjugation", dom, parts));

    let drel = ctx.mat(&x.d_rel())?;
    let dbar = ctx.mat(&x.d_bar())?;
    let dcal = ctx.mat(&x.d_cal())?;
    let jp = ctx.mat(&x.j_plus())?;
    let jm = ctx.mat(&x.j_minus())?;
    let ghr = ctx.mat(&x.gh_rel())?;
    for (name, op, parity) in [
        ("D_rel", x.d_rel(), 1),
        ("Dbar", x.d_bar(), 1),
        ("Dcal", x.d_cal(), 1),
        ("J+", x.j_plus(), 0),
        ("J-", x.j_minus(), 0),
        ("gh_rel", x.gh_rel(), 0),
    ] {
        let m = ctx.mat(&op)?;
        let cf = dagger_closed_form(x, &op, parity, (&ctx.rel, &ctx.krel), (&ctx.rel, &ctx.krel))?;
        closed.push((name.to_string(), IdentityRecord::matrices("", dom, &ctx.dag(&m), &cf)));
    }
    out.push(merge("dagger_closed_form", dom, closed));

    let dcal_d = ctx.dag(&dcal);
    let dbar_d = ctx.dag(&dbar);
    let drel_d = ctx.dag(&drel);
    out.push(IdentityRecord::matrices("conjugate_formula", dom, &dcal_d, &ctx.mat(&x.d_cal_dagger_formula())?));
    out.push(IdentityRecord::matrices("sl2_conjugation", dom, &ctx.dag(&jp), &jm));

    let mm = |a: &SparseMatrix, b: &SparseMatrix| a.mul(b).unwrap();
    let add = |a: &SparseMatrix, b: &SparseMatrix| a.add(b).unwrap();
    let sub = |a: &SparseMatrix, b: &SparseMatrix| a.sub(b).unwrap();
    let comm = |a: &SparseMatrix, b: &SparseMatrix| sub(&mm(a, b), &mm(b, a));
    let acomm = |a: &SparseMatrix, b: &SparseMatrix| add(&mm(a, b), &mm(b, a));
    let neg = |a: &SparseMatrix| a.scale(&q(-1));

    out.push(merge(
        "anomalous_cocycle_conjugates",
        dom,
        vec![
            ("[J+, Dcal^dag] = -Dbar".into(), IdentityRecord::matrices("", dom, &comm(&jp, &dcal_d), &neg(&dbar))),
            ("[J+, Dbar^dag] = Dcal".into(), IdentityRecord::matrices("", dom, &comm(&jp, &dbar_d), &dcal)),
        ],
    ));

    let dc = sub(&dcal, &dbar);
    let dc_d = ctx.dag(&dc);
    let zero = SparseMatrix::zeros(n, n);
    out.push(merge(
        "conjugate_differential",
        dom,
        vec![
            ("{D_rel, D^c} = 0".into(), IdentityRecord::matrices("", dom, &acomm(&drel, &dc), &zero)),
            ("(D^c)^2 = J+".into(), IdentityRecord::matrices("", dom, &mm(&dc, &dc), &jp)),
        ],
    ));
    out.push(merge(
        "sl2_conjugate_differentials",
        dom,
        vec![
            ("[J+, D_rel^dag] = D^c".into(), IdentityRecord::matrices("", dom, &comm(&jp, &drel_d), &dc)),
            ("[J+, D^c dag] = -D_rel".into(), IdentityRecord::matrices("", dom, &comm(&jp, &dc_d), &neg(&drel))),
        ],
    ));

    // Laplacians
    let lap = acomm(&drel, &drel_d);
    let lap_c = acomm(&dc, &dc_d);
    let boxx = acomm(&dcal, &dcal_d);
    let boxb = acomm(&dbar, &dbar_d);
    out.push(merge(
        "laplacian_shared_relations",
        dom,
        vec![
            ("Lap = Box + Boxbar".into(), IdentityRecord::matrices("", dom, &lap, &add(&boxx, &boxb))),
            ("Lap = Lap^c".into(), IdentityRecord::matrices("", dom, &lap, &lap_c)),
            ("[J+, Lap] = 0".into(), IdentityRecord::matrices("", dom, &comm(&jp, &lap), &zero)),
            ("[J-, Lap] = 0".into(), IdentityRecord::matrices("", dom, &comm(&jm, &lap), &zero)),
        ],
    ));
    out.push(merge(
        "laplacian_broken_relations",
        dom,
        vec![
            ("[J+, Box] = J+".into(), IdentityRecord::matrices("", dom, &comm(&jp, &boxx), &jp)),
            ("[J-, Box] = -J-".into(), IdentityRecord::matrices("", dom, &comm(&jm, &boxx), &neg(&jm))),
            ("[J+, Boxbar] = -J+".into(), IdentityRecord::matrices("", dom, &comm(&jp, &boxb), &neg(&jp))),
            ("[J-, Boxbar] = J-".into(), IdentityRecord::matrices("", dom, &comm(&jm, &boxb), &jm)),
            ("[gh_rel, Box] = 0".into(), IdentityRecord::matrices("", dom, &comm(&ghr, &boxx), &zero)),
            ("[gh_rel, Boxbar] = 0".into(), IdentityRecord::matrices("", dom, &comm(&ghr, &boxb), &zero)),
        ],
    ));
    out.push(IdentityRecord::matrices("laplacian_difference", dom, &boxx, &sub(&boxb, &ghr)));
    out.push(merge(
        "mixed_relations",
        dom,
        vec![
            ("{D_rel^dag, D^c} = -gh_rel".into(), IdentityRecord::matrices("", dom, &acomm(&drel_d, &dc), &neg(&ghr))),
            ("{D^c dag, D_rel} = -gh_rel".into(), IdentityRecord::matrices("", dom, &acomm(&dc_d, &drel), &neg(&ghr))),
        ],
    ));

    // self-adjointness and nonnegativity through K Lap = D^T K D + (D^dag)^T K D^dag
    let k = &ctx.krel.gram;
    let mut parts = Vec::new();
    for (name, l, d, dd) in [
        ("Lap", &lap, &drel, &drel_d),
        ("Lap^c", &lap_c, &dc, &dc_d),
        ("Box", &boxx, &dcal, &dcal_d),
        ("Boxbar", &boxb, &dbar, &dbar_d),
    ] {
        parts.push((format!("{name} self-adjoint"), IdentityRecord::matrices("", dom, &ctx.dag(l), l)));
        let factor = add(&mm(&d.transpose(), &mm(k, d)), &mm(&dd.transpose(), &mm(k, dd)));
        parts.push((format!("{name} Gram factorization"), IdentityRecord::matrices("", dom, &mm(k, l), &factor)));
    }
    out.push(merge("laplacians_nonnegative", dom, parts));

    // reduction on the vacuum sector
    let mut red = Op::zero();
    for a in x.datum.positive_roots() {
        red.add_assign(&x.vl(a.negate()).compose(&x.vl(a)).scale(&(&q(-2) / &x.r.r(a))));
    }
    let red_m = ctx.mat(&red)?;
    let vac: Vec<usize> = (0..n).filter(|&i| ctx.rel.states[i].0 == 0).collect();
    out.push(IdentityRecord::matrices("laplacian_vacuum_reduction", "w (x) V", &lap.select_columns(&vac), &red_m.select_columns(&vac)));
    Ok(out)
}

fn pd_record(g: &SparseMatrix) -> IdentityRecord {
    let failure = match certify_positive_definite(g) {
        Ok(true) => None,
        Ok(false) => Some("not positive definite".into()),
        Err(e) => Some(e.to_string()),
    };
    IdentityRecord::exact("", "", g.rows() as u64, failure)
}

fn family_records(ctx: &Context, checker: &Checker) -> Result<Vec<IdentityRecord>, BrstError> {
    let x = ctx.x;
    let desc = key_describe(x);
    let gdom = ghost_domain(x);
    let tdom = Domain::new("C_0(V)", ctx.blocks.all_states());
    let dom = "C_rel(V)";
    let mut out = Vec::new();
    let pos: Vec<Root> = x.datum.positive_roots().collect();
    let roots: Vec<Root> = x.datum.all_roots().collect();

    // explicit forms
    let dbar_gh = x.d_bar_gh();
    let dcal_gh = x.d_cal_gh();
    let mut parts = Vec::new();
    for &a in &pos {
        let lt = x.l_tilde(a);
        let b = x.b(a);
        parts.push((format!("Lt_{}", root_name(x, a)), checker.check("", &gdom, &Expr::anticommutator_is(&b, &dbar_gh, &lt), &desc)));
        let lt = x.l_tilde(a.negate());
        let b = x.b(a.negate());
        parts.push((format!("Lt_-{}", root_name(x, a)), checker.check("", &gdom, &Expr::anticommutator_is(&b, &dcal_gh, &lt), &desc)));
        let ups = x.upsilon_formula(a);
        let b = x.b(a);
        parts.push((format!("Upsilon_{}", root_name(x, a)), checker.check("", &gdom, &Expr::anticommutator_is(&b, &dcal_gh, &ups), &desc)));
    }
    for &a in &roots {
        let d1 = x.d_cal_root(a);
        let d2 = x.t(a).add(&x.theta(a));
        parts.push((format!("t + Theta at {}", root_name(x, a)), checker.check("", &gdom, &Expr::equal(&d1, &d2), &desc)));
    }
    for &a in &pos {
        let dm = x.d_cal_root(a.negate());
        let dc = x.conj(&x.d_cal_root(a)).scale(&q(-1));
        parts.push((format!("D_-a = -D_a* at {}", root_name(x, a)), checker.check("", &gdom, &Expr::equal(&dm, &dc), &desc)));
    }
    out.push(merge("root_operator_expressions", "C", parts));

    // {Dcal_gh, Dbar_gh} in closed form
    let lhs = dcal_gh.anticommutator(&dbar_gh);
    let core = crate::conjecture::ghost_laplacian_core(x);
    out.push(merge(
        "ghost_laplacian_closed_form",
        "C",
        vec![
            ("ghost space".into(), checker.check("", &gdom, &Expr::equal(&lhs, &core), &desc)),
            ("relative space".into(), checker.check("", &ctx.relative_domain(), &Expr::equal(&lhs, &core), &desc)),
        ],
    ));

    // vacuum and brackets with generators
    let vac = Domain::new("w", vec![(0, 0)]);
    let mut parts = Vec::new();
    for &a in &roots {
        let d = x.d_cal_root(a);
        parts.push((format!("D_{} w", root_name(x, a)), checker.check("", &vac, &Expr::new().plus(1, &[&d]), &desc)));
    }
    for &a in &pos {
        let dm = x.d_cal_root(a.negate());
        for &b in &pos {
            let c = x.c(b.negate());
            let bb = x.b(b.negate());
            let (wc, wb) = match x.datum.sum(a, b) {
                Some(s) => {
                    let n = q(x.datum.n(a, s.negate()));
                    (x.c(s.negate()).scale(&-&n), x.b(s.negate()).scale(&-(&(&x.r.r(b) / &x.r.r(s)) * &n)))
                }
                None => (Op::zero(), Op::zero()),
            };
            parts.push((format!("[D_-{}, c^-{}]", root_name(x, a), root_name(x, b)), checker.check("", &gdom, &Expr::commutator_is(&dm, &c, &wc), &desc)));
            parts.push((format!("[D_-{}, b_-{}]", root_name(x, a), root_name(x, b)), checker.check("", &gdom, &Expr::commutator_is(&dm, &bb, &wb), &desc)));
        }
    }
    out.push(merge("root_operator_generators", "C", parts));

    // nilpotent subalgebra relations
    let mut parts = Vec::new();
    for &a in &pos {
        for &b in &pos {
            for sign in [1i64, -1] {
                let sa = if sign > 0 { a } else { a.negate() };
                let sb = if sign > 0 { b } else { b.negate() };
                let want_g = match x.datum.sum(a, b) {
                    Some(s) => x.d_cal_root(if sign > 0 { s } else { s.negate() }).scale(&q(x.datum.n(a, b))),
                    None => Op::zero(),
                };
                let (da, db) = (x.d_cal_root(sa), x.d_cal_root(sb));
                parts.push((
                    format!("[D_{}, D_{}] ghost", root_name(x, sa), root_name(x, sb)),
                    checker.check("", &gdom, &Expr::commutator_is(&da, &db, &want_g), &desc),
                ));
                let want_t = match x.datum.sum(a, b) {
                    Some(s) => x.big_d_root(if sign > 0 { s } else { s.negate() }).scale(&q(x.datum.n(a, b))),
                    None => Op::zero(),
                };
                let (da, db) = (x.big_d_root(sa), x.big_d_root(sb));
                parts.push((
                    format!("[D_{}, D_{}] total", root_name(x, sa), root_name(x, sb)),
                    checker.check("", &tdom, &Expr::commutator_is(&da, &db, &want_t), &desc),
                ));
            }
        }
    }
    out.push(merge("root_operator_nilpotent_relations", "C_0(V)", parts));

    // conjugation rules across blocks
    let mut parts = Vec::new();
    let mut tparts = Vec::new();
    for &a in &roots {
        let Some(src) = ctx.source_block(&x.datum.coords(a)) else { continue };
        let ks = KBlock::new(x, src)?;
        let pairs = [
            ("D", x.d_cal_root(a), x.d_cal_root(a.negate()).scale(&q(-1))),
            ("D total", x.big_d_root(a), x.big_d_root(a.negate()).scale(&q(-1))),
        ];
        for (name, op, want) in pairs {
            let m = materialize(&op, src, &ctx.rel)?;
            let w = materialize(&want, &ctx.rel, src)?;
            parts.push((format!("{name}_{}", root_name(x, a)), IdentityRecord::matrices("", dom, &dagger(&m, &ks, &ctx.krel), &w)));
        }
        let pairs = [
            ("t", x.t(a), x.theta(a.negate()).scale(&q(-1))),
            ("Theta", x.theta(a), x.t(a.negate()).scale(&q(-1))),
        ];
        for (name, op, want) in pairs {
            let m = materialize(&op, src, &ctx.rel)?;
            let w = materialize(&want, &ctx.rel, src)?;
            tparts.push((format!("{name}_{}", root_name(x, a)), IdentityRecord::matrices("", dom, &dagger(&m, &ks, &ctx.krel), &w)));
        }
    }
    out.push(merge("root_operator_conjugation", dom, parts));
    out.push(merge("t_theta_conjugation", dom, tparts));

    // split conjugates
    let mut dv_d = Op::zero();
    let mut dgh_d = Op::zero();
    let mut dbv_d = Op::zero();
    let mut dbgh_d = Op::zero();
    for &a in &pos {
        let s = -x.r.r(a).recip();
        dv_d.add_assign(&x.b(a.negate()).compose(&x.vl(a)).scale(&s));
        dgh_d.add_assign(&x.b(a.negate()).compose(&x.d_cal_root(a)).scale(&s));
        dbv_d.add_assign(&x.b(a).compose(&x.vl(a.negate())).scale(&s));
        dbgh_d.add_assign(&x.b(a).compose(&x.d_cal_root(a.negate())).scale(&s));
    }
    let parts = vec![
        ("Dcal_V".to_string(), IdentityRecord::matrices("", dom, &ctx.dag(&ctx.mat(&x.d_cal_v())?), &ctx.mat(&dv_d)?)),
        ("Dcal_gh".into(), IdentityRecord::matrices("", dom, &ctx.dag(&ctx.mat(&dcal_gh)?), &ctx.mat(&dgh_d)?)),
        ("Dbar_V".into(), IdentityRecord::matrices("", dom, &ctx.dag(&ctx.mat(&x.d_bar_v())?), &ctx.mat(&dbv_d)?)),
        ("Dbar_gh".into(), IdentityRecord::matrices("", dom, &ctx.dag(&ctx.mat(&dbar_gh)?), &ctx.mat(&dbgh_d)?)),
    ];
    out.push(merge("split_conjugates", dom, parts));

    // differentials through the root operators
    let mut dcal_sum = Op::zero();
    let mut dbar_sum = Op::zero();
    for &a in &pos {
        dcal_sum.add_assign(&x.c(a).compose(&x.big_d_root(a.negate())));
        dbar_sum.add_assign(&x.c(a.negate()).compose(&x.big_d_root(a)));
    }
    let dcal = x.d_cal();
    let dbar = x.d_bar();
    let parts = vec![
        ("Dcal".to_string(), checker.check("", &tdom, &Expr::equal(&dcal, &dcal_sum), &desc)),
        ("Dbar".into(), checker.check("", &tdom, &Expr::equal(&dbar, &dbar_sum), &desc)),
    ];
    out.push(merge("differentials_via_root_operators", "C_0(V)", parts));
    Ok(out)
}
