//! Run configuration, orchestration and the three output formats.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::check::{Checker, IdentityRecord, Status};
use crate::classical::{chevalley_eilenberg_betti, koszul_rows, sl_structure_constants};
use crate::cohomology::{absolute, bigraded, relative, CohomologyRow, Finding, HarmonicRow};
use crate::conjecture::{conjecture, ConjectureBlock};
use crate::operators::Instance;
use crate::suite::{identity_suite, Context};
use crate::{AnomalyCoefficients, BrstError, Family, RootDatum, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Cohomology,
    Conjecture,
    All,
}

impl Suite {
    fn identities(self) -> bool {
        matches!(self, Suite::Identities | Suite::All)
    }

    fn cohomology(self) -> bool {
        matches!(self, Suite::Cohomology | Suite::All)
    }

    fn conjecture(self) -> bool {
        matches!(self, Suite::Conjecture | Suite::All)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub family: Family,
    pub rank: usize,
    pub lambda: Vec<i64>,
    pub chi: Vec<i64>,
    pub suite: Suite,
    /// Accept a dominant `chi` on a Weyl chamber wall.
    pub allow_singular_chi: bool,
    /// Ceiling on the dimension of any explicitly materialised slice.
    pub max_dim: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(family: Family, rank: usize, lambda: &[i64], chi: &[i64]) -> RunConfig {
        RunConfig {
            family,
            rank,
            lambda: lambda.to_vec(),
            chi: chi.to_vec(),
            suite: Suite::All,
            allow_singular_chi: false,
            max_dim: 1 << 16,
            seed: 0,
        }
    }

    pub fn algebra(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// Validates the configuration and builds the instance.
    pub fn instance(&self) -> Result<Instance, BrstError> {
        let datum = RootDatum::new(self.family, self.rank)?;
        if self.lambda.len() != self.rank {
            return Err(BrstError::Config(format!("lambda has {} coordinates, rank is {}", self.lambda.len(), self.rank)));
        }
        if self.lambda.iter().any(|&c| c < 0) {
            return Err(BrstError::Config(format!("lambda {:?} is not dominant", self.lambda)));
        }
        let r = AnomalyCoefficients::with_policy(&datum, &Weight::from_ints(&self.chi), self.allow_singular_chi)?;
        Instance::new(datum, &self.lambda, r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalSection {
    /// `d^nil` on the ghost space with the anomaly switched off.
    pub koszul: Vec<CohomologyRow>,
    /// Chevalley-Eilenberg Betti numbers from the matrix realisation (type A only).
    pub matrix_oracle: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySection {
    pub relative_dim: usize,
    pub relative: Vec<CohomologyRow>,
    pub harmonic: Vec<HarmonicRow>,
    pub bigraded: Vec<CohomologyRow>,
    pub absolute: Vec<CohomologyRow>,
    /// `(degree, C(l, s) dim T)` predicted from the relative harmonic space.
    pub absolute_expected: Vec<(String, usize)>,
    pub root_component_dim: usize,
    pub gupta_bleuler_dim: usize,
    /// Harmonic degree-zero content outside bidegree (0, 0).
    pub higher_bidegree_dim_zero: usize,
    pub classical: ClassicalSection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub algebra: String,
    pub arithmetic_mode: String,
    pub seed: u64,
    pub identities: Vec<IdentityRecord>,
    pub cohomology: Option<CohomologySection>,
    pub conjecture: Option<ConjectureBlock>,
    pub findings: Vec<Finding>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.identities.iter().filter(|r| r.failed()).count()
    }

    /// 0 when everything passes, 2 on an identity failure, 3 on a finding.
    pub fn exit_code(&self) -> i32 {
        if self.failures() > 0 {
            2
        } else if !self.findings.is_empty() {
            3
        } else {
            0
        }
    }
}

/// Unified view of the cohomology tables, keyed by flavor and degree.
pub fn cohomology_rows(rep: &VerificationReport) -> Vec<&CohomologyRow> {
    let Some(c) = &rep.cohomology else { return Vec::new() };
    c.relative.iter().chain(&c.bigraded).chain(&c.absolute).chain(&c.classical.koszul).collect()
}

pub fn run(cfg: &RunConfig) -> Result<VerificationReport, BrstError> {
    let x = cfg.instance()?;
    let ctx = Context::new(&x, cfg.max_dim)?;
    let checker = Checker { seed: cfg.seed, ..Checker::default() };
    let mut identities = Vec::new();
    let mut findings = Vec::new();
    if cfg.suite.identities() {
        identities.extend(identity_suite(&ctx, &checker)?);
    }
    let mut cohomology = None;
    let mut conj = None;
    if cfg.suite.cohomology() || cfg.suite.conjecture() {
        let rel = relative(&ctx, cfg.seed)?;
        if cfg.suite.cohomology() {
            identities.extend(rel.checks.iter().cloned());
            for c in rel.checks.iter().filter(|c| c.failed()) {
                findings.push(Finding { id: c.id.clone(), detail: c.counterexample.clone().unwrap_or_default() });
            }
            findings.extend(rel.findings.iter().cloned());
            let (bigraded_rows, rec) = bigraded(&ctx, &rel.jp)?;
            identities.push(rec);
            let (absolute_rows, expected) = match absolute(&ctx, &rel, cfg.max_dim) {
                Ok(abs) => {
                    identities.extend(abs.checks);
                    findings.extend(abs.findings);
                    (abs.rows, abs.expected.iter().map(|(d, n)| (d.to_string(), *n)).collect())
                }
                Err(e @ BrstError::DimensionLimit { .. }) => {
                    for id in ["absolute_contains_relative", "absolute_reconstruction"] {
                        identities.push(IdentityRecord::skipped(id, "A", e.to_string()));
                    }
                    (Vec::new(), Vec::new())
                }
                Err(e) => return Err(e),
            };
            let ghost_states = 1usize.checked_shl(x.datum.dim() as u32).unwrap_or(usize::MAX);
            let koszul = if ghost_states <= cfg.max_dim { koszul_rows(&x)? } else { Vec::new() };
            let matrix_oracle = (cfg.family == Family::A && cfg.rank <= 2)
                .then(|| chevalley_eilenberg_betti(&sl_structure_constants(cfg.rank + 1)));
            if ghost_states > cfg.max_dim {
                let reason = format!("ghost space has dimension {ghost_states}, above the limit {}", cfg.max_dim);
                identities.push(IdentityRecord::skipped("classical_cohomology_oracle", "C", reason));
            } else if let Some(m) = &matrix_oracle {
                let k: Vec<usize> = koszul.iter().map(|r| r.cohomology).collect();
                let failure = (k != *m).then(|| format!("Koszul route {k:?} vs matrix realisation {m:?}"));
                identities.push(IdentityRecord::exact("classical_cohomology_oracle", "C", k.len() as u64, failure));
            }
            cohomology = Some(CohomologySection {
                relative_dim: ctx.rel.len(),
                relative: rel.rows.clone(),
                harmonic: rel.harmonic_rows.clone(),
                bigraded: bigraded_rows,
                absolute: absolute_rows,
                absolute_expected: expected,
                root_component_dim: rel.root_component_dim,
                gupta_bleuler_dim: rel.gupta_bleuler_dim,
                higher_bidegree_dim_zero: rel.higher_bidegree_dim_zero,
                classical: ClassicalSection { koszul, matrix_oracle },
            });
        }
        if cfg.suite.conjecture() {
            let c = conjecture(&ctx, &cfg.algebra(), &rel.anomalous_basis())?;
            let failure = (!c.assemblies_agree).then(|| "Gram-adjoint and root-operator assemblies differ".to_string());
            identities.push(IdentityRecord::exact("residual_assemblies_agree", "C_rel(V)", 1, failure));
            conj = Some(c);
        }
    }
    Ok(VerificationReport {
        config: cfg.clone(),
        algebra: cfg.algebra(),
        arithmetic_mode: "exact-rational".into(),
        seed: cfg.seed,
        identities,
        cohomology,
        conjecture: conj,
        findings,
    })
}

pub fn to_json(rep: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(rep).expect("report serialises");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<VerificationReport, serde_json::Error> {
    serde_json::from_str(s)
}

pub fn to_csv(rep: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["flavor", "degree", "bidegree", "cochains", "cocycles", "coboundaries", "cohomology"]).unwrap();
    for r in cohomology_rows(rep) {
        let bd = r.bidegree.map(|(p, q)| format!("({p},{q})")).unwrap_or_default();
        w.write_record([
            r.flavor.clone(),
            r.degree.clone(),
            bd,
            r.cochains.to_string(),
            r.cocycles.to_string(),
            r.coboundaries.to_string(),
            r.cohomology.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn to_text(rep: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} lambda={:?} chi={:?} seed={} ({})", rep.algebra, rep.config.lambda, rep.config.chi, rep.seed, rep.arithmetic_mode);
    for r in &rep.identities {
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let _ = write!(s, "{tag} {} [{}] {}/{}", r.id, r.domain, r.checked, r.total);
        if let Some(c) = &r.counterexample {
            let _ = write!(s, ": {c}");
        }
        s.push('\n');
    }
    for r in cohomology_rows(rep) {
        let bd = r.bidegree.map(|(p, q)| format!(" ({p},{q})")).unwrap_or_default();
        let _ = writeln!(s, "H {} {}{}: {}", r.flavor, r.degree, bd, r.cohomology);
    }
    if let Some(c) = &rep.conjecture {
        if c.is_zero() {
            let _ = writeln!(s, "conjecture residual: ZERO");
        } else {
            let _ = writeln!(s, "conjecture residual: NONZERO (rank {})", c.residual_rank);
        }
    }
    for f in &rep.findings {
        let _ = writeln!(s, "finding {}: {}", f.id, f.detail);
    }
    s
}
