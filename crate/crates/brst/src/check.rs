//! Identity records and the lazy checker.

use std::hash::{Hash, Hasher};

use exact_linalg::SparseMatrix;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::op::{basis, Expr, Key, Op};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Full,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub domain: String,
    pub checked: u64,
    pub total: u64,
    pub coverage: Coverage,
    pub status: Status,
    pub counterexample: Option<String>,
}

impl IdentityRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Record for a check that could not run; `reason` goes in the counterexample slot.
    pub fn skipped(id: impl Into<String>, domain: impl Into<String>, reason: String) -> IdentityRecord {
        IdentityRecord {
            id: id.into(),
            domain: domain.into(),
            checked: 0,
            total: 0,
            coverage: Coverage::Full,
            status: Status::Skipped,
            counterexample: Some(reason),
        }
    }

    /// Record for a check that was carried out in full elsewhere.
    pub fn exact(id: impl Into<String>, domain: impl Into<String>, cases: u64, failure: Option<String>) -> IdentityRecord {
        IdentityRecord {
            id: id.into(),
            domain: domain.into(),
            checked: cases,
            total: cases,
            coverage: Coverage::Full,
            status: if failure.is_none() { Status::Pass } else { Status::Fail },
            counterexample: failure,
        }
    }

    /// Record for a matrix identity `lhs == rhs`.
    pub fn matrices(id: impl Into<String>, domain: impl Into<String>, lhs: &SparseMatrix, rhs: &SparseMatrix) -> IdentityRecord {
        let failure = if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
            Some(format!("shape {}x{} vs {}x{}", lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()))
        } else {
            (0..lhs.cols()).find(|&j| lhs.col(j) != rhs.col(j)).map(|j| {
                let diff = lhs.sub(rhs).unwrap();
                let (r, _, x) = diff.triplets().find(|t| t.1 == j).unwrap();
                format!("column {j}, row {r}: difference {x}")
            })
        };
        IdentityRecord::exact(id, domain, lhs.cols() as u64, failure)
    }
}

/// A finite set of basis states on which identities are checked.
pub struct Domain {
    pub name: String,
    pub states: Vec<Key>,
}

impl Domain {
    pub fn new(name: impl Into<String>, states: Vec<Key>) -> Domain {
        Domain { name: name.into(), states }
    }
}

/// Checker: full verification up to `limit` states, otherwise a seeded
/// uniform sample of `samples` states.
#[derive(Clone, Debug)]
pub struct Checker {
    pub limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Checker {
    fn default() -> Self {
        Checker { limit: 131072, samples: 200, seed: 0 }
    }
}

impl Checker {
    fn rng_for(&self, id: &str) -> ChaCha8Rng {
        let mut h = rustc_hash::FxHasher::default();
        id.hash(&mut h);
        ChaCha8Rng::seed_from_u64(self.seed ^ h.finish())
    }

    fn pick(&self, id: &str, dom: &Domain) -> (Vec<Key>, Coverage) {
        let total = dom.states.len();
        if total <= self.limit {
            (dom.states.clone(), Coverage::Full)
        } else {
            let mut rng = self.rng_for(id);
            let mut idx = sample(&mut rng, total, self.samples.min(total)).into_vec();
            idx.sort_unstable();
            (idx.into_iter().map(|i| dom.states[i]).collect(), Coverage::Sampled)
        }
    }

    /// Verifies `expr == 0` on the domain.
    pub fn check(&self, id: &str, dom: &Domain, expr: &Expr, describe: &dyn Fn(Key) -> String) -> IdentityRecord {
        let total = dom.states.len();
        let (picked, coverage) = self.pick(id, dom);
        let bad = picked.par_iter().find_first(|k| !expr.eval(&basis(**k)).is_empty());
        let counterexample = bad.map(|k| {
            let out = expr.eval(&basis(*k));
            let mut terms: Vec<_> = out.into_iter().collect();
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            let shown: Vec<String> = terms.iter().take(3).map(|(k, x)| format!("{x} {}", describe(*k))).collect();
            format!("on {}: residual {}", describe(*k), shown.join(" + "))
        });
        IdentityRecord {
            id: id.into(),
            domain: dom.name.clone(),
            checked: picked.len() as u64,
            total: total as u64,
            coverage,
            status: if counterexample.is_none() { Status::Pass } else { Status::Fail },
            counterexample,
        }
    }

    /// Verifies that `op` maps every state `s` of the domain into states `t`
    /// with `allowed(s, t)`.
    pub fn check_support(
        &self,
        id: &str,
        dom: &Domain,
        op: &Op,
        allowed: &(dyn Fn(Key, Key) -> bool + Sync),
        describe: &dyn Fn(Key) -> String,
    ) -> IdentityRecord {
        let (picked, coverage) = self.pick(id, dom);
        let bad = picked.par_iter().find_map_first(|k| {
            let out = op.apply(&basis(*k));
            let mut keys: Vec<Key> = out.keys().copied().filter(|t| !allowed(*k, *t)).collect();
            keys.sort_unstable();
            keys.first().map(|t| (*k, *t))
        });
        let counterexample = bad.map(|(s, t)| format!("{} reaches {}", describe(s), describe(t)));
        IdentityRecord {
            id: id.into(),
            domain: dom.name.clone(),
            checked: picked.len() as u64,
            total: dom.states.len() as u64,
            coverage,
            status: if counterexample.is_none() { Status::Pass } else { Status::Fail },
            counterexample,
        }
    }
}
