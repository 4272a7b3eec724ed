use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

/// Most counterexamples kept per outcome; `failures` has the full count.
pub const MAX_COUNTEREXAMPLES: usize = 64;

/// A failing index with both sides as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
}

/// Accumulates comparisons while a check walks its index range.
#[derive(Debug)]
pub(crate) struct Scan {
    pub range: (u64, u64),
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
    pub applicable: Option<u64>,
    pub not_applicable: Option<u64>,
    /// Extra verdict for audits: whether the failures are the predicted ones.
    pub audit: Option<bool>,
}

impl Scan {
    pub fn new(lo: u64, hi: u64) -> Self {
        Scan {
            range: (lo, hi),
            failures: 0,
            counterexamples: Vec::new(),
            applicable: None,
            not_applicable: None,
            audit: None,
        }
    }

    /// A scan whose comparisons only happen when a hypothesis holds.
    pub fn conditional(lo: u64, hi: u64) -> Self {
        Scan { applicable: Some(0), not_applicable: Some(0), ..Scan::new(lo, hi) }
    }

    pub fn eq<T: PartialEq + Display>(&mut self, n: u64, lhs: T, rhs: T, tags: &[(&str, i64)]) -> bool {
        let ok = lhs == rhs;
        self.record(n, lhs, rhs, ok, tags)
    }

    pub fn record(&mut self, n: u64, lhs: impl Display, rhs: impl Display, ok: bool, tags: &[(&str, i64)]) -> bool {
        if let Some(a) = self.applicable.as_mut() {
            *a += 1;
        }
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Counterexample {
                    n,
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    params: tags.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
                });
            }
        }
        ok
    }

    /// Hypothesis failed at this index.
    pub fn vacuous(&mut self) {
        if let Some(v) = self.not_applicable.as_mut() {
            *v += 1;
        }
    }
}
