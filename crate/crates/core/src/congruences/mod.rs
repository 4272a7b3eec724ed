//! Executable catalog of congruences for `τ_k` and restricted partition
//! counts. Every check computes both sides exactly and reports the indices
//! where they disagree.
//!
//! Checks are phrased against series coefficients: index `n` of
//! `∏(1 − q^m)^k` holds `τ_k(n+1)`.

mod checks;
mod scan;
mod tables;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use scan::{Counterexample, MAX_COUNTEREXAMPLES};
pub use tables::{Tables, DEFAULT_ORDER_CEILING};

pub(crate) use scan::Scan;

pub type Params = BTreeMap<String, i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

/// One catalog entry.
#[derive(Clone, Copy)]
pub struct CheckInfo {
    pub id: &'static str,
    pub description: &'static str,
    /// The statement being checked, as a formula.
    pub claim: &'static str,
    /// `Fail` marks an audit of a statement that is known to be wrong.
    pub expected: Status,
    /// Names accepted in the `params` map; each narrows a default sweep.
    pub params: &'static [&'static str],
    pub quick_limit: u64,
    pub full_limit: u64,
    run: fn(&Ctx<'_>) -> Result<Scan>,
}

impl CheckInfo {
    pub fn limit(&self, profile: Profile) -> u64 {
        match profile {
            Profile::Quick => self.quick_limit,
            Profile::Full => self.full_limit,
        }
    }
}

impl std::fmt::Debug for CheckInfo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckInfo")
            .field("id", &self.id)
            .field("expected", &self.expected)
            .field("quick_limit", &self.quick_limit)
            .field("full_limit", &self.full_limit)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub params: Params,
    pub range: (u64, u64),
    pub status: Status,
    pub expected: Status,
    pub as_expected: bool,
    pub failures: u64,
    /// Hypothesis instances that were tested (conditional checks only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub applicable: Option<u64>,
    /// Indices where the hypothesis did not hold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<u64>,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

pub(crate) struct Ctx<'a> {
    pub limit: u64,
    pub params: &'a Params,
    pub tables: &'a Tables,
}

impl Ctx<'_> {
    /// The single value of `name` if given, else the default sweep.
    pub fn list(&self, name: &str, default: &[i64]) -> Vec<i64> {
        match self.params.get(name) {
            Some(&v) => vec![v],
            None => default.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.limit as usize
    }
}

pub fn registry() -> &'static [CheckInfo] {
    checks::CATALOG
}

pub fn lookup(id: &str) -> Result<&'static CheckInfo> {
    registry()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

/// Runs one check on a fresh table cache with the default ceiling.
pub fn run_check(id: &str, limit: u64, params: &Params) -> Result<CheckOutcome> {
    run_check_with(&Tables::default(), id, limit, params)
}

pub fn run_check_with(tables: &Tables, id: &str, limit: u64, params: &Params) -> Result<CheckOutcome> {
    let info = lookup(id)?;
    if limit == 0 {
        return Err(Error::invalid("limit must be at least 1"));
    }
    tables.check_order(usize::try_from(limit).unwrap_or(usize::MAX))?;
    if let Some(bad) = params.keys().find(|k| !info.params.contains(&k.as_str())) {
        return Err(Error::invalid(format!(
            "check {id} has no parameter `{bad}` (accepted: {})",
            info.params.join(", ")
        )));
    }
    let start = Instant::now();
    let scan = (info.run)(&Ctx { limit, params, tables })?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let status = if scan.failures == 0 { Status::Pass } else { Status::Fail };
    let as_expected = status == info.expected && scan.audit.unwrap_or(true);
    Ok(CheckOutcome {
        id: info.id.to_string(),
        params: params.clone(),
        range: scan.range,
        status,
        expected: info.expected,
        as_expected,
        failures: scan.failures,
        applicable: scan.applicable,
        not_applicable: scan.not_applicable,
        counterexamples: scan.counterexamples,
        elapsed_ms,
    })
}

pub fn run_all(profile: Profile) -> Result<Vec<CheckOutcome>> {
    run_all_with(&Tables::default(), profile)
}

/// Every catalog entry at its profile limit, in catalog order.
pub fn run_all_with(tables: &Tables, profile: Profile) -> Result<Vec<CheckOutcome>> {
    let ids: Vec<(&str, u64)> = registry().iter().map(|c| (c.id, c.limit(profile))).collect();
    run_many(tables, &ids)
}

/// Runs `(id, limit)` pairs in parallel after building the shared `τ` table.
pub fn run_many(tables: &Tables, runs: &[(&str, u64)]) -> Result<Vec<CheckOutcome>> {
    for &(id, _) in runs {
        lookup(id)?;
    }
    let order = runs
        .iter()
        .map(|&(id, limit)| checks::tau24_order(id, limit))
        .max()
        .unwrap_or(0);
    if order > 0 {
        tables.eta_power(24, order)?;
    }
    let empty = Params::new();
    runs.par_iter()
        .map(|&(id, limit)| run_check_with(tables, id, limit, &empty))
        .collect()
}

/// True when every outcome matched its catalog expectation.
pub fn all_as_expected(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.as_expected)
}
