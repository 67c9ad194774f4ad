//! The verification suites run by `ehall verify`. Every suite returns its
//! reports in a fixed order, so a run is reproducible from the seed.

mod geometry;
mod relations;
mod structure;

use std::collections::BTreeMap;
use std::sync::Arc;

use ehall_core::kfield::{Coeff, FieldElem, KError, Params, Rat};
use ehall_core::par::set_jobs;
use ehall_core::presentation::{Cell, Presentation, Reducer, Status, VerificationReport};
use ehall_core::shuffle::ShuffleAlgebra;
use serde_json::Value;
use thiserror::Error;

use crate::config::RunConfig;

/// Suite names in run order.
pub const SUITES: [&str; 12] = [
    "cubic",
    "quadratic",
    "residue",
    "minimal-paths",
    "basis",
    "span",
    "isomorphism",
    "area-lemma",
    "pick",
    "minpath-existence",
    "normal-form",
    "hopf",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; known suites: {list}", list = SUITES.join(", "))]
    Unknown(String),
    #[error(transparent)]
    Field(#[from] KError),
}

/// Resolve names given on the command line; no names or `all` selects
/// every suite.
pub fn resolve(names: &[String]) -> Result<Vec<&'static str>, SuiteError> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(SUITES.to_vec());
    }
    names
        .iter()
        .map(|n| SUITES.iter().copied().find(|s| s == n).ok_or_else(|| SuiteError::Unknown(n.clone())))
        .collect()
}

/// Shared state of the field-dependent suites.
pub struct Ctx<C: Coeff> {
    pub cfg: RunConfig,
    pub pres: Arc<Presentation<C>>,
}

impl<C: Coeff> Ctx<C> {
    fn new(cfg: &RunConfig, params: Params<C>) -> Self {
        let alg = Arc::new(ShuffleAlgebra::new(params, cfg.rank_bound.max(5)));
        Self { cfg: cfg.clone(), pres: Arc::new(Presentation::new(alg)) }
    }

    pub fn alg(&self) -> &Arc<ShuffleAlgebra<C>> {
        self.pres.algebra()
    }

    pub fn reducer(&self, paranoid: bool) -> Reducer<C> {
        Reducer::new(self.alg().clone(), paranoid || self.cfg.paranoid)
    }
}

pub fn symbolic_ctx(cfg: &RunConfig) -> Ctx<FieldElem> {
    Ctx::new(cfg, Params::symbolic())
}

pub fn point_ctx(cfg: &RunConfig, sigma: &num_rational::BigRational, sigmabar: &num_rational::BigRational) -> Result<Ctx<Rat>, KError> {
    Ok(Ctx::new(cfg, Params::specialized(sigma.clone(), sigmabar.clone())?))
}

pub(crate) fn report(suite: &str, cell: Cell, ok: bool, steps: Vec<Value>, ranks: BTreeMap<String, i64>) -> VerificationReport {
    VerificationReport { suite: suite.to_string(), cell, status: Status::from_bool(ok), steps, ranks }
}

pub(crate) fn ranks<const N: usize>(items: [(&str, i64); N]) -> BTreeMap<String, i64> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Run one suite.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<VerificationReport>, SuiteError> {
    set_jobs(cfg.jobs);
    Ok(match name {
        "cubic" => on_field!(cfg, relations::cubic),
        "quadratic" => on_field!(cfg, relations::quadratic),
        "residue" => on_field!(cfg, relations::residue),
        "minimal-paths" => on_field!(cfg, structure::minimal_paths_agree),
        "basis" => on_field!(cfg, structure::basis),
        "span" => on_field!(cfg, structure::span),
        "isomorphism" => on_field!(cfg, structure::isomorphism),
        "area-lemma" => geometry::area_lemma(cfg),
        "pick" => geometry::pick(cfg),
        "minpath-existence" => geometry::minpath_existence(cfg),
        "normal-form" => structure::normal_form(cfg)?,
        "hopf" => on_field!(cfg, structure::hopf),
        other => return Err(SuiteError::Unknown(other.to_string())),
    })
}

/// Run the suites in order, handing each report to `sink` as soon as its
/// suite finishes. Returns whether everything passed.
pub fn run_suites(cfg: &RunConfig, names: &[&str], mut sink: impl FnMut(&VerificationReport)) -> Result<bool, SuiteError> {
    let mut all = true;
    for name in names {
        for r in run_suite(name, cfg)? {
            all &= r.passed();
            sink(&r);
        }
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_names() {
        assert_eq!(resolve(&[]).unwrap().len(), 12);
        assert_eq!(resolve(&["pick".into(), "cubic".into()]).unwrap(), vec!["pick", "cubic"]);
        assert_eq!(resolve(&["cubix".into()]), Err(SuiteError::Unknown("cubix".into())));
    }
}
