use std::collections::BTreeMap;

use crate::model::{Instance, TeamContract};
use crate::set::AgentSet;

/// Output of every solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub team: AgentSet,
    pub contract: TeamContract,
    /// The uniform floor the contract was built from, when the solver uses one.
    pub minimum_share: Option<f64>,
    pub revenue: f64,
    pub algorithm: String,
    pub params: BTreeMap<String, f64>,
}

impl SolveResult {
    pub fn new(
        inst: &Instance,
        contract: TeamContract,
        minimum_share: Option<f64>,
        algorithm: &str,
        params: BTreeMap<String, f64>,
    ) -> Self {
        SolveResult {
            team: contract.team(),
            revenue: inst.revenue(&contract),
            contract,
            minimum_share,
            algorithm: algorithm.to_string(),
            params,
        }
    }

    pub fn empty(inst: &Instance, algorithm: &str, params: BTreeMap<String, f64>) -> Self {
        Self::new(inst, TeamContract::empty(inst.n()), Some(0.0), algorithm, params)
    }
}
