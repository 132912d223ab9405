//! JSON documents read and written by the CLI.
//!
//! Output is canonical: keys sorted, floats in shortest round-trip form, two-space
//! indentation and a trailing newline. Loading and re-serializing a canonical file
//! reproduces it byte for byte.

use std::collections::BTreeMap;

use fairteam::fairness::{Envy, FairnessVerdict, Witness};
use fairteam::{AgentSet, Instance, RewardModel, SolveResult, TeamContract, MAX_AGENTS};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub costs: Vec<f64>,
    pub reward: RewardSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "lowercase")]
pub enum RewardSpec {
    /// One value per agent.
    Additive(Vec<f64>),
    /// `2^n` values indexed by subset bitmask, agent `i` at bit `i`.
    Explicit(Vec<f64>),
    Coverage(CoverageSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageSpec {
    pub weights: Vec<f64>,
    /// Elements covered by each agent.
    pub covers: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, metadata: Option<Metadata>) -> Self {
        let reward = match inst.reward() {
            RewardModel::Additive(v) => RewardSpec::Additive(v.clone()),
            RewardModel::Explicit(t) => RewardSpec::Explicit(t.table().to_vec()),
            RewardModel::Coverage(c) => RewardSpec::Coverage(CoverageSpec {
                weights: c.element_weights().to_vec(),
                covers: c.agent_covers().to_vec(),
            }),
        };
        let tol = (inst.tol() != fairteam::DEFAULT_TOL).then_some(inst.tol());
        InstanceFile { n: inst.n(), costs: inst.costs().to_vec(), reward, tol, metadata }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        if self.costs.len() != self.n {
            return Err(CliError::Schema(format!("n is {} but {} costs are given", self.n, self.costs.len())));
        }
        if self.n > MAX_AGENTS {
            return Err(CliError::Schema(format!("n is {}, above the limit of {MAX_AGENTS}", self.n)));
        }
        let reward = match &self.reward {
            RewardSpec::Additive(v) => RewardModel::additive(v.clone()),
            RewardSpec::Explicit(t) => RewardModel::explicit(t.clone()),
            RewardSpec::Coverage(c) => RewardModel::coverage(c.weights.clone(), c.covers.clone())
                .map_err(|e| CliError::Schema(e.to_string()))?,
        };
        let tol = self.tol.unwrap_or(fairteam::DEFAULT_TOL);
        Instance::with_tol(self.costs.clone(), reward, tol).map_err(|e| CliError::Schema(e.to_string()))
    }
}

/// A contract as read by `verify`. Solve output is accepted as is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractFile {
    pub team: Vec<usize>,
    pub alpha: Vec<f64>,
}

impl ContractFile {
    pub fn to_contract(&self, n: usize) -> Result<TeamContract, CliError> {
        if self.alpha.len() != n {
            return Err(CliError::Schema(format!("alpha has {} entries, expected {n}", self.alpha.len())));
        }
        if let Some(i) = self.team.iter().find(|&&i| i >= n) {
            return Err(CliError::Schema(format!("team member {i} is out of range for {n} agents")));
        }
        let team: AgentSet = self.team.iter().copied().collect();
        TeamContract::new(team, self.alpha.clone()).map_err(|e| CliError::Schema(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutput {
    pub team: Vec<usize>,
    pub alpha: Vec<f64>,
    pub minimum_share: Option<f64>,
    pub revenue: f64,
    pub algorithm: String,
    pub params: BTreeMap<String, f64>,
}

impl From<&SolveResult> for SolveOutput {
    fn from(r: &SolveResult) -> Self {
        SolveOutput {
            team: r.team.to_vec(),
            alpha: r.contract.alpha().to_vec(),
            minimum_share: r.minimum_share,
            revenue: r.revenue,
            algorithm: r.algorithm.clone(),
            params: r.params.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictOutput {
    pub fair: bool,
    pub semantics: String,
    pub witness: Option<WitnessOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessOutput {
    pub pair: [usize; 2],
    /// Post-swap equilibrium in which the envy arises; `null` if the swap has none.
    pub equilibrium: Option<Vec<usize>>,
    pub envy: Option<EnvyOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvyOutput {
    pub agent: usize,
    pub utility_before: f64,
    pub utility_after: f64,
}

impl VerdictOutput {
    pub fn new(verdict: &FairnessVerdict, semantics: &str) -> Self {
        let witness = verdict.witness.as_ref().map(|w: &Witness| WitnessOutput {
            pair: [w.pair.0, w.pair.1],
            equilibrium: w.equilibrium.map(AgentSet::to_vec),
            envy: w.envy.map(|e: Envy| EnvyOutput {
                agent: e.agent,
                utility_before: e.utility_before,
                utility_after: e.utility_after,
            }),
        });
        VerdictOutput { fair: verdict.fair, semantics: semantics.to_string(), witness }
    }
}

/// Canonical JSON text: keys sorted through `serde_json::Value`.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("CLI documents serialize");
    let mut text = serde_json::to_string_pretty(&tree).expect("values serialize");
    text.push('\n');
    text
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(format!("{what}: {e}")))
}
