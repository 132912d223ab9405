use thiserror::Error;

use crate::set::AgentSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid contract: {0}")]
    InvalidContract(String),

    #[error("agent {agent} is out of range for an instance with {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("exhaustive enumeration over {size} agents exceeds the cap of {cap}")]
    EnumerationCap { size: usize, cap: usize },

    #[error("{0} requires a submodular reward model")]
    NotSubmodular(&'static str),

    #[error("{0} requires an additive reward model")]
    NotAdditive(&'static str),

    #[error("contract is infeasible: agent {agent} has share {share} below its cut-off wage {cutoff}")]
    InfeasibleContract { agent: usize, share: f64, cutoff: f64 },

    #[error("team {team} cannot be incentivized: {reason}")]
    InfeasibleTeam { team: AgentSet, reason: String },

    #[error("minimum share {given} is below the optimal minimum share {required}")]
    ShareBelowOptimal { given: f64, required: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
