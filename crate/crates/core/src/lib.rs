//! Revenue-optimal fair team contracts.
//!
//! A principal hires a team of agents, paying each a linear share of the project
//! reward. A contract is fair when no two teammates would both accept swapping
//! their shares. This crate evaluates equilibria and fairness, computes the least
//! costly fair contract for a team, and searches for good teams exactly or
//! approximately.

pub mod additive;
pub mod equilibrium;
pub mod error;
pub mod exact;
pub mod fairness;
pub mod instances;
pub mod knapsack;
pub mod model;
pub mod result;
pub mod reward;
pub mod set;
pub mod submodular;

pub use error::{Error, Result};
pub use fairness::{FairnessVerdict, Semantics};
pub use model::{Instance, PriceVector, TeamContract, DEFAULT_ENUM_CAP, DEFAULT_TOL};
pub use result::SolveResult;
pub use reward::RewardModel;
pub use set::{AgentSet, MAX_AGENTS};
