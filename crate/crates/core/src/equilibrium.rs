//! Pure Nash equilibria of the effort game induced by a team contract.
//!
//! An agent indifferent between working and shirking works, so members need
//! `α_i f(i|E\{i}) >= c_i` and outsiders need the strict reverse.

use crate::error::{Error, Result};
use crate::model::{exerts_effort, Instance, TeamContract};
use crate::set::AgentSet;

/// Whether `e ⊆ team` is a pure Nash equilibrium under `contract`.
pub fn is_equilibrium(inst: &Instance, contract: &TeamContract, e: AgentSet) -> bool {
    let team = contract.team();
    if !e.is_subset_of(team) {
        return false;
    }
    let tol = inst.tol();
    team.iter().all(|i| {
        let works = exerts_effort(contract.share(i), inst.cutoff_wage(i, e), tol);
        works == e.contains(i)
    })
}

/// Every equilibrium, in ascending bitmask order.
pub fn enumerate_equilibria(inst: &Instance, contract: &TeamContract) -> Result<Vec<AgentSet>> {
    inst.check_contract(contract)?;
    let team = contract.team();
    inst.check_enumerable(team.len())?;
    Ok(team.subsets().filter(|&e| is_equilibrium(inst, contract, e)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub pair: (usize, usize),
    /// The selected equilibrium after the swap: the unique one for submodular
    /// rewards, else the smallest bitmask. `None` when no equilibrium exists.
    pub equilibrium: Option<AgentSet>,
    pub unique: bool,
    /// All equilibria after the swap, ascending.
    pub equilibria: Vec<AgentSet>,
}

/// Equilibria after agents `i` and `j` exchange shares.
///
/// Submodular rewards with a feasible contract take the closed form: only the agent
/// whose share dropped can stop working, so the outcome is `S` or `S` minus that agent.
/// Anything else is enumerated.
pub fn swap_equilibrium(inst: &Instance, contract: &TeamContract, i: usize, j: usize) -> Result<SwapOutcome> {
    inst.check_contract(contract)?;
    let team = contract.team();
    for a in [i, j] {
        inst.check_agent(a)?;
        if !team.contains(a) {
            return Err(Error::InvalidParameter(format!("agent {a} is not a member of team {team}")));
        }
    }
    let swapped = contract.swapped(i, j);
    if inst.is_submodular() && inst.is_feasible(contract) {
        let dropped = [i, j].into_iter().find(|&k| swapped.share(k) < contract.share(k));
        let e = match dropped {
            Some(k) if !exerts_effort(swapped.share(k), inst.cutoff_wage(k, team), inst.tol()) => team.without(k),
            _ => team,
        };
        return Ok(SwapOutcome { pair: (i, j), equilibrium: Some(e), unique: true, equilibria: vec![e] });
    }
    let equilibria = enumerate_equilibria(inst, &swapped)?;
    Ok(SwapOutcome {
        pair: (i, j),
        equilibrium: equilibria.first().copied(),
        unique: equilibria.len() == 1,
        equilibria,
    })
}
