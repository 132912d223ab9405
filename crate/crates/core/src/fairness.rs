//! Swap-based fairness: no two teammates gain by exchanging shares.

use crate::equilibrium::{enumerate_equilibria, swap_equilibrium};
use crate::error::{Error, Result};
use crate::model::{exerts_effort, Instance, TeamContract};
use crate::set::AgentSet;

/// How to read fairness when a swap admits several equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// Some post-swap equilibrium leaves both agents without envy.
    Optimistic,
    /// Every post-swap equilibrium does, and at least one exists.
    Pessimistic,
}

/// An agent who strictly prefers the swapped share under a post-swap equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envy {
    pub agent: usize,
    pub utility_before: f64,
    pub utility_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub pair: (usize, usize),
    /// `None` when the swap leaves no equilibrium at all.
    pub equilibrium: Option<AgentSet>,
    pub envy: Option<Envy>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessVerdict {
    pub fair: bool,
    pub witness: Option<Witness>,
}

impl FairnessVerdict {
    fn fair() -> Self {
        FairnessVerdict { fair: true, witness: None }
    }

    fn unfair(witness: Witness) -> Self {
        FairnessVerdict { fair: false, witness: Some(witness) }
    }
}

/// Utility of `agent` under `contract` and the swap of `(i, j)` with equilibrium `e`,
/// compared to its current utility. Returns the envy if the swap is strictly better.
pub fn envy_under(inst: &Instance, contract: &TeamContract, pair: (usize, usize), e: AgentSet) -> Option<Envy> {
    let (i, j) = pair;
    let team = contract.team();
    let f_team = inst.value(team);
    let f_e = inst.value(e);
    [(i, j), (j, i)].into_iter().find_map(|(me, other)| {
        let before = contract.share(me) * f_team - inst.cost(me);
        let work_cost = if e.contains(me) { inst.cost(me) } else { 0.0 };
        let after = contract.share(other) * f_e - work_cost;
        (after > before + inst.tol()).then_some(Envy { agent: me, utility_before: before, utility_after: after })
    })
}

/// Checks every pair of members with different shares by computing the post-swap
/// equilibria directly.
pub fn is_fair_definitional(inst: &Instance, contract: &TeamContract, semantics: Semantics) -> Result<FairnessVerdict> {
    inst.require_feasible(contract)?;
    let members = contract.team().to_vec();
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            if contract.share(i) == contract.share(j) {
                continue;
            }
            let verdict = swap_verdict(inst, contract, i, j, semantics)?;
            if !verdict.fair {
                return Ok(verdict);
            }
        }
    }
    Ok(FairnessVerdict::fair())
}

/// Whether the single swap of `i` and `j` leaves both without envy.
pub fn swap_verdict(
    inst: &Instance,
    contract: &TeamContract,
    i: usize,
    j: usize,
    semantics: Semantics,
) -> Result<FairnessVerdict> {
    inst.require_feasible(contract)?;
    // Enumerate whenever possible so this stays independent of the submodular closed form.
    let team = contract.team();
    let equilibria = if team.len() <= inst.enum_cap() {
        for a in [i, j] {
            inst.check_agent(a)?;
            if !team.contains(a) {
                return Err(Error::InvalidParameter(format!("agent {a} is not a member of team {team}")));
            }
        }
        enumerate_equilibria(inst, &contract.swapped(i, j))?
    } else {
        swap_equilibrium(inst, contract, i, j)?.equilibria
    };
    if equilibria.is_empty() {
        return Ok(FairnessVerdict::unfair(Witness { pair: (i, j), equilibrium: None, envy: None }));
    }
    let verdicts: Vec<(AgentSet, Option<Envy>)> =
        equilibria.iter().map(|&e| (e, envy_under(inst, contract, (i, j), e))).collect();
    let failing = match semantics {
        Semantics::Optimistic if verdicts.iter().any(|(_, v)| v.is_none()) => None,
        _ => verdicts.iter().find(|(_, v)| v.is_some()),
    };
    Ok(match failing {
        Some(&(e, envy)) => FairnessVerdict::unfair(Witness { pair: (i, j), equilibrium: Some(e), envy }),
        None => FairnessVerdict::fair(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessReport {
    pub optimistic: FairnessVerdict,
    pub pessimistic: FairnessVerdict,
}

/// Both readings at once; they coincide whenever every swap has a unique equilibrium.
pub fn fairness_report(inst: &Instance, contract: &TeamContract) -> Result<FairnessReport> {
    Ok(FairnessReport {
        optimistic: is_fair_definitional(inst, contract, Semantics::Optimistic)?,
        pessimistic: is_fair_definitional(inst, contract, Semantics::Pessimistic)?,
    })
}

/// Closed-form check for submodular rewards. For members with `α_i < α_j` the contract
/// is fair iff `α_i` sits strictly below `j`'s cut-off wage (so `j` stops working after
/// the swap) and `α_i f(S) >= α_j f(S \ {j})`.
pub fn is_fair_submodular(inst: &Instance, contract: &TeamContract) -> Result<FairnessVerdict> {
    if !inst.is_submodular() {
        return Err(Error::NotSubmodular("the closed-form fairness check"));
    }
    inst.require_feasible(contract)?;
    let team = contract.team();
    let f_team = inst.value(team);
    let tol = inst.tol();
    for i in team {
        for j in team {
            let (ai, aj) = (contract.share(i), contract.share(j));
            // Nearly equal shares cannot produce envy beyond the tolerance.
            if ai >= aj || (aj - ai) * f_team <= tol {
                continue;
            }
            let j_keeps_working = exerts_effort(ai, inst.cutoff_wage(j, team), tol);
            let e = if j_keeps_working { team } else { team.without(j) };
            if j_keeps_working || ai * f_team < aj * inst.value(team.without(j)) - tol {
                let pair = (i.min(j), i.max(j));
                let envy = envy_under(inst, contract, pair, e);
                return Ok(FairnessVerdict::unfair(Witness { pair, equilibrium: Some(e), envy }));
            }
        }
    }
    Ok(FairnessVerdict::fair())
}

/// Smallest uniform floor `ℒ*` such that paying every member `max(ℒ*, cutoff)` is fair:
/// `max_i (c_i / f(i|S\{i})) (1 - f(i|S\{i}) / f(S))`. Zero for singletons and the empty team.
pub fn optimal_minimum_share(inst: &Instance, team: AgentSet) -> Result<f64> {
    inst.check_set(team)?;
    if team.is_empty() {
        return Ok(0.0);
    }
    let f_team = inst.value(team);
    if f_team <= 0.0 {
        return Err(Error::InfeasibleTeam { team, reason: "the team has zero reward".into() });
    }
    let mut best = 0.0f64;
    for i in team {
        let m = inst.marginal(i, team);
        if m <= 0.0 {
            return Err(Error::InfeasibleTeam { team, reason: format!("agent {i} has zero marginal contribution") });
        }
        best = best.max(inst.cost(i) / m * (1.0 - m / f_team));
    }
    Ok(best)
}

/// Pays every member `max(floor, cutoff)`. The floor must be at least `ℒ*` for the team.
pub fn least_incentive_contract(inst: &Instance, team: AgentSet, floor: f64) -> Result<TeamContract> {
    let required = optimal_minimum_share(inst, team)?;
    if floor.is_nan() || floor < required - inst.tol() {
        return Err(Error::ShareBelowOptimal { given: floor, required });
    }
    let alpha =
        (0..inst.n()).map(|i| if team.contains(i) { floor.max(inst.cutoff_wage(i, team)) } else { 0.0 }).collect();
    TeamContract::new(team, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{worked_example, WorkedExample};

    fn pair() -> AgentSet {
        AgentSet::full(2)
    }

    #[test]
    fn two_agent_example_verdicts() {
        let inst = worked_example(WorkedExample::E1);
        let unfair = TeamContract::new(pair(), vec![0.1, 0.2]).unwrap();
        let v = is_fair_definitional(&inst, &unfair, Semantics::Optimistic).unwrap();
        assert!(!v.fair);
        let w = v.witness.unwrap();
        assert_eq!(w.pair, (0, 1));
        assert_eq!(w.equilibrium, Some(AgentSet::singleton(0)));
        let envy = w.envy.unwrap();
        assert_eq!(envy.agent, 0);
        // 0.1 * 0.75 - 0.05 before, 0.2 * 0.5 - 0.05 after.
        assert!((envy.utility_before - 0.025).abs() < 1e-12);
        assert!((envy.utility_after - 0.05).abs() < 1e-12);
        assert!(!is_fair_submodular(&inst, &unfair).unwrap().fair);

        let fair = TeamContract::new(pair(), vec![0.15, 0.2]).unwrap();
        assert!(is_fair_definitional(&inst, &fair, Semantics::Optimistic).unwrap().fair);
        assert!(is_fair_submodular(&inst, &fair).unwrap().fair);
    }

    #[test]
    fn boundary_of_right_inequality_is_fair() {
        let inst = worked_example(WorkedExample::E2);
        let c = TeamContract::new(pair(), vec![0.125, 0.25]).unwrap();
        assert!(is_fair_submodular(&inst, &c).unwrap().fair);
        assert!(is_fair_definitional(&inst, &c, Semantics::Optimistic).unwrap().fair);
    }

    #[test]
    fn uniform_contracts_are_fair() {
        let inst = worked_example(WorkedExample::E1);
        let c = TeamContract::uniform(2, pair(), 0.3).unwrap();
        assert!(is_fair_definitional(&inst, &c, Semantics::Pessimistic).unwrap().fair);
    }

    #[test]
    fn infeasible_contract_is_rejected() {
        let inst = worked_example(WorkedExample::E1);
        let c = TeamContract::new(pair(), vec![0.05, 0.2]).unwrap();
        assert!(matches!(
            is_fair_definitional(&inst, &c, Semantics::Optimistic),
            Err(Error::InfeasibleContract { agent: 0, .. })
        ));
    }

    #[test]
    fn minimum_shares() {
        let e1 = worked_example(WorkedExample::E1);
        assert!((optimal_minimum_share(&e1, pair()).unwrap() - 2.0 / 15.0).abs() < 1e-12);
        assert_eq!(optimal_minimum_share(&e1, AgentSet::singleton(1)).unwrap(), 0.0);
        let e2 = worked_example(WorkedExample::E2);
        assert!((optimal_minimum_share(&e2, pair()).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn least_incentive_contracts() {
        let e1 = worked_example(WorkedExample::E1);
        let c = least_incentive_contract(&e1, pair(), 2.0 / 15.0).unwrap();
        assert!((c.share(0) - 2.0 / 15.0).abs() < 1e-12 && (c.share(1) - 0.2).abs() < 1e-12);
        let c = least_incentive_contract(&e1, pair(), 0.2).unwrap();
        assert!(c.is_uniform());
        assert!(matches!(least_incentive_contract(&e1, pair(), 0.1), Err(Error::ShareBelowOptimal { .. })));
        let e2 = worked_example(WorkedExample::E2);
        let c = least_incentive_contract(&e2, pair(), 0.125).unwrap();
        assert_eq!(c.alpha(), &[0.125, 0.25]);
    }

    #[test]
    fn zero_marginal_team_is_infeasible() {
        let inst = Instance::new(vec![0.1, 0.1], crate::RewardModel::additive(vec![0.5, 0.0])).unwrap();
        assert!(matches!(optimal_minimum_share(&inst, pair()), Err(Error::InfeasibleTeam { .. })));
    }

    #[test]
    fn xos_example_depends_on_semantics() {
        let inst = worked_example(WorkedExample::E3);
        let c = TeamContract::new(inst.ground(), vec![0.35, 0.27, 0.28, 0.10]).unwrap();
        assert!(swap_verdict(&inst, &c, 1, 2, Semantics::Optimistic).unwrap().fair);
        let v = swap_verdict(&inst, &c, 1, 2, Semantics::Pessimistic).unwrap();
        assert!(!v.fair);
        let w = v.witness.unwrap();
        assert_eq!(w.equilibrium, Some([2, 3].into_iter().collect()));
        let envy = w.envy.unwrap();
        assert_eq!(envy.agent, 1);
        assert!((envy.utility_before - 3.53).abs() < 1e-9);
        assert!((envy.utility_after - 3.64).abs() < 1e-9);
        // Agent 1 envies agent 0's larger share under every equilibrium of that swap.
        let report = fairness_report(&inst, &c).unwrap();
        assert!(!report.optimistic.fair);
        assert_eq!(report.optimistic.witness.unwrap().pair, (0, 1));
        assert!(is_fair_submodular(&inst, &c).is_err());
    }
}
