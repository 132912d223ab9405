//! Exhaustive solvers over every team, used as ground truth.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fairness::{least_incentive_contract, optimal_minimum_share};
use crate::model::{Instance, TeamContract};
use crate::result::SolveResult;
use crate::set::AgentSet;

/// Keeps the best team seen so far. Teams arrive in ascending bitmask order; a
/// later team wins on revenue beyond `tol`, or on a revenue tie with larger reward.
struct Best {
    contract: TeamContract,
    share: f64,
    revenue: f64,
    reward: f64,
}

impl Best {
    fn offer(&mut self, inst: &Instance, contract: TeamContract, share: f64) {
        let revenue = inst.revenue(&contract);
        let reward = inst.value(contract.team());
        let tol = inst.tol();
        let better = revenue > self.revenue + tol || (revenue >= self.revenue - tol && reward > self.reward);
        if better {
            *self = Best { contract, share, revenue, reward };
        }
    }
}

fn teams(inst: &Instance) -> Result<impl Iterator<Item = AgentSet>> {
    inst.check_enumerable(inst.n())?;
    Ok(inst.ground().subsets().skip(1))
}

/// Optimal fair contract: every team paid its least-incentive contract at `ℒ*`.
pub fn optimal_fair_bruteforce(inst: &Instance) -> Result<SolveResult> {
    if !inst.is_submodular() {
        return Err(Error::NotSubmodular("the exact fair solver"));
    }
    let mut best = Best { contract: TeamContract::empty(inst.n()), share: 0.0, revenue: 0.0, reward: 0.0 };
    for team in teams(inst)? {
        let share = match optimal_minimum_share(inst, team) {
            Ok(share) => share,
            Err(Error::InfeasibleTeam { .. }) => continue,
            Err(e) => return Err(e),
        };
        best.offer(inst, least_incentive_contract(inst, team, share)?, share);
    }
    Ok(SolveResult::new(inst, best.contract, Some(best.share), "exact", BTreeMap::new()))
}

/// Optimal non-discriminatory contract: every member paid the team's largest cut-off wage.
pub fn optimal_nondiscriminatory_bruteforce(inst: &Instance) -> Result<SolveResult> {
    let mut best = Best { contract: TeamContract::empty(inst.n()), share: 0.0, revenue: 0.0, reward: 0.0 };
    for team in teams(inst)? {
        let share = team.iter().map(|i| inst.cutoff_wage(i, team)).fold(0.0, f64::max);
        if share.is_infinite() {
            continue;
        }
        best.offer(inst, TeamContract::uniform(inst.n(), team, share)?, share);
    }
    Ok(SolveResult::new(inst, best.contract, Some(best.share), "exact-nd", BTreeMap::new()))
}
