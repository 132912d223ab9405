//! Solvers for additive rewards: the greedy optimal non-discriminatory contract and
//! the FPTAS for fair contracts.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fairness::{least_incentive_contract, optimal_minimum_share};
use crate::knapsack::{DpItem, DpTable};
use crate::model::{Instance, TeamContract};
use crate::result::SolveResult;
use crate::set::AgentSet;

fn require_additive(inst: &Instance, what: &'static str) -> Result<()> {
    if inst.is_additive() {
        Ok(())
    } else {
        Err(Error::NotAdditive(what))
    }
}

fn ratio(inst: &Instance, i: usize) -> f64 {
    inst.cost(i) / inst.singleton_value(i)
}

/// Agents with positive reward, by reward descending then index.
fn by_reward(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.n()).filter(|&i| inst.singleton_value(i) > 0.0).collect();
    order.sort_by(|&a, &b| inst.singleton_value(b).total_cmp(&inst.singleton_value(a)).then(a.cmp(&b)));
    order
}

/// Optimal non-discriminatory contract for additive rewards.
///
/// Each agent in turn fixes the uniform share at its own cut-off wage; agents whose
/// cut-off is no larger join greedily, in order of reward, while revenue strictly grows.
pub fn nondiscriminatory_additive(inst: &Instance) -> Result<SolveResult> {
    require_additive(inst, "the greedy non-discriminatory solver")?;
    let order = by_reward(inst);
    let mut best = AgentSet::EMPTY;
    let mut best_share = 0.0;
    let mut best_revenue = 0.0;
    for &i in &order {
        let share = ratio(inst, i);
        let mut team = AgentSet::singleton(i);
        for &j in &order {
            if j == i || ratio(inst, j) > share {
                continue;
            }
            let k = team.len() as f64;
            let grown = (1.0 - (k + 1.0) * share) * inst.value(team.with(j));
            if grown > (1.0 - k * share) * inst.value(team) {
                team.insert(j);
            }
        }
        let revenue = (1.0 - team.len() as f64 * share) * inst.value(team);
        if best_revenue < revenue {
            best = team;
            best_share = share;
            best_revenue = revenue;
        }
    }
    let contract = TeamContract::uniform(inst.n(), best, best_share)?;
    Ok(SolveResult::new(inst, contract, Some(best_share), "nd-greedy", BTreeMap::new()))
}

/// `(1/2) γ² / (γ + n(1-γ))`.
pub fn fptas_epsilon(n: usize, gamma: f64) -> f64 {
    0.5 * gamma * gamma / (gamma + n as f64 * (1.0 - gamma))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma must lie in (0, 1], got {gamma}")))
    }
}

/// Result of [`lower_bound_l`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    /// Agent attaining the maximum (smallest index on ties).
    pub i_bar: usize,
    /// Agent with the largest reward (smallest index on ties).
    pub i_star: usize,
}

fn term(inst: &Instance, i: usize, x: f64) -> f64 {
    let f = inst.singleton_value(i);
    inst.cost(i) / f * (1.0 - f / x)
}

/// `max_{i∈S} (c_i / f(i)) (1 - f(i)/x)`.
pub fn lower_bound_l(inst: &Instance, team: AgentSet, x: f64) -> Result<LowerBound> {
    inst.check_set(team)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidParameter(format!("x must be positive, got {x}")));
    }
    if team.is_empty() {
        return Err(Error::InvalidParameter("the lower bound needs a nonempty team".into()));
    }
    if let Some(i) = team.iter().find(|&i| inst.singleton_value(i) <= 0.0) {
        return Err(Error::InfeasibleTeam { team, reason: format!("agent {i} has zero reward") });
    }
    let mut lb = LowerBound { value: f64::NEG_INFINITY, i_bar: 0, i_star: 0 };
    let mut top = f64::NEG_INFINITY;
    for i in team {
        let t = term(inst, i, x);
        if t > lb.value {
            lb.value = t;
            lb.i_bar = i;
        }
        if inst.singleton_value(i) > top {
            top = inst.singleton_value(i);
            lb.i_star = i;
        }
    }
    Ok(lb)
}

/// `x̃ / (1 - ε/(2n))`, the upper estimate of the reward behind a discretized sum.
fn inflate(n: usize, x_tilde: f64, epsilon: f64) -> f64 {
    x_tilde / (1.0 - epsilon / (2.0 * n as f64))
}

/// `(c_ī / f(ī)) (1 - f(ī) / (x̃ / (1 - ε/(2n))))`; may be negative.
pub fn approx_min_share(inst: &Instance, i_bar: usize, x_tilde: f64, epsilon: f64) -> Result<f64> {
    inst.check_agent(i_bar)?;
    if x_tilde.is_nan() || x_tilde <= 0.0 {
        return Err(Error::InvalidParameter(format!("x_tilde must be positive, got {x_tilde}")));
    }
    if inst.singleton_value(i_bar) <= 0.0 {
        return Err(Error::InvalidParameter(format!("agent {i_bar} has zero reward")));
    }
    Ok(term(inst, i_bar, inflate(inst.n(), x_tilde, epsilon)))
}

/// Agents no larger than `i*` whose own lower-bound term does not exceed the
/// approximate minimum share of `ī`. Zero-reward agents are excluded.
pub fn domain_set(inst: &Instance, i_bar: usize, x_tilde: f64, i_star: usize, epsilon: f64) -> Result<AgentSet> {
    inst.check_agent(i_star)?;
    let share = approx_min_share(inst, i_bar, x_tilde, epsilon)?;
    let top = inst.singleton_value(i_star);
    if inst.singleton_value(i_bar) > top {
        return Err(Error::InvalidParameter(format!("agent {i_bar} has larger reward than anchor {i_star}")));
    }
    let inflated = inflate(inst.n(), x_tilde, epsilon);
    Ok((0..inst.n())
        .filter(|&i| {
            let f = inst.singleton_value(i);
            f > 0.0 && f <= top && term(inst, i, inflated) <= share
        })
        .collect())
}

/// Shares for a domain: `ℒ̃` for agents whose cut-off is at most `ℒ̃`, the cut-off otherwise.
pub fn approx_shares(inst: &Instance, domain: AgentSet, share: f64) -> Vec<f64> {
    (0..inst.n())
        .map(|i| {
            if !domain.contains(i) {
                0.0
            } else if ratio(inst, i) <= share {
                share
            } else {
                ratio(inst, i)
            }
        })
        .collect()
}

/// Reward discretization anchored at agent `i*`: step `δ = ε f(i*) / (2n²)` and
/// `f̃(i) = floor(f(i)/δ) δ`, kept in integer units of `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub epsilon: f64,
    pub i_star: usize,
    pub step: f64,
    pub units: Vec<u64>,
    /// Largest grid index, `floor(2n³/ε)`.
    pub max_units: u64,
}

impl Discretization {
    pub fn new(inst: &Instance, gamma: f64, i_star: usize) -> Result<Self> {
        check_gamma(gamma)?;
        inst.check_agent(i_star)?;
        let top = inst.singleton_value(i_star);
        if top <= 0.0 {
            return Err(Error::InvalidParameter(format!("anchor {i_star} has zero reward")));
        }
        let n = inst.n() as f64;
        let epsilon = fptas_epsilon(inst.n(), gamma);
        let step = epsilon * top / (2.0 * n * n);
        let units = (0..inst.n()).map(|i| (inst.singleton_value(i) / step).floor() as u64).collect();
        let max_units = (2.0 * n * n * n / epsilon).floor() as u64;
        Ok(Discretization { epsilon, i_star, step, units, max_units })
    }

    pub fn units_of(&self, team: AgentSet) -> u64 {
        team.iter().map(|i| self.units[i]).sum()
    }

    /// `f̃(S)`.
    pub fn value(&self, team: AgentSet) -> f64 {
        self.units_of(team) as f64 * self.step
    }

    pub fn x_tilde(&self, units: u64) -> f64 {
        units as f64 * self.step
    }
}

/// A set returned by the knapsack program, with its shares `α̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpSolution {
    pub team: AgentSet,
    pub total_share: f64,
    /// `(1 - Σα̃) x̃`.
    pub objective: f64,
}

/// Minimizes `Σ α̃_i` over `{i*, ī} ⊆ S ⊆ domain` with `f̃(S) = x̃`, where `x̃` is
/// `x_units` grid steps. Returns `None` when no such set exists.
pub fn dp_solve(
    disc: &Discretization,
    domain: AgentSet,
    i_bar: usize,
    x_units: u64,
    alpha: &[f64],
) -> Result<Option<DpSolution>> {
    Ok(dp_table(disc, domain, i_bar, x_units, alpha)?.last(x_units).map(|e| DpSolution {
        team: e.set,
        total_share: e.value,
        objective: (1.0 - e.value) * disc.x_tilde(x_units),
    }))
}

/// The full stage table behind [`dp_solve`].
pub fn dp_table(disc: &Discretization, domain: AgentSet, i_bar: usize, x_units: u64, alpha: &[f64]) -> Result<DpTable> {
    let i_star = disc.i_star;
    if !domain.contains(i_star) || !domain.contains(i_bar) {
        return Err(Error::InvalidParameter(format!("domain {domain} must contain agents {i_star} and {i_bar}")));
    }
    if x_units > disc.max_units {
        return Err(Error::InvalidParameter(format!(
            "x_tilde index {x_units} is beyond the grid limit {}",
            disc.max_units
        )));
    }
    let item = |agent: usize| DpItem { agent, weight: disc.units[agent], share: alpha[agent] };
    let seed: Vec<DpItem> = AgentSet::singleton(i_star).with(i_bar).iter().map(item).collect();
    let items: Vec<DpItem> = domain.without(i_star).without(i_bar).iter().map(item).collect();
    Ok(DpTable::build(&seed, &items, x_units))
}

/// One nonempty knapsack result inside the FPTAS search.
#[derive(Debug, Clone, PartialEq)]
pub struct Fptas2Candidate {
    pub i_star: usize,
    pub i_bar: usize,
    pub x_tilde: f64,
    /// The set with its shares `α̃` restricted to it.
    pub contract: TeamContract,
    pub objective: f64,
}

/// Grid indices `x̃/δ` reachable as `f̃(S)` by sets containing `i*` whose members
/// have reward at most `f(i*)`. Every other index leaves the knapsack program empty.
fn reachable_units(inst: &Instance, disc: &Discretization) -> BTreeSet<u64> {
    let top = inst.singleton_value(disc.i_star);
    let mut sums = BTreeSet::from([disc.units[disc.i_star]]);
    for j in (0..inst.n()).filter(|&j| j != disc.i_star) {
        let f = inst.singleton_value(j);
        if f > 0.0 && f <= top {
            let shifted: Vec<u64> = sums.iter().map(|s| s + disc.units[j]).collect();
            sums.extend(shifted);
        }
    }
    sums.retain(|&s| s > 0 && s <= disc.max_units);
    sums
}

/// Runs the knapsack search over every anchor `i*`, estimate `x̃`, and agent `ī`,
/// passing each nonempty result to `visit`.
pub fn fptas_case2_visit(inst: &Instance, gamma: f64, mut visit: impl FnMut(&Fptas2Candidate)) -> Result<()> {
    require_additive(inst, "the FPTAS")?;
    check_gamma(gamma)?;
    for i_star in (0..inst.n()).filter(|&i| inst.singleton_value(i) > 0.0) {
        let disc = Discretization::new(inst, gamma, i_star)?;
        let top = inst.singleton_value(i_star);
        for x_units in reachable_units(inst, &disc) {
            let x_tilde = disc.x_tilde(x_units);
            for i_bar in (0..inst.n()).filter(|&i| {
                let f = inst.singleton_value(i);
                f > 0.0 && f <= top
            }) {
                let domain = domain_set(inst, i_bar, x_tilde, i_star, disc.epsilon)?;
                if !domain.contains(i_star) {
                    continue;
                }
                let share = approx_min_share(inst, i_bar, x_tilde, disc.epsilon)?;
                let alpha = approx_shares(inst, domain, share);
                if let Some(sol) = dp_solve(&disc, domain, i_bar, x_units, &alpha)? {
                    let shares = (0..inst.n()).map(|i| if sol.team.contains(i) { alpha[i] } else { 0.0 }).collect();
                    visit(&Fptas2Candidate {
                        i_star,
                        i_bar,
                        x_tilde,
                        contract: TeamContract::new(sol.team, shares)?,
                        objective: sol.objective,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Best knapsack result by objective; `None` if no result has positive objective.
pub fn fptas_case2(inst: &Instance, gamma: f64) -> Result<Option<Fptas2Candidate>> {
    let mut best: Option<Fptas2Candidate> = None;
    fptas_case2_visit(inst, gamma, |c| {
        if c.objective > best.as_ref().map_or(0.0, |b| b.objective) {
            best = Some(c.clone());
        }
    })?;
    Ok(best)
}

/// Fair contract with revenue at least `(1-γ)²` times the optimum, for additive rewards.
pub fn fptas(inst: &Instance, gamma: f64) -> Result<SolveResult> {
    require_additive(inst, "the FPTAS")?;
    check_gamma(gamma)?;
    let mut single = AgentSet::EMPTY;
    let mut single_value = f64::NEG_INFINITY;
    for i in (0..inst.n()).filter(|&i| inst.singleton_value(i) > 0.0) {
        let v = (1.0 - ratio(inst, i)) * inst.singleton_value(i);
        if v > single_value {
            single = AgentSet::singleton(i);
            single_value = v;
        }
    }
    let searched = fptas_case2(inst, gamma)?.map_or(AgentSet::EMPTY, |c| c.contract.team());

    let mut best = (TeamContract::empty(inst.n()), 0.0, 0.0);
    for team in [single, searched] {
        if team.is_empty() {
            continue;
        }
        let share = optimal_minimum_share(inst, team)?;
        let contract = least_incentive_contract(inst, team, share)?;
        let revenue = inst.revenue(&contract);
        if revenue > best.2 {
            best = (contract, share, revenue);
        }
    }
    let params =
        BTreeMap::from([("gamma".to_string(), gamma), ("epsilon".to_string(), fptas_epsilon(inst.n(), gamma))]);
    Ok(SolveResult::new(inst, best.0, Some(best.1), "fptas", params))
}
