//! Constant-factor approximation for submodular rewards.
//!
//! A team is chosen by maximizing the uniform-share objective `g` over three
//! candidate families (best singleton, a demand-query grid search, and a
//! small-contract demand query), then paid with its least-incentive fair contract.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fairness::{least_incentive_contract, optimal_minimum_share};
use crate::model::{Instance, PriceVector};
use crate::result::SolveResult;
use crate::set::AgentSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubmodApproxParams {
    pub delta: f64,
    pub tau: f64,
    pub eta: f64,
    pub beta: f64,
    pub lambda: f64,
    /// Pick among candidate teams by fair-contract revenue instead of `g`.
    pub rescore: bool,
}

impl Default for SubmodApproxParams {
    fn default() -> Self {
        SubmodApproxParams {
            delta: 1.0 / 128.0,
            tau: 1.0 / 128.0,
            eta: 17.0 / 16.0,
            beta: 17.0 / 16.0,
            lambda: 0.5,
            rescore: false,
        }
    }
}

impl SubmodApproxParams {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(self.delta) || !open_unit(self.tau) {
            return Err(Error::InvalidParameter(format!(
                "delta and tau must lie in (0, 1), got {} and {}",
                self.delta, self.tau
            )));
        }
        if !(self.eta > 1.0 && self.beta > 1.0 && self.eta.is_finite() && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eta and beta must exceed 1, got {} and {}",
                self.eta, self.beta
            )));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1], got {}", self.lambda)));
        }
        Ok(())
    }

    fn to_map(self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("delta".to_string(), self.delta),
            ("tau".to_string(), self.tau),
            ("eta".to_string(), self.eta),
            ("beta".to_string(), self.beta),
            ("lambda".to_string(), self.lambda),
            ("rescore".to_string(), if self.rescore { 1.0 } else { 0.0 }),
        ])
    }
}

fn require_submodular(inst: &Instance, what: &'static str) -> Result<()> {
    if inst.is_submodular() {
        Ok(())
    } else {
        Err(Error::NotSubmodular(what))
    }
}

/// Revenue of paying every member the largest cut-off wage in the team:
/// `(1 - |S| max_i c_i / f(i|S\{i})) f(S)`. `-inf` if some member has zero marginal.
pub fn g_value(inst: &Instance, team: AgentSet) -> f64 {
    if team.is_empty() {
        return 0.0;
    }
    let share = team.iter().map(|i| inst.cutoff_wage(i, team)).fold(0.0, f64::max);
    if share.is_infinite() {
        return f64::NEG_INFINITY;
    }
    (1.0 - team.len() as f64 * share) * inst.value(team)
}

fn max_singleton(inst: &Instance, team: AgentSet) -> f64 {
    team.iter().map(|i| inst.singleton_value(i)).fold(0.0, f64::max)
}

/// Shrinks `team` by repeatedly dropping the member with the smallest marginal
/// (lowest index on ties) until `(1-λ)Ψ <= f(U) <= Ψ + max_{i∈U} f({i})`.
///
/// Returns `Ok(None)` if every prefix of the removal order misses the window.
pub fn scaling_lemma(inst: &Instance, team: AgentSet, lambda: f64, psi: f64) -> Result<Option<AgentSet>> {
    require_submodular(inst, "the scaling procedure")?;
    inst.check_set(team)?;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1], got {lambda}")));
    }
    let f_team = inst.value(team);
    if !(psi >= 0.0 && psi < f_team) {
        return Err(Error::InvalidParameter(format!("psi must lie in [0, f(S)) = [0, {f_team}), got {psi}")));
    }
    let tol = inst.tol();
    let in_window = |u: AgentSet| {
        let f = inst.value(u);
        f >= (1.0 - lambda) * psi - tol && f <= psi + max_singleton(inst, u) + tol
    };
    let mut current = team;
    if in_window(current) {
        return Ok(Some(current));
    }
    while !current.is_empty() {
        let mut weakest = None;
        let mut smallest = f64::INFINITY;
        for k in current {
            let m = inst.marginal(k, current);
            if m < smallest {
                smallest = m;
                weakest = Some(k);
            }
        }
        current.remove(weakest.expect("current is nonempty"));
        if in_window(current) {
            return Ok(Some(current));
        }
    }
    Ok(None)
}

/// One `(γ̃, ỹ)` iteration of the grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct Case3Step {
    pub gamma: f64,
    pub y: f64,
    /// Agents with `f({i}) <= δηỹ`.
    pub allowed: AgentSet,
    /// Demand set over `allowed` at prices `max(c_i / (2γ̃β), γ̃ỹ/4)`.
    pub demand: AgentSet,
    /// `ỹ/16 - max_{i∈demand} f({i})`.
    pub psi: f64,
    /// Output of the scaling procedure; `None` when the step was skipped or it failed.
    pub scaled: Option<AgentSet>,
}

/// Contract-level estimates `γ̃ = β^k τ / (2n)` for `k = 0..=floor(log_β(2n/τ))`.
pub fn gamma_grid(n: usize, params: &SubmodApproxParams) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let base = params.tau / (2.0 * n as f64);
    let top = ((2.0 * n as f64 / params.tau).ln() / params.beta.ln() + 1e-9).floor() as i32;
    (0..=top).map(|k| params.beta.powi(k) * base).collect()
}

/// Reward-level estimates `η^k f({i})` for positive `f({i})` and `k = 0..=floor(log_η n)`, ascending.
pub fn reward_grid(inst: &Instance, params: &SubmodApproxParams) -> Vec<f64> {
    let n = inst.n();
    if n == 0 {
        return Vec::new();
    }
    let top = ((n as f64).ln() / params.eta.ln() + 1e-9).floor() as i32;
    let mut ys: Vec<f64> = (0..n)
        .map(|i| inst.singleton_value(i))
        .filter(|&f| f > 0.0)
        .flat_map(|f| (0..=top).map(move |k| params.eta.powi(k) * f))
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

/// Every iteration of the grid search, in loop order (`γ̃` outer, `ỹ` inner).
pub fn case3_steps(inst: &Instance, params: &SubmodApproxParams) -> Result<Vec<Case3Step>> {
    require_submodular(inst, "the demand-query grid search")?;
    params.validate()?;
    let n = inst.n();
    let ys = reward_grid(inst, params);
    let singles: Vec<f64> = (0..n).map(|i| inst.singleton_value(i)).collect();
    let mut steps = Vec::new();
    for gamma in gamma_grid(n, params) {
        for &y in &ys {
            let allowed: AgentSet = (0..n).filter(|&i| singles[i] <= params.delta * params.eta * y).collect();
            let prices = (0..n).map(|i| (inst.cost(i) / (2.0 * gamma * params.beta)).max(gamma * y / 4.0)).collect();
            let demand = inst.demand_set(&PriceVector::new(prices, allowed)?)?;
            let psi = y / 16.0 - max_singleton(inst, demand);
            let scaled = if demand.is_empty() || psi < 0.0 || psi >= inst.value(demand) {
                None
            } else {
                scaling_lemma(inst, demand, params.lambda, psi)?
            };
            steps.push(Case3Step { gamma, y, allowed, demand, psi, scaled });
        }
    }
    Ok(steps)
}

/// Best scaled demand set by `g` across the grid (smaller bitmask on ties), or `∅`.
pub fn case3_search(inst: &Instance, params: &SubmodApproxParams) -> Result<AgentSet> {
    let mut best = AgentSet::EMPTY;
    let mut best_g = 0.0;
    for u in case3_steps(inst, params)?.into_iter().filter_map(|s| s.scaled) {
        let g = g_value(inst, u);
        if g > best_g || (g == best_g && u < best) {
            best = u;
            best_g = g;
        }
    }
    Ok(best)
}

/// Demand set at prices `c_i n / τ`, aimed at teams whose uniform share is below `τ/(2n)`.
pub fn case2_bounded(inst: &Instance, tau: f64) -> Result<AgentSet> {
    require_submodular(inst, "the small-contract demand query")?;
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!("tau must lie in (0, 1), got {tau}")));
    }
    let n = inst.n() as f64;
    let prices = inst.costs().iter().map(|c| c * n / tau).collect();
    inst.demand_set(&PriceVector::new(prices, inst.ground())?)
}

/// Best single agent by `g({i})`, skipping agents with zero reward.
pub fn best_singleton(inst: &Instance) -> AgentSet {
    let mut best = AgentSet::EMPTY;
    let mut best_g = f64::NEG_INFINITY;
    for i in (0..inst.n()).filter(|&i| inst.singleton_value(i) > 0.0) {
        let g = g_value(inst, AgentSet::singleton(i));
        if g > best_g {
            best = AgentSet::singleton(i);
            best_g = g;
        }
    }
    best
}

fn fair_revenue(inst: &Instance, team: AgentSet) -> Result<f64> {
    let share = optimal_minimum_share(inst, team)?;
    Ok(inst.revenue(&least_incentive_contract(inst, team, share)?))
}

/// Picks a team among the three branches and `∅` by `g`, then pays it the
/// least-incentive fair contract.
pub fn constant_approx(inst: &Instance, params: &SubmodApproxParams) -> Result<SolveResult> {
    require_submodular(inst, "the constant approximation")?;
    params.validate()?;
    let candidates =
        [best_singleton(inst), case3_search(inst, params)?, case2_bounded(inst, params.tau)?, AgentSet::EMPTY];
    let score = |s: AgentSet| -> Result<f64> {
        if !params.rescore {
            return Ok(g_value(inst, s));
        }
        match fair_revenue(inst, s) {
            Err(Error::InfeasibleTeam { .. }) => Ok(f64::NEG_INFINITY),
            other => other,
        }
    };
    let mut branch = 0;
    let mut best_score = score(candidates[0])?;
    for (k, &s) in candidates.iter().enumerate().skip(1) {
        let v = score(s)?;
        if v > best_score {
            branch = k;
            best_score = v;
        }
    }
    let team = candidates[branch];
    let share = optimal_minimum_share(inst, team)?;
    let contract = least_incentive_contract(inst, team, share)?;
    let mut params_map = params.to_map();
    params_map.insert("branch".into(), ((branch + 1) % 4) as f64);
    Ok(SolveResult::new(inst, contract, Some(share), "submodular-approx", params_map))
}
