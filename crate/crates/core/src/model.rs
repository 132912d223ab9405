//! Instances, contracts, and the value / marginal / demand oracles.

use crate::error::{Error, Result};
use crate::reward::RewardModel;
use crate::set::{AgentSet, MAX_AGENTS};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_ENUM_CAP: usize = 25;

/// Favor-the-principal comparison used by every effort decision: an agent offered
/// `share` works whenever the share reaches its cut-off wage, up to `tol`.
#[inline]
pub(crate) fn exerts_effort(share: f64, cutoff: f64, tol: f64) -> bool {
    share >= cutoff - tol
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    costs: Vec<f64>,
    reward: RewardModel,
    tol: f64,
    enum_cap: usize,
}

impl Instance {
    pub fn new(costs: Vec<f64>, reward: RewardModel) -> Result<Self> {
        Self::with_tol(costs, reward, DEFAULT_TOL)
    }

    pub fn with_tol(costs: Vec<f64>, mut reward: RewardModel, tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidInstance(format!("tolerance must be a nonnegative number, got {tol}")));
        }
        let n = costs.len();
        if n > MAX_AGENTS {
            return Err(Error::InvalidInstance(format!("{n} agents exceed the limit of {MAX_AGENTS}")));
        }
        if let Some((i, c)) = costs.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::InvalidInstance(format!("cost of agent {i} must be positive, got {c}")));
        }
        match &mut reward {
            RewardModel::Additive(values) => {
                if values.len() != n {
                    return Err(Error::InvalidInstance(format!("{} additive values for {n} agents", values.len())));
                }
                if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
                    return Err(Error::InvalidInstance(format!(
                        "additive value of agent {i} must be nonnegative, got {v}"
                    )));
                }
            }
            RewardModel::Explicit(table) => table.validate(n, tol)?,
            RewardModel::Coverage(cov) => {
                if cov.agent_covers().len() != n {
                    return Err(Error::InvalidInstance(format!(
                        "{} coverage sets for {n} agents",
                        cov.agent_covers().len()
                    )));
                }
            }
        }
        debug_assert_eq!(reward.agents(), Some(n));
        Ok(Instance { costs, reward, tol, enum_cap: DEFAULT_ENUM_CAP })
    }

    /// Overrides the soft limit on exhaustive enumeration (default 25 agents).
    #[must_use]
    pub fn with_enum_cap(mut self, cap: usize) -> Self {
        self.enum_cap = cap.min(MAX_AGENTS);
        self
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.costs[i]
    }

    pub fn reward(&self) -> &RewardModel {
        &self.reward
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn enum_cap(&self) -> usize {
        self.enum_cap
    }

    pub fn ground(&self) -> AgentSet {
        AgentSet::full(self.n())
    }

    pub fn is_additive(&self) -> bool {
        matches!(self.reward, RewardModel::Additive(_))
    }

    pub fn is_submodular(&self) -> bool {
        match &self.reward {
            RewardModel::Additive(_) | RewardModel::Coverage(_) => true,
            RewardModel::Explicit(t) => t.is_submodular(),
        }
    }

    /// Non-fatal observations, currently rewards outside `[0, 1]`.
    pub fn warnings(&self) -> Vec<String> {
        let top = self.value(self.ground());
        if top > 1.0 + self.tol {
            vec![format!("reward of the full team is {top}, outside [0, 1]; treating rewards as unnormalized")]
        } else {
            Vec::new()
        }
    }

    pub fn check_agent(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::AgentOutOfRange { agent: i, n: self.n() })
        }
    }

    pub fn check_set(&self, s: AgentSet) -> Result<()> {
        match s.difference(self.ground()).iter().next() {
            None => Ok(()),
            Some(agent) => Err(Error::AgentOutOfRange { agent, n: self.n() }),
        }
    }

    pub fn check_enumerable(&self, size: usize) -> Result<()> {
        if size <= self.enum_cap {
            Ok(())
        } else {
            Err(Error::EnumerationCap { size, cap: self.enum_cap })
        }
    }

    /// `f(S)`.
    pub fn value(&self, s: AgentSet) -> f64 {
        debug_assert!(s.is_subset_of(self.ground()));
        self.reward.value(s)
    }

    /// `f({i})`.
    pub fn singleton_value(&self, i: usize) -> f64 {
        self.value(AgentSet::singleton(i))
    }

    /// `f(S) - f(S \ {i})` when `i ∈ S`, otherwise `f(S ∪ {i}) - f(S)`.
    pub fn marginal(&self, i: usize, s: AgentSet) -> f64 {
        debug_assert!(i < self.n());
        self.reward.marginal(i, s)
    }

    /// `c_i / f(i | S \ {i})`, or `+inf` when the marginal is zero.
    pub fn cutoff_wage(&self, i: usize, s: AgentSet) -> f64 {
        let m = self.marginal(i, s);
        if m > 0.0 {
            self.costs[i] / m
        } else {
            f64::INFINITY
        }
    }

    /// `(1 - Σα) f(S)`.
    pub fn revenue(&self, contract: &TeamContract) -> f64 {
        (1.0 - contract.total_share()) * self.value(contract.team())
    }

    /// Rejects contracts sized for a different instance.
    pub fn check_contract(&self, contract: &TeamContract) -> Result<()> {
        if contract.alpha().len() != self.n() {
            return Err(Error::InvalidContract(format!(
                "contract has {} shares for {} agents",
                contract.alpha().len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// First member whose share falls short of its cut-off wage, as `(agent, share, cutoff)`.
    pub fn first_infeasible(&self, contract: &TeamContract) -> Option<(usize, f64, f64)> {
        let team = contract.team();
        team.iter().find_map(|i| {
            let cutoff = self.cutoff_wage(i, team);
            let share = contract.share(i);
            (!exerts_effort(share, cutoff, self.tol)).then_some((i, share, cutoff))
        })
    }

    pub fn is_feasible(&self, contract: &TeamContract) -> bool {
        self.first_infeasible(contract).is_none()
    }

    pub(crate) fn require_feasible(&self, contract: &TeamContract) -> Result<()> {
        self.check_contract(contract)?;
        match self.first_infeasible(contract) {
            None => Ok(()),
            Some((agent, share, cutoff)) => Err(Error::InfeasibleContract { agent, share, cutoff }),
        }
    }

    /// A set maximizing `f(S) - Σ_{i∈S} p_i` over subsets of the price vector's ground set.
    ///
    /// Ties go to inclusion: an additive agent joins when `f(i) >= p_i`; otherwise the
    /// union of all maximizers is returned when it is itself a maximizer, and failing
    /// that the inclusion-wise maximal maximizer with the smallest bitmask.
    pub fn demand_set(&self, pv: &PriceVector) -> Result<AgentSet> {
        self.check_set(pv.ground())?;
        if pv.prices().len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "price vector has {} entries for {} agents",
                pv.prices().len(),
                self.n()
            )));
        }
        let tol = self.tol;
        if let RewardModel::Additive(values) = &self.reward {
            return Ok(pv.ground().iter().filter(|&i| values[i] >= pv.price(i) - tol).collect());
        }
        let ground = pv.ground();
        self.check_enumerable(ground.len())?;
        let objective = |s: AgentSet| self.value(s) - s.iter().map(|i| pv.price(i)).sum::<f64>();
        let best = ground.subsets().map(objective).fold(f64::NEG_INFINITY, f64::max);
        let near: Vec<AgentSet> = ground.subsets().filter(|&s| objective(s) >= best - tol).collect();
        let union = near.iter().fold(AgentSet::EMPTY, |u, s| u.union(*s));
        if objective(union) >= best - tol {
            return Ok(union);
        }
        let maximal = near
            .iter()
            .copied()
            .filter(|s| !near.iter().any(|t| t != s && s.is_subset_of(*t)))
            .min()
            .expect("the maximizer family is nonempty");
        Ok(maximal)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamContract {
    team: AgentSet,
    alpha: Vec<f64>,
}

impl TeamContract {
    /// `alpha` holds one share per agent of the instance; entries outside `team` must be zero.
    pub fn new(team: AgentSet, alpha: Vec<f64>) -> Result<Self> {
        if let Some(agent) = team.iter().find(|&i| i >= alpha.len()) {
            return Err(Error::AgentOutOfRange { agent, n: alpha.len() });
        }
        for (i, &a) in alpha.iter().enumerate() {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::InvalidContract(format!("share of agent {i} must be nonnegative, got {a}")));
            }
            if a != 0.0 && !team.contains(i) {
                return Err(Error::InvalidContract(format!("agent {i} is outside the team but has share {a}")));
            }
        }
        Ok(TeamContract { team, alpha })
    }

    /// Every member of `team` receives `share`.
    pub fn uniform(n: usize, team: AgentSet, share: f64) -> Result<Self> {
        let alpha = (0..n).map(|i| if team.contains(i) { share } else { 0.0 }).collect();
        Self::new(team, alpha)
    }

    pub fn empty(n: usize) -> Self {
        TeamContract { team: AgentSet::EMPTY, alpha: vec![0.0; n] }
    }

    pub fn team(&self) -> AgentSet {
        self.team
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn share(&self, i: usize) -> f64 {
        self.alpha[i]
    }

    pub fn total_share(&self) -> f64 {
        self.team.iter().map(|i| self.alpha[i]).sum()
    }

    pub fn is_uniform(&self) -> bool {
        let mut shares = self.team.iter().map(|i| self.alpha[i]);
        match shares.next() {
            None => true,
            Some(first) => shares.all(|a| a == first),
        }
    }

    /// The contract with the shares of `i` and `j` exchanged.
    #[must_use]
    pub fn swapped(&self, i: usize, j: usize) -> TeamContract {
        let mut alpha = self.alpha.clone();
        alpha.swap(i, j);
        TeamContract { team: self.team, alpha }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceVector {
    prices: Vec<f64>,
    ground: AgentSet,
}

impl PriceVector {
    pub fn new(prices: Vec<f64>, ground: AgentSet) -> Result<Self> {
        if let Some(agent) = ground.iter().find(|&i| i >= prices.len()) {
            return Err(Error::AgentOutOfRange { agent, n: prices.len() });
        }
        if let Some(p) = prices.iter().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::InvalidParameter(format!("price {p} must be nonnegative")));
        }
        Ok(PriceVector { prices, ground })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn price(&self, i: usize) -> f64 {
        self.prices[i]
    }

    pub fn ground(&self) -> AgentSet {
        self.ground
    }
}
