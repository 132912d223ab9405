//! Worked examples, seeded random families, and the subset-sum hardness construction.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::reward::RewardModel;
use crate::set::{AgentSet, MAX_AGENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkedExample {
    /// Two additive agents, `f = (0.5, 0.25)`, `c = (0.05, 0.05)`.
    E1,
    /// Two additive agents, `f = (0.5, 0.5)`, `c = (1/16, 1/8)`; fair and uniform optima differ by 4/5.
    E2,
    /// Four agents under a maximum of three additive functions; swaps can have two equilibria.
    E3,
}

impl FromStr for WorkedExample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(WorkedExample::E1),
            "e2" => Ok(WorkedExample::E2),
            "e3" => Ok(WorkedExample::E3),
            other => Err(Error::InvalidParameter(format!("unknown example {other:?}; expected e1, e2 or e3"))),
        }
    }
}

impl fmt::Display for WorkedExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WorkedExample::E1 => "e1",
            WorkedExample::E2 => "e2",
            WorkedExample::E3 => "e3",
        })
    }
}

/// Additive components of the four-agent maximum-of-additive example.
pub const XOS_COMPONENTS: [[f64; 4]; 3] = [[6.0, 6.0, 0.0, 0.0], [0.0, 0.0, 6.5, 6.5], [2.0, 2.0, 5.0, 5.0]];

/// Table of `S ↦ max_k Σ_{i∈S} ω_k(i)` over all subsets of `components[0].len()` agents.
pub fn max_of_additive_table(components: &[[f64; 4]]) -> Vec<f64> {
    AgentSet::full(4)
        .subsets()
        .map(|s| components.iter().map(|w| s.iter().map(|i| w[i]).sum::<f64>()).fold(0.0, f64::max))
        .collect()
}

pub fn worked_example(which: WorkedExample) -> Instance {
    let built = match which {
        WorkedExample::E1 => Instance::new(vec![0.05, 0.05], RewardModel::additive(vec![0.5, 0.25])),
        WorkedExample::E2 => Instance::new(vec![1.0 / 16.0, 1.0 / 8.0], RewardModel::additive(vec![0.5, 0.5])),
        WorkedExample::E3 => {
            Instance::new(vec![0.34, 0.25, 0.5, 0.08], RewardModel::explicit(max_of_additive_table(&XOS_COMPONENTS)))
        }
    };
    built.expect("built-in examples are valid")
}

/// A subset-sum question: is there a size-`k` subset of `weights` summing to half the total?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumSpec {
    weights: Vec<u64>,
    k: usize,
}

impl SubsetSumSpec {
    pub fn new(weights: Vec<u64>, k: usize) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::InvalidParameter("subset-sum weights must be positive and nonempty".into()));
        }
        if k == 0 || k > weights.len() {
            return Err(Error::InvalidParameter(format!("k must lie in 1..={}, got {k}", weights.len())));
        }
        Ok(SubsetSumSpec { weights, k })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `1 / (4 W m k)`.
    pub fn delta(&self) -> f64 {
        1.0 / (4 * self.total() * self.weights.len() as u64 * self.k as u64) as f64
    }

    /// Brute-force answer to the subset-sum question.
    pub fn has_half_sum_subset(&self) -> bool {
        let total = self.total();
        total.is_multiple_of(2)
            && AgentSet::full(self.weights.len())
                .subsets()
                .any(|s| s.len() == self.k && 2 * s.iter().map(|i| self.weights[i]).sum::<u64>() == total)
    }
}

/// Additive instance whose optimal fair revenue reaches the returned threshold iff the
/// subset-sum question has a yes answer: `f(i) = w_i δ + 1/(2m)`,
/// `c_i = f(i)² / (Wδ + k/m)`, threshold `(Wδ + k/m) / 4`.
pub fn subset_sum_instance(spec: &SubsetSumSpec) -> Result<(Instance, f64)> {
    let m = spec.weights.len() as f64;
    let delta = spec.delta();
    let scale = spec.total() as f64 * delta + spec.k as f64 / m;
    let values: Vec<f64> = spec.weights.iter().map(|&w| w as f64 * delta + 1.0 / (2.0 * m)).collect();
    let costs = values.iter().map(|f| f * f / scale).collect();
    Ok((Instance::new(costs, RewardModel::additive(values))?, scale / 4.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    Additive,
    Coverage,
}

impl FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(RandomKind::Additive),
            "coverage" => Ok(RandomKind::Coverage),
            other => Err(Error::InvalidParameter(format!("unknown random family {other:?}"))),
        }
    }
}

/// Seed-deterministic random instance.
///
/// Additive rewards are positive and sum to a total in `[0.5, 1)`. Coverage instances
/// have `2n` elements with weights summing to 1, and every agent covers at least one.
/// Costs are uniform in `(0, cost_scale f({i})]`.
pub fn random_instance(kind: RandomKind, n: usize, seed: u64, cost_scale: f64) -> Result<Instance> {
    if !(cost_scale > 0.0 && cost_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("cost scale must be positive, got {cost_scale}")));
    }
    if n > MAX_AGENTS {
        return Err(Error::InvalidParameter(format!("{n} agents exceed the limit of {MAX_AGENTS}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || 1.0 - rng.gen::<f64>();
    let reward = match kind {
        RandomKind::Additive => {
            let raw: Vec<f64> = (0..n).map(|_| unit()).collect();
            let mass = 0.5 + 0.5 * (1.0 - unit());
            let total: f64 = raw.iter().sum();
            RewardModel::additive(raw.iter().map(|u| u * mass / total).collect())
        }
        RandomKind::Coverage => {
            let m = 2 * n;
            let raw: Vec<f64> = (0..m).map(|_| unit()).collect();
            let total: f64 = raw.iter().sum();
            let weights = raw.iter().map(|w| w / total).collect();
            let covers = (0..n)
                .map(|_| {
                    let density = 0.15 + 0.4 * unit();
                    let mut cover: Vec<usize> = (0..m).filter(|_| unit() <= density).collect();
                    if cover.is_empty() {
                        cover.push(((unit() * m as f64) as usize).min(m - 1));
                    }
                    cover
                })
                .collect();
            RewardModel::coverage(weights, covers)?
        }
    };
    let singles: Vec<f64> = (0..n).map(|i| reward_singleton(&reward, i)).collect();
    let costs = singles.iter().map(|f| unit() * cost_scale * f).collect();
    Instance::new(costs, reward)
}

fn reward_singleton(reward: &RewardModel, i: usize) -> f64 {
    reward.value(AgentSet::singleton(i))
}
