//! Reward models: additive, explicit set-function tables, and weighted coverage.

use crate::error::{Error, Result};
use crate::set::AgentSet;

#[derive(Debug, Clone, PartialEq)]
pub enum RewardModel {
    /// `f(S) = sum of values[i] over i in S`.
    Additive(Vec<f64>),
    /// Arbitrary monotone set function given by its full `2^n` table.
    Explicit(ExplicitTable),
    /// Weighted coverage: `f(S)` is the total weight of elements covered by some member of `S`.
    Coverage(Coverage),
}

impl RewardModel {
    pub fn additive(values: Vec<f64>) -> Self {
        RewardModel::Additive(values)
    }

    pub fn explicit(table: Vec<f64>) -> Self {
        RewardModel::Explicit(ExplicitTable::new(table))
    }

    pub fn coverage(element_weights: Vec<f64>, agent_covers: Vec<Vec<usize>>) -> Result<Self> {
        Coverage::new(element_weights, agent_covers).map(RewardModel::Coverage)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RewardModel::Additive(_) => "additive",
            RewardModel::Explicit(_) => "explicit",
            RewardModel::Coverage(_) => "coverage",
        }
    }

    /// Number of agents the model is defined over.
    pub(crate) fn agents(&self) -> Option<usize> {
        match self {
            RewardModel::Additive(v) => Some(v.len()),
            RewardModel::Explicit(t) => {
                let len = t.table.len();
                len.is_power_of_two().then(|| len.trailing_zeros() as usize)
            }
            RewardModel::Coverage(c) => Some(c.agent_covers.len()),
        }
    }

    pub(crate) fn value(&self, s: AgentSet) -> f64 {
        match self {
            RewardModel::Additive(v) => s.iter().map(|i| v[i]).sum(),
            RewardModel::Explicit(t) => t.table[s.bits() as usize],
            RewardModel::Coverage(c) => c.value(s),
        }
    }

    /// `f(S ∪ {i}) - f(S \ {i})`, clamped at zero against rounding.
    pub(crate) fn marginal(&self, i: usize, s: AgentSet) -> f64 {
        match self {
            RewardModel::Additive(v) => v[i],
            RewardModel::Explicit(t) => {
                let with = t.table[s.with(i).bits() as usize];
                let without = t.table[s.without(i).bits() as usize];
                (with - without).max(0.0)
            }
            RewardModel::Coverage(c) => c.marginal(i, s.without(i)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitTable {
    table: Vec<f64>,
    submodular: bool,
}

impl ExplicitTable {
    /// The submodularity flag is filled in when the table is validated by
    /// [`Instance::new`](crate::Instance::new).
    pub fn new(table: Vec<f64>) -> Self {
        ExplicitTable { table, submodular: false }
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn is_submodular(&self) -> bool {
        self.submodular
    }

    pub(crate) fn validate(&mut self, n: usize, tol: f64) -> Result<()> {
        if self.table.len() != 1usize << n {
            return Err(Error::InvalidInstance(format!(
                "explicit table has {} entries, expected 2^{n} = {}",
                self.table.len(),
                1usize << n
            )));
        }
        if let Some(k) = self.table.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance(format!("explicit table entry {k} is not finite")));
        }
        if self.table[0].abs() > tol {
            return Err(Error::InvalidInstance(format!("reward of the empty set must be 0, got {}", self.table[0])));
        }
        let ground = AgentSet::full(n);
        for s in ground.subsets() {
            for i in ground.difference(s) {
                let (lo, hi) = (self.table[s.bits() as usize], self.table[s.with(i).bits() as usize]);
                if hi < lo - tol {
                    return Err(Error::InvalidInstance(format!(
                        "explicit table is not monotone: f({}) = {hi} < f({s}) = {lo}",
                        s.with(i)
                    )));
                }
            }
        }
        self.submodular = self.check_submodular(n, tol);
        Ok(())
    }

    /// Exhaustive diminishing-returns check: `f(i|S) >= f(i|S ∪ {j})` for all `S` and `i, j ∉ S`.
    fn check_submodular(&self, n: usize, tol: f64) -> bool {
        let f = |s: AgentSet| self.table[s.bits() as usize];
        let ground = AgentSet::full(n);
        ground.subsets().all(|s| {
            let outside = ground.difference(s);
            outside.iter().all(|i| {
                let gain = f(s.with(i)) - f(s);
                outside.without(i).iter().all(|j| f(s.with(i).with(j)) - f(s.with(j)) <= gain + tol)
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    element_weights: Vec<f64>,
    agent_covers: Vec<Vec<usize>>,
    masks: Vec<Vec<u64>>,
}

impl Coverage {
    pub fn new(element_weights: Vec<f64>, agent_covers: Vec<Vec<usize>>) -> Result<Self> {
        let m = element_weights.len();
        if let Some(w) = element_weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidInstance(format!("coverage element weight {w} must be a nonnegative number")));
        }
        let words = m.div_ceil(64).max(1);
        let mut masks = Vec::with_capacity(agent_covers.len());
        for (i, cover) in agent_covers.iter().enumerate() {
            let mut mask = vec![0u64; words];
            for &e in cover {
                if e >= m {
                    return Err(Error::InvalidInstance(format!(
                        "agent {i} covers element {e}, but only {m} elements exist"
                    )));
                }
                mask[e / 64] |= 1u64 << (e % 64);
            }
            masks.push(mask);
        }
        Ok(Coverage { element_weights, agent_covers, masks })
    }

    pub fn element_weights(&self) -> &[f64] {
        &self.element_weights
    }

    pub fn agent_covers(&self) -> &[Vec<usize>] {
        &self.agent_covers
    }

    fn words(&self) -> usize {
        self.element_weights.len().div_ceil(64).max(1)
    }

    fn with_union<R>(&self, s: AgentSet, f: impl FnOnce(&[u64]) -> R) -> R {
        let words = self.words();
        let mut stack = [0u64; 4];
        let mut heap = Vec::new();
        let buf: &mut [u64] = if words <= stack.len() {
            &mut stack[..words]
        } else {
            heap.resize(words, 0);
            &mut heap
        };
        for i in s {
            for (b, m) in buf.iter_mut().zip(&self.masks[i]) {
                *b |= m;
            }
        }
        f(buf)
    }

    /// Sum of weights over set bits of `bits & !exclude`, in ascending element order.
    fn weight(&self, bits: &[u64], exclude: Option<&[u64]>) -> f64 {
        let mut total = 0.0;
        for (w, &word) in bits.iter().enumerate() {
            let mut word = word & !exclude.map_or(0, |x| x[w]);
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                total += self.element_weights[w * 64 + b];
                word &= word - 1;
            }
        }
        total
    }

    fn value(&self, s: AgentSet) -> f64 {
        self.with_union(s, |u| self.weight(u, None))
    }

    /// Weight covered by `i` and by no member of `others`.
    fn marginal(&self, i: usize, others: AgentSet) -> f64 {
        self.with_union(others, |u| self.weight(&self.masks[i], Some(u)))
    }
}
