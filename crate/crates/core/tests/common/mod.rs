//! Shared generators and oracles for the integration suites.
#![allow(dead_code)]

use fairteam::instances::{random_instance, RandomKind};
use fairteam::{AgentSet, Instance, TeamContract};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cost scales cycled through by the suites so that both cheap and expensive agents appear.
const COST_SCALES: [f64; 4] = [0.05, 0.2, 0.5, 1.0];

pub fn instance(kind: RandomKind, n: usize, seed: u64) -> Instance {
    random_instance(kind, n, seed, COST_SCALES[(seed % 4) as usize]).expect("generator output is valid")
}

/// `count` additive instances with `n` cycling through `3..=10`.
pub fn additive_suite(count: u64) -> Vec<Instance> {
    (0..count).map(|k| instance(RandomKind::Additive, 3 + (k % 8) as usize, 1000 + k)).collect()
}

/// `count` coverage instances with `n` cycling through `3..=8`.
pub fn coverage_suite(count: u64) -> Vec<Instance> {
    (0..count).map(|k| instance(RandomKind::Coverage, 3 + (k % 6) as usize, 5000 + k)).collect()
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> AgentSet {
    AgentSet::from_bits(rng.gen_range(0..1u64 << n))
}

/// A nonempty team whose members all have positive marginal contribution.
pub fn random_team(rng: &mut ChaCha8Rng, inst: &Instance, min_size: usize) -> Option<AgentSet> {
    for _ in 0..64 {
        let team = random_subset(rng, inst.n());
        if team.len() >= min_size.max(1) && team.iter().all(|i| inst.marginal(i, team) > 0.0) {
            return Some(team);
        }
    }
    None
}

/// A feasible contract on a random team. Shares mix exact cut-offs, independent
/// surcharges and a common floor, so ties and fair contracts both occur.
pub fn random_feasible_contract(rng: &mut ChaCha8Rng, inst: &Instance) -> Option<TeamContract> {
    let team = random_team(rng, inst, 1)?;
    let floor = rng.gen::<f64>() * 0.5;
    let mut alpha = vec![0.0; inst.n()];
    for i in team {
        let cutoff = inst.cutoff_wage(i, team);
        alpha[i] = match rng.gen_range(0..3) {
            0 => cutoff,
            1 => cutoff + rng.gen::<f64>() * 0.2,
            _ => cutoff.max(floor),
        };
    }
    Some(TeamContract::new(team, alpha).expect("shares are nonnegative"))
}

/// Optimal fair revenue computed straight from the closed form, independent of the solvers:
/// each team is paid `max(L*, cutoff)` with `L* = max_i (c_i/m_i)(1 - m_i/f(S))`.
pub fn fair_opt_oracle(inst: &Instance) -> f64 {
    let mut best = 0.0f64;
    for team in inst.ground().subsets().skip(1) {
        let f = inst.value(team);
        let marginals: Vec<(usize, f64)> = team.iter().map(|i| (i, inst.marginal(i, team))).collect();
        if f <= 0.0 || marginals.iter().any(|&(_, m)| m <= 0.0) {
            continue;
        }
        let floor = marginals.iter().map(|&(i, m)| inst.cost(i) / m * (1.0 - m / f)).fold(0.0, f64::max);
        let total: f64 = marginals.iter().map(|&(i, m)| floor.max(inst.cost(i) / m)).sum();
        best = best.max((1.0 - total) * f);
    }
    best
}

/// Optimal uniform-share revenue: the share must cover the largest cut-off in the team.
pub fn nondiscriminatory_oracle(inst: &Instance) -> f64 {
    let mut best = 0.0f64;
    for team in inst.ground().subsets().skip(1) {
        let share = team.iter().map(|i| inst.cost(i) / inst.marginal(i, team)).fold(0.0, f64::max);
        if share.is_finite() {
            best = best.max((1.0 - team.len() as f64 * share) * inst.value(team));
        }
    }
    best
}
