mod common;

use fairteam::additive::{
    dp_solve, fptas, fptas_case2_visit, fptas_epsilon, nondiscriminatory_additive, Discretization,
};
use fairteam::equilibrium::{enumerate_equilibria, is_equilibrium, swap_equilibrium};
use fairteam::exact::{optimal_fair_bruteforce, optimal_nondiscriminatory_bruteforce};
use fairteam::fairness::{is_fair_definitional, is_fair_submodular, least_incentive_contract, optimal_minimum_share};
use fairteam::instances::{subset_sum_instance, worked_example, RandomKind, SubsetSumSpec, WorkedExample};
use fairteam::knapsack::{DpItem, DpTable};
use fairteam::submodular::{constant_approx, scaling_lemma, SubmodApproxParams};
use fairteam::{AgentSet, Instance, PriceVector, RewardModel, Semantics, TeamContract};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn kind() -> impl Strategy<Value = RandomKind> {
    prop_oneof![Just(RandomKind::Additive), Just(RandomKind::Coverage)]
}

fn submodular(max_n: usize) -> impl Strategy<Value = Instance> {
    (kind(), 1..=max_n, any::<u64>()).prop_map(|(k, n, seed)| instance(k, n, seed))
}

fn additive(max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| instance(RandomKind::Additive, n, seed))
}

fn is_fair(inst: &Instance, c: &TeamContract) -> bool {
    is_fair_definitional(inst, c, Semantics::Pessimistic).unwrap().fair
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn models_are_monotone_and_submodular(inst in submodular(8), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = random_subset(&mut rng, inst.n());
        let sub = random_subset(&mut rng, inst.n()).intersection(s);
        prop_assert!(inst.value(sub) <= inst.value(s) + 1e-12);
        for i in inst.ground().difference(s) {
            prop_assert!(inst.marginal(i, s.with(i)) <= inst.marginal(i, sub.with(i)) + 1e-12);
        }
    }

    #[test]
    fn payment_identity(inst in submodular(7), seed in any::<u64>()) {
        let Some(c) = random_feasible_contract(&mut rng(seed), &inst) else { return Ok(()) };
        let f = inst.value(c.team());
        prop_assert!((inst.revenue(&c) + c.total_share() * f - f).abs() <= 1e-9);
    }

    #[test]
    fn demand_set_maximizes_utility(inst in submodular(8), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let prices: Vec<f64> = (0..inst.n()).map(|i| rng.gen::<f64>() * 1.5 * inst.singleton_value(i)).collect();
        let pv = PriceVector::new(prices.clone(), inst.ground()).unwrap();
        let utility = |s: AgentSet| inst.value(s) - s.iter().map(|i| prices[i]).sum::<f64>();
        let chosen = inst.demand_set(&pv).unwrap();
        let best = inst.ground().subsets().map(utility).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(utility(chosen) >= best - 1e-9);
    }

    #[test]
    fn swap_closed_form_matches_enumeration(inst in submodular(8), seed in any::<u64>()) {
        let Some(c) = random_feasible_contract(&mut rng(seed), &inst) else { return Ok(()) };
        let team = c.team().to_vec();
        for (a, &i) in team.iter().enumerate() {
            for &j in &team[a + 1..] {
                let fast = swap_equilibrium(&inst, &c, i, j).unwrap();
                let all = enumerate_equilibria(&inst, &c.swapped(i, j)).unwrap();
                prop_assert_eq!(&all, &fast.equilibria);
                prop_assert_eq!(all.len(), 1);
                let e = all[0];
                prop_assert!(e == c.team() || (e.is_subset_of(c.team()) && e.len() + 1 == c.team().len()));
            }
        }
    }

    #[test]
    fn enumerated_sets_are_equilibria(alpha in proptest::collection::vec(0.0..0.6f64, 4)) {
        let inst = worked_example(WorkedExample::E3);
        let c = TeamContract::new(inst.ground(), alpha).unwrap();
        for e in enumerate_equilibria(&inst, &c).unwrap() {
            prop_assert!(is_equilibrium(&inst, &c, e));
        }
    }

    #[test]
    fn closed_form_fairness_matches_definition(inst in submodular(7), seed in any::<u64>()) {
        let Some(c) = random_feasible_contract(&mut rng(seed), &inst) else { return Ok(()) };
        let closed = is_fair_submodular(&inst, &c).unwrap().fair;
        prop_assert_eq!(closed, is_fair_definitional(&inst, &c, Semantics::Optimistic).unwrap().fair);
        prop_assert_eq!(closed, is_fair(&inst, &c));
    }

    #[test]
    fn fair_swaps_drop_the_richer_agent(inst in submodular(7), seed in any::<u64>()) {
        let Some(c) = random_feasible_contract(&mut rng(seed), &inst) else { return Ok(()) };
        if !is_fair(&inst, &c) {
            return Ok(());
        }
        for i in c.team() {
            for j in c.team() {
                if c.share(i) < c.share(j) {
                    let out = swap_equilibrium(&inst, &c, i, j).unwrap();
                    prop_assert_eq!(out.equilibrium, Some(c.team().without(j)));
                }
            }
        }
    }

    #[test]
    fn raising_the_floor_keeps_fairness(inst in submodular(7), seed in any::<u64>(), extra in 0.0..0.3f64) {
        let mut rng = rng(seed);
        let Some(team) = random_team(&mut rng, &inst, 1) else { return Ok(()) };
        let floor = optimal_minimum_share(&inst, team).unwrap() + extra;
        let c = least_incentive_contract(&inst, team, floor).unwrap();
        prop_assert!(is_fair(&inst, &c));
    }

    #[test]
    fn exact_solvers_are_fair_and_ordered(inst in submodular(7)) {
        let fair = optimal_fair_bruteforce(&inst).unwrap();
        let nd = optimal_nondiscriminatory_bruteforce(&inst).unwrap();
        prop_assert!(is_fair(&inst, &fair.contract));
        prop_assert!(nd.revenue <= fair.revenue + 1e-9);
        prop_assert!((fair.revenue - fair_opt_oracle(&inst)).abs() <= 1e-9);
    }

    #[test]
    fn uniform_optimum_has_large_marginals(inst in submodular(7)) {
        let nd = optimal_nondiscriminatory_bruteforce(&inst).unwrap();
        let s = nd.team;
        if s.is_empty() {
            return Ok(());
        }
        let f = inst.value(s);
        let top = s.iter().map(|i| inst.cutoff_wage(i, s)).fold(0.0, f64::max);
        for k in s {
            prop_assert!(inst.marginal(k, s) / f >= top - 1e-9);
        }
    }

    #[test]
    fn scaling_output_meets_its_contract(inst in submodular(8), seed in any::<u64>(), lambda in 0.01..=1.0f64, t in 0.0..1.0f64) {
        let mut rng = rng(seed);
        let team = random_subset(&mut rng, inst.n());
        if team.is_empty() {
            return Ok(());
        }
        let psi = t * inst.value(team);
        if let Some(u) = scaling_lemma(&inst, team, lambda, psi).unwrap() {
            let top = team.iter().map(|i| inst.singleton_value(i)).fold(0.0, f64::max);
            let fu = inst.value(u);
            prop_assert!(fu >= (1.0 - lambda) * psi - 1e-9 && fu <= psi + top + 1e-9);
            for i in u {
                prop_assert!(inst.marginal(i, u) >= inst.marginal(i, team) - 1e-9);
            }
        }
    }

    #[test]
    fn constant_approx_is_fair_and_bounded(inst in submodular(7)) {
        let got = constant_approx(&inst, &SubmodApproxParams::default()).unwrap();
        let opt = optimal_fair_bruteforce(&inst).unwrap().revenue;
        prop_assert!(is_fair(&inst, &got.contract));
        prop_assert!(got.revenue <= opt + 1e-9);
        prop_assert!(got.revenue >= opt / 1536.0 - 1e-9);
    }

    #[test]
    fn greedy_matches_bruteforce(inst in additive(12)) {
        let greedy = nondiscriminatory_additive(&inst).unwrap().revenue;
        prop_assert!((greedy - nondiscriminatory_oracle(&inst)).abs() <= 1e-9);
    }

    #[test]
    fn generated_instances_validate(k in kind(), n in 1..=10usize, seed in any::<u64>()) {
        let inst = instance(k, n, seed);
        prop_assert!(inst.costs().iter().all(|&c| c > 0.0));
        prop_assert!(inst.value(AgentSet::EMPTY).abs() <= 1e-12);
        let rebuilt = Instance::new(inst.costs().to_vec(), RewardModel::explicit(
            inst.ground().subsets().map(|s| inst.value(s)).collect(),
        )).unwrap();
        prop_assert!(rebuilt.is_submodular());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn discretization_sandwich(inst in additive(8), gamma in 0.05..=1.0f64, bits in any::<u64>()) {
        let team = AgentSet::from_bits(bits).intersection(inst.ground());
        let Some(i_star) = team.iter().max_by(|&a, &b| {
            inst.singleton_value(a).total_cmp(&inst.singleton_value(b)).then(b.cmp(&a))
        }) else { return Ok(()) };
        let disc = Discretization::new(&inst, gamma, i_star).unwrap();
        let (approx, exact) = (disc.value(team), inst.value(team));
        let eps = fptas_epsilon(inst.n(), gamma);
        prop_assert!(approx <= exact + 1e-12);
        prop_assert!(exact <= approx / (1.0 - eps / (2.0 * inst.n() as f64)) + 1e-12);
    }

    #[test]
    fn fptas_candidates_are_fair(inst in additive(6), gamma in prop_oneof![Just(0.2), Just(0.5)]) {
        let mut unfair = Vec::new();
        fptas_case2_visit(&inst, gamma, |cand| {
            if inst.is_feasible(&cand.contract) && !is_fair(&inst, &cand.contract) {
                unfair.push(cand.contract.clone());
            }
        }).unwrap();
        prop_assert!(unfair.is_empty(), "unfair candidates: {:?}", unfair);
    }

    #[test]
    fn fptas_meets_its_guarantee(inst in additive(8), gamma in prop_oneof![Just(0.1), Just(0.2), Just(0.5)]) {
        let got = fptas(&inst, gamma).unwrap();
        let opt = fair_opt_oracle(&inst);
        prop_assert!(got.revenue >= (1.0 - gamma).powi(2) * opt - 1e-9);
        prop_assert!(got.revenue <= opt + 1e-9);
        prop_assert!(is_fair(&inst, &got.contract));
    }

    #[test]
    fn optimum_keeps_a_reserve(inst in additive(8), gamma in prop_oneof![Just(0.1), Just(0.2), Just(0.5)]) {
        let opt = optimal_fair_bruteforce(&inst).unwrap();
        let s = opt.team;
        let f = inst.value(s);
        if s.is_empty() || s.iter().any(|i| inst.singleton_value(i) >= (1.0 - gamma) * f) {
            return Ok(());
        }
        let eps = fptas_epsilon(inst.n(), gamma);
        prop_assert!(1.0 - opt.contract.total_share() >= eps / gamma - 1e-9);
    }

    #[test]
    fn dp_matches_exhaustive_search(inst in additive(10), gamma in 0.1..=1.0f64, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let i_star = (0..inst.n()).max_by(|&a, &b| inst.singleton_value(a).total_cmp(&inst.singleton_value(b))).unwrap();
        let disc = Discretization::new(&inst, gamma, i_star).unwrap();
        let domain = random_subset(&mut rng, inst.n()).with(i_star);
        let members = domain.to_vec();
        let i_bar = members[rng.gen_range(0..members.len())];
        let alpha: Vec<f64> = (0..inst.n()).map(|_| rng.gen::<f64>()).collect();
        let forced = AgentSet::singleton(i_star).with(i_bar);
        let target = disc.units_of(domain.subsets().nth(rng.gen_range(0..1usize << domain.len())).unwrap().union(forced));
        let best = domain
            .subsets()
            .filter(|s| forced.is_subset_of(*s) && disc.units_of(*s) == target)
            .map(|s| s.iter().map(|i| alpha[i]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let got = dp_solve(&disc, domain, i_bar, target, &alpha).unwrap();
        prop_assert!(best.is_finite());
        let sol = got.unwrap();
        prop_assert!((sol.total_share - best).abs() <= 1e-12);
        prop_assert_eq!(disc.units_of(sol.team), target);
        prop_assert!(forced.is_subset_of(sol.team) && sol.team.is_subset_of(domain));
    }

    #[test]
    fn knapsack_table_matches_enumeration(weights in proptest::collection::vec((0u64..6, 0.0..1.0f64), 1..9), cap in 0u64..20) {
        let items: Vec<DpItem> = weights.iter().enumerate().map(|(agent, &(weight, share))| DpItem { agent, weight, share }).collect();
        let table = DpTable::build(&[], &items, cap);
        for y in 0..=cap {
            let best = AgentSet::full(items.len())
                .subsets()
                .filter(|s| s.iter().map(|i| items[i].weight).sum::<u64>() == y)
                .map(|s| s.iter().map(|i| items[i].share).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            let got = table.value(items.len(), y);
            prop_assert!(got == best || (got - best).abs() <= 1e-12, "y={} got {} want {}", y, got, best);
        }
    }

    #[test]
    fn subset_sum_reduction_is_sound(weights in proptest::collection::vec(1u64..=20, 1..=8), k_seed in any::<usize>()) {
        let k = 1 + k_seed % weights.len();
        let spec = SubsetSumSpec::new(weights, k).unwrap();
        let (inst, threshold) = subset_sum_instance(&spec).unwrap();
        let opt = optimal_fair_bruteforce(&inst).unwrap().revenue;
        prop_assert_eq!(opt >= threshold - inst.tol(), spec.has_half_sum_subset());
    }
}
